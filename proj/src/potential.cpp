#include "softstab/potential.hpp"

#include <algorithm>
#include <cmath>

#include "softstab/instances.hpp"
#include "softstab/spectral.hpp"

namespace softstab {

namespace {

void require_symmetric(const AffineLogitSystem& system, const char* what) {
  if (!system.symmetric())
    throw PreconditionError(std::string(what) + ": W is not symmetric");
}

void require_interior(const AffineLogitSystem& system, const ProductPointd& x, const char* what) {
  if (!(x.layout() == system.layout()))
    throw DimensionError(std::string(what) + ": point does not match system");
  if (x.values().minCoeff() < kInteriorGuard)
    throw PreconditionError(std::string(what) + ": point is on the boundary");
}

// 1 / beta_a for every coordinate.
Eigen::VectorXd inverse_temperatures(const AffineLogitSystem& system) {
  return system.beta_diagonal().cwiseInverse();
}

double form_scale(const AffineLogitSystem& system) {
  return potential_form(system) == PotentialForm::PhiBeta ? system.beta().front() : 1.0;
}

double psi_value(const AffineLogitSystem& system, const Eigen::VectorXd& x) {
  const Eigen::VectorXd inv_beta = inverse_temperatures(system);
  const double entropy = -(inv_beta.array() * x.array() * x.array().log()).sum();
  return entropy + 0.5 * x.dot(system.W() * x) + system.b().dot(x);
}

}  // namespace

std::string_view to_string(PotentialForm f) {
  return f == PotentialForm::PhiBeta ? "phi_beta" : "psi";
}

PotentialForm potential_form(const AffineLogitSystem& system) {
  return system.num_blocks() == 1 ? PotentialForm::PhiBeta : PotentialForm::Psi;
}

PotentialEval eval_potential(const AffineLogitSystem& system, const ProductPointd& x) {
  require_symmetric(system, "eval_potential");
  require_interior(system, x, "eval_potential");
  const auto& v = x.values();
  const double scale = form_scale(system);
  const Eigen::VectorXd inv_beta = inverse_temperatures(system);

  PotentialEval out;
  out.form = potential_form(system);
  out.near_boundary = v.minCoeff() < kNearBoundary;
  out.value = scale * psi_value(system, v);
  out.gradient = scale * (-(inv_beta.array() * (1.0 + v.array().log())).matrix() +
                          system.W() * v + system.b());
  out.kkt_residual = project_blocks(out.gradient, system.layout()).norm();

  Eigen::MatrixXd hess = system.W();
  hess.diagonal() -= (inv_beta.array() / v.array()).matrix();
  hess *= scale;
  const Eigen::MatrixXd q = tangent_basis<double>(system.layout());
  if (q.cols() > 0) {
    const auto eig = jacobi_eigen(Eigen::MatrixXd(q.transpose() * hess * q));
    out.tangent_hessian_max = eig.values[eig.values.size() - 1];
  }
  return out;
}

double potential_value(const AffineLogitSystem& system, const ProductPointd& x) {
  require_symmetric(system, "potential_value");
  require_interior(system, x, "potential_value");
  return form_scale(system) * psi_value(system, x.values());
}

double tangent_hessian_quadform(const AffineLogitSystem& system, const ProductPointd& x,
                                const Eigen::VectorXd& v) {
  require_symmetric(system, "tangent_hessian_quadform");
  require_interior(system, x, "tangent_hessian_quadform");
  const auto& layout = system.layout();
  if (v.size() != layout.total()) throw DimensionError("tangent_hessian_quadform: direction size");
  for (Index a = 0; a < layout.num_blocks(); ++a)
    static_cast<void>(TangentVectord(v.segment(layout.offset(a), layout.dim(a))));
  const Eigen::VectorXd inv_beta = inverse_temperatures(system);
  const double entropy = (inv_beta.array() * v.array().square() / x.values().array()).sum();
  return form_scale(system) * (-entropy + v.dot(system.W() * v));
}

CurvatureSides entropy_curvature_check(const SimplexPointd& x, const TangentVectord& v) {
  if (x.size() != v.size()) throw DimensionError("entropy_curvature_check: size mismatch");
  if (x.values().minCoeff() < kInteriorGuard)
    throw PreconditionError("entropy_curvature_check: point is on the boundary");
  CurvatureSides s;
  s.lhs = (v.values().array().square() / x.values().array()).sum();
  s.rhs = 2.0 * v.values().squaredNorm();
  return s;
}

VariationalVerdict variational_uniqueness(const AffineLogitSystem& system,
                                          const ProbeOptions& options) {
  require_symmetric(system, "variational_uniqueness");
  VariationalVerdict out;
  out.certificate = certify_symmetric(system);
  out.certified = out.certificate.verdict == Verdict::Pass;

  const auto& layout = system.layout();
  if (layout.total() == layout.num_blocks()) return out;  // no tangent directions
  Rng rng(options.seed);
  out.max_probe = -std::numeric_limits<double>::infinity();
  for (Index p = 0; p < options.points; ++p) {
    ProductPointd x = ProductPointd::uniform(layout);
    if (p > 0) {
      do {
        x = dirichlet_point(layout, rng);
      } while (x.values().minCoeff() < kInteriorGuard);
    }
    for (Index d = 0; d < options.directions; ++d) {
      Eigen::VectorXd v(layout.total());
      for (Index i = 0; i < v.size(); ++i) v[i] = rng.normal();
      v = project_blocks(v, layout);
      const double norm2 = v.squaredNorm();
      if (norm2 == 0.0) continue;
      const double value = tangent_hessian_quadform(system, x, v) / norm2;
      ++out.probes;
      if (value >= 0.0) ++out.nonnegative_probes;
      out.max_probe = std::max(out.max_probe, value);
    }
  }
  return out;
}

}  // namespace softstab
