#include "softstab/certificates.hpp"

#include <cmath>
#include <limits>

#include "softstab/spectral.hpp"

namespace softstab {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass:
      return "pass";
    case Verdict::Boundary:
      return "boundary";
    case Verdict::Fail:
      return "fail";
  }
  return "fail";
}

Verdict compare_threshold(double value, double threshold) {
  if (std::abs(value - threshold) <= kBoundaryRelTol * std::abs(threshold))
    return Verdict::Boundary;
  return value < threshold ? Verdict::Pass : Verdict::Fail;
}

ContractionCertificate certify_contraction(const AffineLogitSystem& system) {
  ContractionCertificate c;
  const Eigen::VectorXd scale = system.beta_diagonal();
  c.q_old = spectral_norm(scale.asDiagonal() * system.W());
  c.q_new = 0.5 * block_tangent_norm(system, /*scaled=*/true);
  c.old_verdict = compare_threshold(c.q_old, 1.0);
  c.new_verdict = compare_threshold(c.q_new, 1.0);
  c.old_margin = 1.0 - c.q_old;
  c.new_margin = 1.0 - c.q_new;
  return c;
}

SymmetricCertificate certify_symmetric(const AffineLogitSystem& system) {
  if (!system.symmetric()) throw PreconditionError("certify_symmetric: W is not symmetric");
  SymmetricCertificate c;
  const Eigen::VectorXd root = system.beta_diagonal().cwiseSqrt();
  const Eigen::MatrixXd scaled = root.asDiagonal() * system.W() * root.asDiagonal();
  c.kappa_scaled = tangent_lambda_max(scaled, system.layout());
  if (system.num_blocks() == 1) {
    c.kappa = tangent_lambda_max(system.W(), system.layout());
    c.nonpositive_branch = *c.kappa <= 0.0;
  }
  c.verdict = c.nonpositive_branch ? Verdict::Pass : compare_threshold(c.kappa_scaled, 2.0);
  c.margin = 2.0 - c.kappa_scaled;
  return c;
}

Eigen::MatrixXd dobrushin_influence(const AffineLogitSystem& system) {
  const auto& layout = system.layout();
  const Index m = layout.num_blocks();
  const Eigen::MatrixXd tangent = project_matrix(system.W(), layout);
  Eigen::MatrixXd c(m, m);
  for (Index a = 0; a < m; ++a) {
    const double beta = system.beta()[static_cast<std::size_t>(a)];
    for (Index b = 0; b < m; ++b) {
      const auto block =
          tangent.block(layout.offset(a), layout.offset(b), layout.dim(a), layout.dim(b));
      c(a, b) = 0.5 * beta * l1_operator_norm(block);
    }
  }
  return c;
}

DobrushinCertificate certify_dobrushin(const AffineLogitSystem& system) {
  DobrushinCertificate c;
  c.influence = dobrushin_influence(system);
  c.rho = spectral_radius_nonneg(c.influence);
  c.verdict = compare_threshold(c.rho, 1.0);
  c.margin = 1.0 - c.rho;
  return c;
}

BetaRange certified_beta_range(const AffineLogitSystem& system) {
  if (!system.uniform_beta())
    throw PreconditionError("certified_beta_range: blocks carry different temperatures");
  constexpr double inf = std::numeric_limits<double>::infinity();
  BetaRange r;
  r.norm_ambient = spectral_norm(system.W());
  r.norm_tangent = block_tangent_norm(system, /*scaled=*/false);
  r.beta_old = r.norm_ambient > 0.0 ? 1.0 / r.norm_ambient : inf;
  r.beta_new = r.norm_tangent > 0.0 ? 2.0 / r.norm_tangent : inf;
  r.gain = r.norm_tangent > 0.0 ? 2.0 * r.norm_ambient / r.norm_tangent : inf;
  return r;
}

CertificateReport certify(const AffineLogitSystem& system) {
  CertificateReport report;
  report.symmetric_w = system.symmetric();
  report.contraction = certify_contraction(system);
  if (system.symmetric()) report.symmetric = certify_symmetric(system);
  report.dobrushin = certify_dobrushin(system);
  if (system.uniform_beta()) report.beta_range = certified_beta_range(system);
  return report;
}

}  // namespace softstab
