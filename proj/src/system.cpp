#include "softstab/system.hpp"

#include <algorithm>
#include <cmath>

#include "softstab/spectral.hpp"

namespace softstab {

AffineLogitSystem::AffineLogitSystem(BlockLayout layout, Eigen::MatrixXd w, Eigen::VectorXd b,
                                     std::vector<double> beta)
    : layout_(std::move(layout)), w_(std::move(w)), b_(std::move(b)), beta_(std::move(beta)) {
  const Index n = layout_.total();
  if (n == 0) throw ValidationError("system: empty block layout");
  if (w_.rows() != n || w_.cols() != n)
    throw ValidationError("system: W must be " + std::to_string(n) + "x" + std::to_string(n));
  if (b_.size() != n) throw ValidationError("system: b must have length " + std::to_string(n));
  if (static_cast<Index>(beta_.size()) != layout_.num_blocks())
    throw ValidationError("system: need one beta per block");
  if (!w_.allFinite()) throw ValidationError("system: W has a non-finite entry");
  if (!b_.allFinite()) throw ValidationError("system: b has a non-finite entry");
  for (double bt : beta_)
    if (!(bt > 0.0) || !std::isfinite(bt))
      throw ValidationError("system: every beta must be positive and finite");
  symmetric_ = is_symmetric(w_);
}

AffineLogitSystem AffineLogitSystem::single(Eigen::MatrixXd w, Eigen::VectorXd b, double beta) {
  const Index n = w.rows();
  return AffineLogitSystem(BlockLayout::single(n), std::move(w), std::move(b), {beta});
}

Eigen::VectorXd AffineLogitSystem::beta_diagonal() const {
  Eigen::VectorXd d(layout_.total());
  for (Index a = 0; a < layout_.num_blocks(); ++a)
    d.segment(layout_.offset(a), layout_.dim(a)).setConstant(beta_[static_cast<std::size_t>(a)]);
  return d;
}

bool AffineLogitSystem::uniform_beta() const {
  return std::all_of(beta_.begin(), beta_.end(), [&](double x) { return x == beta_.front(); });
}

AffineLogitSystem AffineLogitSystem::with_beta(std::vector<double> beta) const {
  return AffineLogitSystem(layout_, w_, b_, std::move(beta));
}

AffineLogitSystem AffineLogitSystem::with_uniform_beta(double beta) const {
  return with_beta(std::vector<double>(beta_.size(), beta));
}

AffineLogitSystem AffineLogitSystem::with_bias(Eigen::VectorXd b) const {
  return AffineLogitSystem(layout_, w_, std::move(b), beta_);
}

Eigen::VectorXd response_values(const AffineLogitSystem& system, const Eigen::VectorXd& x) {
  const auto& layout = system.layout();
  if (x.size() != layout.total()) throw DimensionError("response: state does not match system");
  const Eigen::VectorXd payoff = system.W() * x + system.b();
  Eigen::VectorXd out(layout.total());
  for (Index a = 0; a < layout.num_blocks(); ++a) {
    const double beta = system.beta()[static_cast<std::size_t>(a)];
    out.segment(layout.offset(a), layout.dim(a)) =
        softmax(beta * payoff.segment(layout.offset(a), layout.dim(a))).values();
  }
  return out;
}

ProductPointd response(const AffineLogitSystem& system, const ProductPointd& x) {
  if (!(x.layout() == system.layout()))
    throw DimensionError("response: state block structure does not match system");
  return ProductPointd(system.layout(), response_values(system, x.values()));
}

Eigen::MatrixXd response_jacobian(const AffineLogitSystem& system, const ProductPointd& x) {
  const ProductPointd fx = response(system, x);
  const auto& layout = system.layout();
  Eigen::MatrixXd jac(layout.total(), layout.total());
  for (Index a = 0; a < layout.num_blocks(); ++a) {
    const Index off = layout.offset(a);
    const Index n = layout.dim(a);
    const double beta = system.beta()[static_cast<std::size_t>(a)];
    const Eigen::MatrixXd sigma = softmax_covariance(SimplexPointd(fx.block(a)));
    jac.middleRows(off, n) = beta * sigma * system.W().middleRows(off, n);
  }
  return jac;
}

SystemDiagnostics validate(const AffineLogitSystem& system) {
  SystemDiagnostics d;
  d.symmetry.max_asymmetry = max_asymmetry(system.W());
  d.symmetry.is_symmetric = d.symmetry.max_asymmetry <= kSymmetryTol;
  d.block_dims = system.layout().dims();
  d.beta = system.beta();
  d.beta_diagonal = system.beta_diagonal();
  d.ambient_norm = spectral_norm(system.W());
  const Eigen::MatrixXd tangent = project_matrix(system.W(), system.layout());
  d.tangent_norm = spectral_norm(tangent);
  const Eigen::MatrixXd shift = system.W() - tangent;
  d.shift_norm = shift.cwiseAbs().maxCoeff() == 0.0 ? 0.0 : spectral_norm(shift);
  for (Index a = 0; a < system.num_blocks(); ++a)
    if (system.layout().dim(a) == 1)
      d.warnings.push_back("block " + std::to_string(a) + " has a single action");
  if (d.tangent_norm == 0.0) d.warnings.push_back("W has no tangent component");
  return d;
}

double block_tangent_norm(const AffineLogitSystem& system, bool scaled) {
  if (!scaled) return tangent_operator_norm(system.W(), system.layout());
  return softstab::block_tangent_norm(system.W(), system.layout(), system.beta_diagonal());
}

}  // namespace softstab
