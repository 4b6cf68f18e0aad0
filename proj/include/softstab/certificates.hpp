#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string_view>

#include "softstab/system.hpp"

namespace softstab {

/// Outcome of comparing a certificate value against its threshold.
///
/// Passing uses strict inequality. Values within kBoundaryRelTol of the
/// threshold are reported as Boundary (not certified) so that rounding never
/// turns an equality case into a pass.
enum class Verdict { Pass, Boundary, Fail };

inline constexpr double kBoundaryRelTol = 1e-12;

std::string_view to_string(Verdict v);

/// Pass iff value < threshold (outside the boundary band).
Verdict compare_threshold(double value, double threshold);

struct ContractionCertificate {
  double q_old = 0.0;  // ||B_beta W||_2, unit-softmax factor
  double q_new = 0.0;  // (1/2) ||B_beta Pi W Pi||
  Verdict old_verdict = Verdict::Fail;
  Verdict new_verdict = Verdict::Fail;
  double old_margin = 0.0;  // 1 - q_old
  double new_margin = 0.0;  // 1 - q_new
};

struct SymmetricCertificate {
  /// lambda_max(B^{1/2} Pi W Pi B^{1/2}) on the tangent space (beta kappa for m = 1).
  double kappa_scaled = 0.0;
  /// Unscaled tangent lambda_max; only meaningful for single-block systems.
  std::optional<double> kappa;
  /// Single-block kappa <= 0 branch, which certifies at every beta.
  bool nonpositive_branch = false;
  Verdict verdict = Verdict::Fail;
  double margin = 0.0;  // 2 - kappa_scaled
};

struct DobrushinCertificate {
  Eigen::MatrixXd influence;  // C_ab = (beta_a / 2) ||Pi_a W^{ab} Pi_b||_{1->1}
  double rho = 0.0;
  Verdict verdict = Verdict::Fail;
  double margin = 0.0;  // 1 - rho
};

/// Certified inverse-temperature thresholds when all blocks share one beta.
struct BetaRange {
  double norm_ambient = 0.0;  // ||W||_2
  double norm_tangent = 0.0;  // ||Pi W Pi||
  double beta_old = 0.0;      // 1 / ||W||_2
  double beta_new = 0.0;      // 2 / ||Pi W Pi||
  double gain = 0.0;          // beta_new / beta_old, +inf when the tangent part vanishes
};

struct CertificateReport {
  ContractionCertificate contraction;
  std::optional<SymmetricCertificate> symmetric;
  DobrushinCertificate dobrushin;
  std::optional<BetaRange> beta_range;
  bool symmetric_w = false;
};

ContractionCertificate certify_contraction(const AffineLogitSystem& system);

/// Throws PreconditionError for asymmetric W.
SymmetricCertificate certify_symmetric(const AffineLogitSystem& system);

DobrushinCertificate certify_dobrushin(const AffineLogitSystem& system);

/// The m x m block influence matrix used by certify_dobrushin.
Eigen::MatrixXd dobrushin_influence(const AffineLogitSystem& system);

/// Treats the common beta as free. Throws PreconditionError when the blocks
/// carry different temperatures.
BetaRange certified_beta_range(const AffineLogitSystem& system);

/// Every certificate that applies to the system.
CertificateReport certify(const AffineLogitSystem& system);

}  // namespace softstab
