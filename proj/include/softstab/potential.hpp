#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string_view>

#include "softstab/certificates.hpp"
#include "softstab/rng.hpp"
#include "softstab/system.hpp"

namespace softstab {

/// Smallest coordinate accepted by the potential routines.
inline constexpr double kInteriorGuard = 1e-12;
/// Points with a coordinate below this are evaluated but flagged.
inline constexpr double kNearBoundary = 1e-8;

/// Which normalization of the entropy-regularized potential is reported.
///
///   Psi(x)    = sum_a H(x^a) / beta_a + x^T W x / 2 + b^T x
///   Phi_beta  = beta Psi   (single block, one beta)
enum class PotentialForm { PhiBeta, Psi };

std::string_view to_string(PotentialForm f);

/// Phi_beta for single-block systems, Psi otherwise.
PotentialForm potential_form(const AffineLogitSystem& system);

struct PotentialEval {
  PotentialForm form = PotentialForm::Psi;
  double value = 0.0;
  Eigen::VectorXd gradient;
  /// ||Pi grad||_2 with Pi the block projection; zero exactly at KKT points.
  double kkt_residual = 0.0;
  /// Largest eigenvalue of the Hessian restricted to the block tangent space.
  double tangent_hessian_max = 0.0;
  bool near_boundary = false;
};

/// Value, gradient and tangent curvature at an interior point.
/// Throws PreconditionError for asymmetric W or a coordinate below 1e-12.
PotentialEval eval_potential(const AffineLogitSystem& system, const ProductPointd& x);

/// Potential value only (same form and preconditions as eval_potential).
double potential_value(const AffineLogitSystem& system, const ProductPointd& x);

/// v^T Hess v = -sum_a (1/beta_a) sum_i (v_i^a)^2 / x_i^a + v^T W v, in the
/// reported form (multiplied by beta for Phi_beta). v must sum to zero per block.
double tangent_hessian_quadform(const AffineLogitSystem& system, const ProductPointd& x,
                                const Eigen::VectorXd& v);

struct CurvatureSides {
  double lhs = 0.0;  // sum_i v_i^2 / x_i
  double rhs = 0.0;  // 2 ||v||^2
};

/// Both sides of the tangent entropy curvature inequality lhs >= rhs.
CurvatureSides entropy_curvature_check(const SimplexPointd& x, const TangentVectord& v);

struct ProbeOptions {
  Index points = 256;
  Index directions = 16;
  SeedSpec seed{0x51AB1E, 0};
};

struct VariationalVerdict {
  SymmetricCertificate certificate;
  /// Analytic verdict; the probe below is diagnostic only.
  bool certified = false;
  Index probes = 0;
  Index nonnegative_probes = 0;
  /// Largest normalized quadratic form v^T Hess v / ||v||^2 seen.
  double max_probe = 0.0;
};

/// Strict concavity check: the symmetric certificate plus an empirical probe
/// of the tangent Hessian at the barycenter and Dirichlet(1) points.
VariationalVerdict variational_uniqueness(const AffineLogitSystem& system,
                                          const ProbeOptions& options = {});

}  // namespace softstab
