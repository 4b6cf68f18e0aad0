#pragma once

#include <Eigen/Dense>

#include <optional>
#include <vector>

#include "softstab/system.hpp"

namespace softstab {

/// Samples of a discrete (Picard) or continuous (logit ODE) trajectory.
///
/// For Picard runs `times[k] = k` and `residuals[k] = ||x_{k+1} - x_k||`, so
/// there is one residual fewer than samples. For ODE runs `times` holds t and
/// `residuals[k] = ||F(x(t_k)) - x(t_k)||`, one per sample.
/// `envelope[k]` is an a-priori bound on ||x_k - x*||: q^k r_0 / (1 - q) for
/// Picard, e^{-(1-q) t} ||x_0 - x*|| for the ODE. Empty when q_new >= 1.
struct TrajectoryRecord {
  enum class Kind { Picard, Ode };

  Kind kind = Kind::Picard;
  BlockLayout layout;
  std::vector<double> times;
  std::vector<Eigen::VectorXd> samples;
  std::vector<double> residuals;
  std::vector<double> envelope;
  bool converged = false;
  /// q_new < 1, so the stopping rule carries an a-posteriori error guarantee.
  bool guaranteed = false;
  double q_new = 0.0;
  std::optional<Eigen::VectorXd> fixed_point;
  /// Largest simplex drift corrected by renormalization (ODE only).
  double max_drift = 0.0;
  int renormalizations = 0;
};

struct PicardOptions {
  Index max_iter = 10000;
  double tol = 1e-10;
  /// Store every iterate; otherwise only x_0 and the last iterate are kept.
  bool record_samples = true;
};

/// Picard iteration x_{k+1} = F(x_k).
///
/// With q = q_new < 1 it stops at ||x_{k+1} - x_k|| <= tol (1 - q), which
/// certifies ||x_{k+1} - x*|| <= tol. Otherwise it stops when the raw
/// residual is <= tol. Exhausting max_iter returns converged = false.
TrajectoryRecord picard(const AffineLogitSystem& system, const ProductPointd& x0,
                        const PicardOptions& options = {});

struct OdeOptions {
  double t_end = 50.0;
  double dt = 0.01;
  /// Record every n-th step (the final state is always recorded).
  Index sample_every = 1;
  /// converged iff the final ||F(x) - x|| is at most this.
  double tol = 1e-9;
};

/// Classical RK4 on xdot = F(x) - x. Throws PreconditionError unless 0 < dt < 1.
TrajectoryRecord logit_ode(const AffineLogitSystem& system, const ProductPointd& x0,
                           const OdeOptions& options = {});

struct CollapseRecord {
  /// diameters[k] = max pairwise ||x_k^i - x_k^j|| after k lockstep steps.
  std::vector<double> diameters;
  bool converged = false;
};

/// Picard from every start in lockstep, recording the iterate diameter.
/// Stops after max_iter steps or once the diameter is <= tol (tol = 0 runs
/// all steps). Requires at least two starts.
CollapseRecord multi_start_collapse(const AffineLogitSystem& system,
                                    const std::vector<ProductPointd>& starts, Index max_iter,
                                    double tol);

/// q_new = (1/2) ||B_beta Pi W Pi||.
double contraction_factor(const AffineLogitSystem& system);

}  // namespace softstab
