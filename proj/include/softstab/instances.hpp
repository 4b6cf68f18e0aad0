#pragma once

#include <Eigen/Dense>

#include <string_view>
#include <vector>

#include "softstab/rng.hpp"
#include "softstab/system.hpp"

namespace softstab {

/// Two-action model W = [[0, -1], [-1, 0]], b = 0. Writing x = ((1+m)/2, (1-m)/2)
/// the fixed points are the roots of m = tanh(beta m / 2).
AffineLogitSystem pitchfork_system(double beta);

struct PitchforkRoot {
  double m = 0.0;
  bool stable = false;
};

/// Roots of m = tanh(beta m / 2) in increasing order: {0} for beta <= 2,
/// {-m*, 0, m*} above. The positive root is found by bisection on
/// (1e-15, 1) down to a bracket of width tol. Stability is the sign of
/// g'(m) = (beta/2) sech^2(beta m / 2) - 1; the origin counts as stable at beta = 2.
std::vector<PitchforkRoot> solve_pitchfork(double beta, double tol = 1e-14);

struct PitchforkDiagram {
  std::vector<double> beta_grid;
  std::vector<std::vector<PitchforkRoot>> roots;  // one entry per grid point
};

PitchforkDiagram pitchfork_diagram(const std::vector<double>& beta_grid, double tol = 1e-14);

/// Sylvester Hadamard matrix of order m (a power of two).
Eigen::MatrixXd hadamard_matrix(Index m);

/// m binary blocks with W^{ab} = (alpha / sqrt m) H_ab u u^T, u = (1, -1)/sqrt 2,
/// beta_a = 1, b = 0.
AffineLogitSystem hadamard_separation(Index m, double alpha);

/// m binary blocks with W^{ab} = c u u^T for a < b and zero otherwise.
AffineLogitSystem upper_triangular_counterexample(Index m, double c);

enum class RandomKind { Gaussian, GaussianSymmetric, Shifted, ShiftedSymmetric };

std::string_view to_string(RandomKind kind);
/// Parses "gaussian", "gaussian_symmetric", "shifted", "shifted_symmetric".
RandomKind parse_random_kind(std::string_view name);
bool is_shifted(RandomKind kind);
bool is_symmetric(RandomKind kind);

struct RandomOptions {
  /// Shift vector entries ~ N(0, (shift_scale * scale)^2).
  double shift_scale = 3.0;
  /// Bias entries ~ N(0, bias_scale^2).
  double bias_scale = 1.0;
};

/// Single-simplex system of size n with beta = 1.
///
/// The base matrix has N(0, scale^2) entries (symmetrized as (M + M^T)/2 for the
/// symmetric kinds) and is drawn before anything else, so the shifted kinds
/// share their tangent part with the unshifted kind of the same symmetry and
/// seed. Shifted kinds add 1 a^T + c 1^T (1 a^T + a 1^T when symmetric).
AffineLogitSystem random_instance(RandomKind kind, Index n, double scale, SeedSpec seed,
                                  const RandomOptions& options = {});

/// Dirichlet(1, ..., 1) in every block via normalized exponentials.
ProductPointd dirichlet_point(const BlockLayout& layout, Rng& rng);
ProductPointd dirichlet_start(const BlockLayout& layout, SeedSpec seed);

}  // namespace softstab
