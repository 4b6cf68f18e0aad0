#include "softstab/instances.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace softstab {

namespace {

constexpr double kBracketFloor = 1e-15;

bool is_power_of_two(Index m) { return m >= 1 && (m & (m - 1)) == 0; }

Eigen::Vector2d unit_contrast() { return Eigen::Vector2d(1.0, -1.0) / std::sqrt(2.0); }

double pitchfork_slope(double beta, double m) {
  const double s = 1.0 / std::cosh(0.5 * beta * m);
  return 0.5 * beta * s * s - 1.0;
}

}  // namespace

AffineLogitSystem pitchfork_system(double beta) {
  Eigen::MatrixXd w(2, 2);
  w << 0.0, -1.0, -1.0, 0.0;
  return AffineLogitSystem::single(std::move(w), Eigen::VectorXd::Zero(2), beta);
}

std::vector<PitchforkRoot> solve_pitchfork(double beta, double tol) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw PreconditionError("solve_pitchfork: beta must be positive");
  if (!(tol > 0.0)) throw PreconditionError("solve_pitchfork: tol must be positive");
  const PitchforkRoot origin{0.0, beta <= 2.0};
  if (beta <= 2.0) return {origin};

  auto g = [beta](double m) { return std::tanh(0.5 * beta * m) - m; };
  double lo = kBracketFloor, hi = 1.0;
  if (!(g(lo) > 0.0)) return {origin};  // root below the bracket floor
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (g(mid) > 0.0 ? lo : hi) = mid;
  }
  const double m = 0.5 * (lo + hi);
  const bool stable = pitchfork_slope(beta, m) < 0.0;
  return {{-m, stable}, origin, {m, stable}};
}

PitchforkDiagram pitchfork_diagram(const std::vector<double>& beta_grid, double tol) {
  PitchforkDiagram d;
  d.beta_grid = beta_grid;
  d.roots.reserve(beta_grid.size());
  for (double beta : beta_grid) d.roots.push_back(solve_pitchfork(beta, tol));
  return d;
}

Eigen::MatrixXd hadamard_matrix(Index m) {
  if (!is_power_of_two(m)) throw PreconditionError("hadamard_matrix: order must be a power of two");
  Eigen::MatrixXd h = Eigen::MatrixXd::Ones(1, 1);
  while (h.rows() < m) {
    const Index k = h.rows();
    Eigen::MatrixXd next(2 * k, 2 * k);
    next << h, h, h, -h;
    h = std::move(next);
  }
  return h;
}

AffineLogitSystem hadamard_separation(Index m, double alpha) {
  if (!(alpha > 0.0)) throw PreconditionError("hadamard_separation: alpha must be positive");
  const Eigen::MatrixXd h = hadamard_matrix(m);
  const Eigen::Vector2d u = unit_contrast();
  const Eigen::Matrix2d uu = u * u.transpose();
  const double scale = alpha / std::sqrt(static_cast<double>(m));
  Eigen::MatrixXd w(2 * m, 2 * m);
  for (Index a = 0; a < m; ++a)
    for (Index b = 0; b < m; ++b) w.block<2, 2>(2 * a, 2 * b) = scale * h(a, b) * uu;
  return AffineLogitSystem(BlockLayout(std::vector<Index>(static_cast<std::size_t>(m), 2)),
                           std::move(w), Eigen::VectorXd::Zero(2 * m),
                           std::vector<double>(static_cast<std::size_t>(m), 1.0));
}

AffineLogitSystem upper_triangular_counterexample(Index m, double c) {
  if (m < 2) throw PreconditionError("upper_triangular_counterexample: need m >= 2");
  if (!(c > 0.0)) throw PreconditionError("upper_triangular_counterexample: c must be positive");
  const Eigen::Vector2d u = unit_contrast();
  const Eigen::Matrix2d uu = u * u.transpose();
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(2 * m, 2 * m);
  for (Index a = 0; a < m; ++a)
    for (Index b = a + 1; b < m; ++b) w.block<2, 2>(2 * a, 2 * b) = c * uu;
  return AffineLogitSystem(BlockLayout(std::vector<Index>(static_cast<std::size_t>(m), 2)),
                           std::move(w), Eigen::VectorXd::Zero(2 * m),
                           std::vector<double>(static_cast<std::size_t>(m), 1.0));
}

std::string_view to_string(RandomKind kind) {
  switch (kind) {
    case RandomKind::Gaussian:
      return "gaussian";
    case RandomKind::GaussianSymmetric:
      return "gaussian_symmetric";
    case RandomKind::Shifted:
      return "shifted";
    case RandomKind::ShiftedSymmetric:
      return "shifted_symmetric";
  }
  return "gaussian";
}

RandomKind parse_random_kind(std::string_view name) {
  for (RandomKind k : {RandomKind::Gaussian, RandomKind::GaussianSymmetric, RandomKind::Shifted,
                       RandomKind::ShiftedSymmetric})
    if (to_string(k) == name) return k;
  throw ParseError("unknown instance kind '" + std::string(name) + "'");
}

bool is_shifted(RandomKind kind) {
  return kind == RandomKind::Shifted || kind == RandomKind::ShiftedSymmetric;
}

bool is_symmetric(RandomKind kind) {
  return kind == RandomKind::GaussianSymmetric || kind == RandomKind::ShiftedSymmetric;
}

AffineLogitSystem random_instance(RandomKind kind, Index n, double scale, SeedSpec seed,
                                  const RandomOptions& options) {
  if (n < 2) throw PreconditionError("random_instance: need n >= 2");
  if (!(scale > 0.0)) throw PreconditionError("random_instance: scale must be positive");
  Rng rng(seed);
  Eigen::MatrixXd w(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) w(i, j) = rng.normal(0.0, scale);
  if (is_symmetric(kind)) w = (0.5 * (w + w.transpose())).eval();

  Eigen::VectorXd b(n);
  for (Index i = 0; i < n; ++i) b[i] = rng.normal(0.0, options.bias_scale);

  if (is_shifted(kind)) {
    const double s = options.shift_scale * scale;
    Eigen::VectorXd a(n), c(n);
    for (Index i = 0; i < n; ++i) a[i] = rng.normal(0.0, s);
    if (is_symmetric(kind)) {
      c = a;
    } else {
      for (Index i = 0; i < n; ++i) c[i] = rng.normal(0.0, s);
    }
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
    w += ones * a.transpose() + c * ones.transpose();
  }
  return AffineLogitSystem::single(std::move(w), std::move(b), 1.0);
}

ProductPointd dirichlet_point(const BlockLayout& layout, Rng& rng) {
  Eigen::VectorXd v(layout.total());
  for (Index a = 0; a < layout.num_blocks(); ++a) {
    auto block = v.segment(layout.offset(a), layout.dim(a));
    for (Index i = 0; i < block.size(); ++i) block[i] = rng.exponential();
    block /= block.sum();
  }
  return ProductPointd::normalize(layout, v);
}

ProductPointd dirichlet_start(const BlockLayout& layout, SeedSpec seed) {
  Rng rng(seed);
  return dirichlet_point(layout, rng);
}

}  // namespace softstab
