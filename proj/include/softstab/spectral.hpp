#pragma once

// Dense spectral utilities for the certificates: operator norms on tangent
// subspaces, tangent eigenvalues of symmetric operators, l1 operator norms and
// Perron roots of nonnegative matrices. Target sizes are at most a few hundred.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "softstab/errors.hpp"
#include "softstab/geometry.hpp"
#include "softstab/rng.hpp"

namespace softstab {

inline constexpr double kDefaultSpectralTol = 1e-10;
inline constexpr double kSymmetryTol = 1e-10;
inline constexpr Index kMaxDenseDim = 512;

template <typename Scalar>
struct SymmetricEigen {
  Vector<Scalar> values;   // ascending
  Matrix<Scalar> vectors;  // columns; empty unless requested
  int sweeps = 0;
};

/// Cyclic Jacobi eigen-solver for a symmetric matrix.
///
/// Rotations are applied until the off-diagonal Frobenius norm drops below
/// machine epsilon times the Frobenius norm. Throws NumericFailure after
/// max_sweeps sweeps.
template <typename Derived>
SymmetricEigen<typename Derived::Scalar> jacobi_eigen(const Eigen::MatrixBase<Derived>& input,
                                                      bool compute_vectors = false,
                                                      int max_sweeps = 100) {
  using Scalar = typename Derived::Scalar;
  if (input.rows() != input.cols()) throw DimensionError("jacobi_eigen: matrix must be square");
  detail::require_finite(input, "jacobi_eigen");
  const Index n = input.rows();
  Matrix<Scalar> a = (input + input.transpose()) / Scalar(2);
  Matrix<Scalar> v;
  if (compute_vectors) v = Matrix<Scalar>::Identity(n, n);

  const Scalar eps = std::numeric_limits<Scalar>::epsilon();
  const Scalar scale = a.norm();
  SymmetricEigen<Scalar> out;
  bool converged = (n <= 1) || scale == Scalar(0);
  for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    Scalar off = 0;
    for (Index p = 0; p < n; ++p)
      for (Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (std::sqrt(Scalar(2) * off) <= eps * scale) {
      converged = true;
      break;
    }
    out.sweeps = sweep + 1;
    for (Index p = 0; p < n - 1; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        const Scalar apq = a(p, q);
        if (apq == Scalar(0)) continue;
        const Scalar theta = (a(q, q) - a(p, p)) / (Scalar(2) * apq);
        Scalar t;
        if (std::abs(theta) > Scalar(1e150)) {
          t = Scalar(1) / (Scalar(2) * theta);
        } else {
          t = Scalar(1) / (std::abs(theta) + std::sqrt(theta * theta + Scalar(1)));
          if (theta < Scalar(0)) t = -t;
        }
        const Scalar c = Scalar(1) / std::sqrt(t * t + Scalar(1));
        const Scalar s = t * c;
        a(p, p) -= t * apq;
        a(q, q) += t * apq;
        a(p, q) = a(q, p) = Scalar(0);
        for (Index r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const Scalar g = a(r, p);
          const Scalar h = a(r, q);
          a(r, p) = a(p, r) = c * g - s * h;
          a(r, q) = a(q, r) = s * g + c * h;
        }
        if (compute_vectors) {
          for (Index r = 0; r < n; ++r) {
            const Scalar g = v(r, p);
            const Scalar h = v(r, q);
            v(r, p) = c * g - s * h;
            v(r, q) = s * g + c * h;
          }
        }
      }
    }
  }
  if (!converged) {
    Scalar off = 0;
    for (Index p = 0; p < n; ++p)
      for (Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (std::sqrt(Scalar(2) * off) > eps * scale)
      throw NumericFailure("jacobi_eigen: no convergence");
  }

  std::vector<Index> order(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  std::sort(order.begin(), order.end(), [&](Index i, Index j) { return a(i, i) < a(j, j); });
  out.values.resize(n);
  if (compute_vectors) out.vectors.resize(n, n);
  for (Index k = 0; k < n; ++k) {
    const Index src = order[static_cast<std::size_t>(k)];
    out.values[k] = a(src, src);
    if (compute_vectors) out.vectors.col(k) = v.col(src);
  }
  return out;
}

/// Largest entry of |W - W^T|.
template <typename Derived>
typename Derived::Scalar max_asymmetry(const Eigen::MatrixBase<Derived>& w) {
  if (w.rows() != w.cols()) throw DimensionError("max_asymmetry: matrix must be square");
  return (w - w.transpose()).cwiseAbs().maxCoeff();
}

template <typename Derived>
bool is_symmetric(const Eigen::MatrixBase<Derived>& w, double tol = kSymmetryTol) {
  return w.rows() == w.cols() && (w.size() == 0 || max_asymmetry(w) <= tol);
}

/// Largest singular value of M.
///
/// Power iteration on M^T M from a fixed start (normalized all-ones plus a
/// fixed pseudorandom jitter, so structured inputs whose all-ones direction is
/// a non-dominant eigenvector still converge to the top). Stops once the
/// eigen-residual of M^T M is below tol relative to the Rayleigh quotient.
/// After 10 r c iterations falls back to a Jacobi solve of the smaller Gram
/// matrix when max(r, c) <= 512.
template <typename Derived>
typename Derived::Scalar spectral_norm(const Eigen::MatrixBase<Derived>& m,
                                       double tol = kDefaultSpectralTol) {
  using Scalar = typename Derived::Scalar;
  if (!(tol > 0)) throw PreconditionError("spectral_norm: tol must be positive");
  if (m.size() == 0) throw DimensionError("spectral_norm: empty matrix");
  detail::require_finite(m, "spectral_norm");
  const Index r = m.rows();
  const Index c = m.cols();
  if (m.cwiseAbs().maxCoeff() == Scalar(0)) return Scalar(0);

  Vector<Scalar> v(c);
  {
    std::uint64_t state = 0x5EEDC0FFEEULL;
    for (Index i = 0; i < c; ++i) {
      state = splitmix64(state);
      const Scalar jitter = Scalar(static_cast<double>(state >> 11) * 0x1.0p-53 - 0.5);
      v[i] = Scalar(1) + Scalar(0.5) * jitter;
    }
    v.normalize();
  }

  const Index cap = 10 * r * c;
  Scalar lambda = 0;
  for (Index it = 0; it < cap; ++it) {
    const Vector<Scalar> u = m * v;
    const Vector<Scalar> w = m.transpose() * u;
    lambda = u.squaredNorm();
    const Scalar wn = w.norm();
    if (wn == Scalar(0)) {
      // start landed in the kernel; rotate to the next coordinate direction
      v = Vector<Scalar>::Unit(c, it % c);
      continue;
    }
    const Scalar residual = (w - lambda * v).norm();
    if (residual <= Scalar(tol) * lambda) return std::sqrt(lambda);
    v = w / wn;
  }

  if (std::max(r, c) > kMaxDenseDim)
    throw NumericFailure("spectral_norm: power iteration did not converge");
  const Matrix<Scalar> gram =
      (r < c) ? Matrix<Scalar>(m * m.transpose()) : Matrix<Scalar>(m.transpose() * m);
  const auto eig = jacobi_eigen(gram);
  return std::sqrt(std::max(Scalar(0), eig.values[eig.values.size() - 1]));
}

/// ||Pi W Pi|| on the block tangent space, with Pi the block projection.
template <typename Derived>
typename Derived::Scalar tangent_operator_norm(const Eigen::MatrixBase<Derived>& w,
                                               const BlockLayout& layout,
                                               double tol = kDefaultSpectralTol) {
  return spectral_norm(project_matrix(w, layout), tol);
}

/// ||Pi W Pi|| restricted to the zero-sum subspace of a single simplex.
template <typename Derived>
typename Derived::Scalar tangent_operator_norm(const Eigen::MatrixBase<Derived>& w,
                                               double tol = kDefaultSpectralTol) {
  if (w.rows() != w.cols()) throw DimensionError("tangent_operator_norm: matrix must be square");
  return tangent_operator_norm(w, BlockLayout::single(w.rows()), tol);
}

/// Largest eigenvalue of Pi W Pi on the block tangent space for symmetric W.
///
/// The all-ones directions are deflated explicitly: W is compressed onto an
/// orthonormal tangent basis Q and Q^T W Q is solved with Jacobi rotations.
template <typename Derived>
typename Derived::Scalar tangent_lambda_max(const Eigen::MatrixBase<Derived>& w,
                                            const BlockLayout& layout) {
  using Scalar = typename Derived::Scalar;
  if (w.rows() != layout.total() || w.cols() != layout.total())
    throw DimensionError("tangent_lambda_max: matrix does not match layout");
  if (!is_symmetric(w)) throw PreconditionError("tangent_lambda_max: matrix is not symmetric");
  const Matrix<Scalar> q = tangent_basis<Scalar>(layout);
  if (q.cols() == 0) return Scalar(0);
  const Matrix<Scalar> compressed = q.transpose() * w * q;
  const auto eig = jacobi_eigen(compressed);
  return eig.values[eig.values.size() - 1];
}

template <typename Derived>
typename Derived::Scalar tangent_lambda_max(const Eigen::MatrixBase<Derived>& w) {
  if (w.rows() != w.cols()) throw DimensionError("tangent_lambda_max: matrix must be square");
  return tangent_lambda_max(w, BlockLayout::single(w.rows()));
}

/// ||B Pi W Pi|| for a per-coordinate scaling diag(scale) (B_beta when scale
/// holds each coordinate's block temperature).
template <typename Derived, typename Scale>
typename Derived::Scalar block_tangent_norm(const Eigen::MatrixBase<Derived>& w,
                                            const BlockLayout& layout,
                                            const Eigen::MatrixBase<Scale>& scale,
                                            double tol = kDefaultSpectralTol) {
  if (scale.size() != layout.total()) throw DimensionError("block_tangent_norm: scale size");
  return spectral_norm(scale.asDiagonal() * project_matrix(w, layout), tol);
}

/// Induced l1 norm: maximum absolute column sum.
template <typename Derived>
typename Derived::Scalar l1_operator_norm(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) throw DimensionError("l1_operator_norm: empty matrix");
  detail::require_finite(m, "l1_operator_norm");
  return m.cwiseAbs().colwise().sum().maxCoeff();
}

/// Perron root of a nonnegative square matrix.
///
/// Nilpotent matrices are detected exactly (C^k 1 = 0 for some k <= m).
/// Otherwise power iteration on I + C from the all-ones vector, stopped when
/// the Collatz-Wielandt bounds min_i (y_i/v_i) <= rho(I+C) <= max_i (y_i/v_i)
/// agree to tol. If they do not, the dense eigenvalues decide.
template <typename Derived>
typename Derived::Scalar spectral_radius_nonneg(const Eigen::MatrixBase<Derived>& c,
                                                double tol = kDefaultSpectralTol,
                                                Index max_iter = 10000) {
  using Scalar = typename Derived::Scalar;
  if (c.rows() != c.cols()) throw DimensionError("spectral_radius_nonneg: matrix must be square");
  if (c.size() == 0) throw DimensionError("spectral_radius_nonneg: empty matrix");
  detail::require_finite(c, "spectral_radius_nonneg");
  if ((c.array() < Scalar(0)).any())
    throw PreconditionError("spectral_radius_nonneg: matrix has a negative entry");
  const Index m = c.rows();

  Vector<Scalar> probe = Vector<Scalar>::Ones(m);
  for (Index k = 0; k < m; ++k) {
    probe = c * probe;
    if ((probe.array() == Scalar(0)).all()) return Scalar(0);
    probe /= probe.maxCoeff();
  }

  Vector<Scalar> v = Vector<Scalar>::Ones(m);
  for (Index it = 0; it < max_iter; ++it) {
    const Vector<Scalar> y = v + c * v;
    const Scalar lower = (y.array() / v.array()).minCoeff();
    const Scalar upper = (y.array() / v.array()).maxCoeff();
    if (upper - lower <= Scalar(tol) * upper) return std::max(Scalar(0), (lower + upper) / 2 - 1);
    v = y / y.maxCoeff();
    if (v.minCoeff() < Scalar(1e-200)) break;  // reducible: some components vanish
  }
  Eigen::EigenSolver<Matrix<Scalar>> solver(c, false);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace softstab
