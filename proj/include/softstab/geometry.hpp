#pragma once

// Simplex and product-simplex geometry: feasibility, tangent projection,
// softmax and the softmax covariance Diag(p) - pp^T.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "softstab/errors.hpp"

namespace softstab {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Eigen::Index;

/// Absolute tolerance used for every feasibility check.
inline constexpr double kFeasibilityTol = 1e-12;

namespace detail {

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& m, const char* what) {
  if (!m.allFinite()) throw NumericInputError(std::string(what) + ": non-finite entry");
}

template <typename Scalar>
Scalar zero_sum_tolerance(const Vector<Scalar>& v) {
  return Scalar(kFeasibilityTol) * std::max(Scalar(1), v.template lpNorm<1>());
}

}  // namespace detail

/// Block structure of a product simplex: dimensions n_1..n_m and flat offsets.
class BlockLayout {
 public:
  BlockLayout() = default;
  explicit BlockLayout(std::vector<Index> dims) : dims_(std::move(dims)) {
    if (dims_.empty()) throw DimensionError("block layout needs at least one block");
    offsets_.reserve(dims_.size());
    for (Index d : dims_) {
      if (d < 1) throw DimensionError("block dimensions must be >= 1");
      offsets_.push_back(total_);
      total_ += d;
    }
  }

  /// Single simplex of dimension n.
  static BlockLayout single(Index n) { return BlockLayout({n}); }

  Index num_blocks() const { return static_cast<Index>(dims_.size()); }
  Index dim(Index a) const { return dims_[static_cast<std::size_t>(a)]; }
  Index offset(Index a) const { return offsets_[static_cast<std::size_t>(a)]; }
  Index total() const { return total_; }
  const std::vector<Index>& dims() const { return dims_; }

  /// Index of the block containing flat coordinate i.
  Index block_of(Index i) const {
    auto it = std::upper_bound(offsets_.begin(), offsets_.end(), i);
    return static_cast<Index>(it - offsets_.begin()) - 1;
  }

  bool operator==(const BlockLayout&) const = default;

 private:
  std::vector<Index> dims_;
  std::vector<Index> offsets_;
  Index total_ = 0;
};

/// A point of the probability simplex.
template <typename Scalar>
class SimplexPoint {
 public:
  explicit SimplexPoint(Vector<Scalar> values) : values_(std::move(values)) {
    if (values_.size() == 0) throw DimensionError("simplex point must be non-empty");
    detail::require_finite(values_, "simplex point");
    if ((values_.array() < Scalar(0)).any())
      throw ValidationError("simplex point has a negative entry");
    if (std::abs(values_.sum() - Scalar(1)) > Scalar(kFeasibilityTol))
      throw ValidationError("simplex point entries do not sum to 1");
  }

  static SimplexPoint uniform(Index n) {
    if (n < 1) throw DimensionError("simplex dimension must be >= 1");
    return SimplexPoint(Vector<Scalar>::Constant(n, Scalar(1) / Scalar(n)));
  }

  /// Clamps negatives at zero and rescales. Never applied implicitly.
  static SimplexPoint normalize(Vector<Scalar> v) {
    if (v.size() == 0) throw DimensionError("cannot normalize an empty vector");
    detail::require_finite(v, "normalize");
    v = v.cwiseMax(Scalar(0));
    const Scalar s = v.sum();
    if (!(s > Scalar(0))) throw ValidationError("cannot normalize a vector with no positive mass");
    return SimplexPoint(v / s);
  }

  const Vector<Scalar>& values() const { return values_; }
  Index size() const { return values_.size(); }
  Scalar operator[](Index i) const { return values_[i]; }

 private:
  Vector<Scalar> values_;
};

/// A zero-sum direction (an element of the simplex tangent space).
template <typename Scalar>
class TangentVector {
 public:
  explicit TangentVector(Vector<Scalar> values) : values_(std::move(values)) {
    if (values_.size() == 0) throw DimensionError("tangent vector must be non-empty");
    detail::require_finite(values_, "tangent vector");
    if (std::abs(values_.sum()) > detail::zero_sum_tolerance(values_))
      throw ValidationError("tangent vector entries do not sum to 0");
  }

  const Vector<Scalar>& values() const { return values_; }
  Index size() const { return values_.size(); }
  Scalar operator[](Index i) const { return values_[i]; }

 private:
  Vector<Scalar> values_;
};

/// A point of Delta_1 x ... x Delta_m stored as one flat vector.
template <typename Scalar>
class ProductPoint {
 public:
  ProductPoint(BlockLayout layout, Vector<Scalar> values)
      : layout_(std::move(layout)), values_(std::move(values)) {
    if (values_.size() != layout_.total())
      throw DimensionError("product point size does not match block layout");
    for (Index a = 0; a < layout_.num_blocks(); ++a)
      static_cast<void>(SimplexPoint<Scalar>(block(a)));
  }

  explicit ProductPoint(const SimplexPoint<Scalar>& p)
      : layout_(BlockLayout::single(p.size())), values_(p.values()) {}

  static ProductPoint from_blocks(const std::vector<SimplexPoint<Scalar>>& blocks) {
    std::vector<Index> dims;
    for (const auto& p : blocks) dims.push_back(p.size());
    BlockLayout layout(dims);
    Vector<Scalar> v(layout.total());
    for (Index a = 0; a < layout.num_blocks(); ++a)
      v.segment(layout.offset(a), layout.dim(a)) = blocks[static_cast<std::size_t>(a)].values();
    return ProductPoint(std::move(layout), std::move(v));
  }

  static ProductPoint uniform(const BlockLayout& layout) {
    Vector<Scalar> v(layout.total());
    for (Index a = 0; a < layout.num_blocks(); ++a)
      v.segment(layout.offset(a), layout.dim(a)).setConstant(Scalar(1) / Scalar(layout.dim(a)));
    return ProductPoint(layout, std::move(v));
  }

  /// Blockwise SimplexPoint::normalize.
  static ProductPoint normalize(const BlockLayout& layout, const Vector<Scalar>& v) {
    if (v.size() != layout.total()) throw DimensionError("normalize: size does not match layout");
    Vector<Scalar> out(v.size());
    for (Index a = 0; a < layout.num_blocks(); ++a)
      out.segment(layout.offset(a), layout.dim(a)) =
          SimplexPoint<Scalar>::normalize(v.segment(layout.offset(a), layout.dim(a))).values();
    return ProductPoint(layout, std::move(out));
  }

  const BlockLayout& layout() const { return layout_; }
  const Vector<Scalar>& values() const { return values_; }
  Index size() const { return values_.size(); }

  Vector<Scalar> block(Index a) const {
    return values_.segment(layout_.offset(a), layout_.dim(a));
  }

 private:
  BlockLayout layout_;
  Vector<Scalar> values_;
};

using SimplexPointd = SimplexPoint<double>;
using TangentVectord = TangentVector<double>;
using ProductPointd = ProductPoint<double>;

/// v - mean(v) 1, the orthogonal projection onto the zero-sum subspace.
template <typename Derived>
TangentVector<typename Derived::Scalar> project_tangent(const Eigen::MatrixBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  if (v.size() == 0) throw DimensionError("project_tangent: empty vector");
  Vector<Scalar> out = v;
  out.array() -= out.mean();
  return TangentVector<Scalar>(std::move(out));
}

/// Block tangent projection: subtracts each block's mean.
template <typename Derived>
Vector<typename Derived::Scalar> project_blocks(const Eigen::MatrixBase<Derived>& v,
                                                const BlockLayout& layout) {
  if (v.size() != layout.total()) throw DimensionError("project_blocks: size mismatch");
  Vector<typename Derived::Scalar> out = v;
  for (Index a = 0; a < layout.num_blocks(); ++a) {
    auto seg = out.segment(layout.offset(a), layout.dim(a));
    seg.array() -= seg.mean();
  }
  return out;
}

/// Pi M Pi for the block projection Pi, computed by double centering.
template <typename Derived>
Matrix<typename Derived::Scalar> project_matrix(const Eigen::MatrixBase<Derived>& m,
                                                const BlockLayout& layout) {
  if (m.rows() != layout.total() || m.cols() != layout.total())
    throw DimensionError("project_matrix: matrix does not match layout");
  Matrix<typename Derived::Scalar> out = m;
  for (Index a = 0; a < layout.num_blocks(); ++a) {
    auto rows = out.middleRows(layout.offset(a), layout.dim(a));
    rows.rowwise() -= rows.colwise().mean();
  }
  for (Index a = 0; a < layout.num_blocks(); ++a) {
    auto cols = out.middleCols(layout.offset(a), layout.dim(a));
    cols.colwise() -= cols.rowwise().mean();
  }
  return out;
}

/// Explicit block projector blkdiag(I - 11^T/n_a).
template <typename Scalar>
Matrix<Scalar> block_projector(const BlockLayout& layout) {
  Matrix<Scalar> p = Matrix<Scalar>::Zero(layout.total(), layout.total());
  for (Index a = 0; a < layout.num_blocks(); ++a) {
    const Index n = layout.dim(a);
    p.block(layout.offset(a), layout.offset(a), n, n) =
        Matrix<Scalar>::Identity(n, n) - Matrix<Scalar>::Constant(n, n, Scalar(1) / Scalar(n));
  }
  return p;
}

/// Orthonormal basis of the block tangent space (Helmert columns per block).
/// Size N x (N - m); every column is exactly orthogonal to each block's 1.
template <typename Scalar>
Matrix<Scalar> tangent_basis(const BlockLayout& layout) {
  const Index cols = layout.total() - layout.num_blocks();
  Matrix<Scalar> q = Matrix<Scalar>::Zero(layout.total(), cols);
  Index c = 0;
  for (Index a = 0; a < layout.num_blocks(); ++a) {
    const Index off = layout.offset(a);
    for (Index k = 1; k < layout.dim(a); ++k, ++c) {
      const Scalar scale = Scalar(1) / std::sqrt(Scalar(k) * Scalar(k + 1));
      q.col(c).segment(off, k).setConstant(scale);
      q(off + k, c) = -Scalar(k) * scale;
    }
  }
  return q;
}

/// Numerically stable softmax exp(z_i) / sum_j exp(z_j).
template <typename Derived>
SimplexPoint<typename Derived::Scalar> softmax(const Eigen::MatrixBase<Derived>& z) {
  using Scalar = typename Derived::Scalar;
  if (z.size() == 0) throw DimensionError("softmax: empty input");
  detail::require_finite(z, "softmax");
  Vector<Scalar> e = (z.array() - z.maxCoeff()).exp().matrix();
  e /= e.sum();
  return SimplexPoint<Scalar>(std::move(e));
}

/// Sigma(p) = Diag(p) - p p^T, the Jacobian of softmax at any z with softmax(z) = p.
template <typename Scalar>
Matrix<Scalar> softmax_covariance(const SimplexPoint<Scalar>& p) {
  const auto& v = p.values();
  Matrix<Scalar> sigma = -v * v.transpose();
  sigma.diagonal() += v;
  return sigma;
}

}  // namespace softstab
