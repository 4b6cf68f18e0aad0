#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "softstab/geometry.hpp"

namespace softstab {

/// Affine block logit system
///
///   F^a(x) = softmax(beta_a (b^a + sum_c W^{ac} x^c)),   a = 1..m,
///
/// on the product simplex described by `layout`. W is one flat N x N matrix
/// (N = sum n_a) in block order; a single simplex is the case m = 1.
/// Values are immutable after construction.
class AffineLogitSystem {
 public:
  AffineLogitSystem(BlockLayout layout, Eigen::MatrixXd w, Eigen::VectorXd b,
                    std::vector<double> beta);

  /// Single simplex with inverse temperature beta.
  static AffineLogitSystem single(Eigen::MatrixXd w, Eigen::VectorXd b, double beta);

  const BlockLayout& layout() const { return layout_; }
  const Eigen::MatrixXd& W() const { return w_; }
  const Eigen::VectorXd& b() const { return b_; }
  const std::vector<double>& beta() const { return beta_; }
  Index dim() const { return layout_.total(); }
  Index num_blocks() const { return layout_.num_blocks(); }

  /// Diagonal of B_beta: beta_a repeated n_a times.
  Eigen::VectorXd beta_diagonal() const;

  /// True when every block shares one inverse temperature.
  bool uniform_beta() const;

  bool symmetric() const { return symmetric_; }

  /// Copy with new inverse temperatures (one per block).
  AffineLogitSystem with_beta(std::vector<double> beta) const;
  /// Copy with every block at the same inverse temperature.
  AffineLogitSystem with_uniform_beta(double beta) const;
  AffineLogitSystem with_bias(Eigen::VectorXd b) const;

 private:
  BlockLayout layout_;
  Eigen::MatrixXd w_;
  Eigen::VectorXd b_;
  std::vector<double> beta_;
  bool symmetric_ = false;
};

/// Block softmax of beta_a (b + W x)^a.
ProductPointd response(const AffineLogitSystem& system, const ProductPointd& x);

/// Same as response() on a raw flat vector; no feasibility check on x.
Eigen::VectorXd response_values(const AffineLogitSystem& system, const Eigen::VectorXd& x);

/// DF(x) = Sigma_blk(F(x)) B_beta W.
Eigen::MatrixXd response_jacobian(const AffineLogitSystem& system, const ProductPointd& x);

struct SymmetryTag {
  bool is_symmetric = false;
  double max_asymmetry = 0.0;
};

struct SystemDiagnostics {
  SymmetryTag symmetry;
  std::vector<Index> block_dims;
  std::vector<double> beta;
  Eigen::VectorXd beta_diagonal;
  double ambient_norm = 0.0;      // ||W||_2
  double tangent_norm = 0.0;      // ||Pi W Pi||
  double shift_norm = 0.0;        // ||W - Pi W Pi||_2, the payoff-shift part
  std::vector<std::string> warnings;
};

/// Reports symmetry, block structure and the size of payoff-shift components.
SystemDiagnostics validate(const AffineLogitSystem& system);

/// ||Pi W Pi|| (scaled = false) or ||B_beta Pi W Pi|| (scaled = true) on the
/// block tangent space.
double block_tangent_norm(const AffineLogitSystem& system, bool scaled);

}  // namespace softstab
