#include <doctest.h>

#include "oracles.hpp"
#include "softstab/instances.hpp"
#include "softstab/spectral.hpp"
#include "softstab/system.hpp"

using namespace softstab;

namespace {

Eigen::MatrixXd pitchfork_w() {
  Eigen::MatrixXd w(2, 2);
  w << 0, -1, -1, 0;
  return w;
}

}  // namespace

TEST_CASE("spectral_norm") {
  CHECK(spectral_norm(Eigen::MatrixXd::Identity(5, 5)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(spectral_norm(Eigen::Vector2d(3, -5).asDiagonal().toDenseMatrix()) ==
        doctest::Approx(5.0).epsilon(1e-12));
  CHECK(spectral_norm(Eigen::MatrixXd::Zero(3, 4)) == 0.0);

  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::MatrixXd m = oracle::random_matrix(20, 20, gen);
    const double ref = std::sqrt(
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m.transpose() * m).eigenvalues().maxCoeff());
    CHECK(std::abs(spectral_norm(m) - ref) <= 1e-9 * ref);
    CHECK(std::abs(spectral_norm(m) - spectral_norm(Eigen::MatrixXd(m.transpose()))) <= 1e-9 * ref);
  }
  const Eigen::MatrixXd rect = oracle::random_matrix(7, 3, gen);
  CHECK(spectral_norm(rect) == doctest::Approx(oracle::spectral_norm(rect)).epsilon(1e-9));
}

TEST_CASE("spectral_norm on structured matrices with a degenerate top") {
  // Top singular directions orthogonal to the all-ones vector.
  const Eigen::MatrixXd h = hadamard_matrix(8);
  Eigen::MatrixXd m = h * Eigen::VectorXd::LinSpaced(8, 1, 8).asDiagonal() * h.transpose() / 8.0;
  CHECK(spectral_norm(m) == doctest::Approx(8.0).epsilon(1e-10));
  Eigen::MatrixXd rot(2, 2);
  rot << 0, -3, 3, 0;
  CHECK(spectral_norm(rot) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("jacobi_eigen") {
  std::mt19937_64 gen(12);
  const Eigen::MatrixXd a = oracle::random_matrix(12, 12, gen);
  const Eigen::MatrixXd s = a + a.transpose();
  const auto eig = jacobi_eigen(s, true);
  const Eigen::VectorXd ref = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(s).eigenvalues();
  CHECK((eig.values - ref).norm() < 1e-10);
  CHECK((s * eig.vectors - eig.vectors * eig.values.asDiagonal()).norm() < 1e-10);
}

TEST_CASE("tangent_operator_norm") {
  CHECK(tangent_operator_norm(pitchfork_w()) == doctest::Approx(1.0));

  std::mt19937_64 gen(13);
  const Eigen::VectorXd a = oracle::random_matrix(5, 1, gen);
  const Eigen::VectorXd b = oracle::random_matrix(5, 1, gen);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(5);
  const Eigen::MatrixXd shift = ones * a.transpose() + b * ones.transpose();
  CHECK(tangent_operator_norm(shift) < 1e-12);

  // Pi I Pi = Pi has norm one.
  CHECK(tangent_operator_norm(Eigen::MatrixXd::Identity(3, 3)) == doctest::Approx(1.0));

  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::MatrixXd w = oracle::random_matrix(9, 9, gen);
    const double t = tangent_operator_norm(w);
    const Eigen::MatrixXd p = oracle::centering(9);
    CHECK(t == doctest::Approx(oracle::spectral_norm(p * w * p)).epsilon(1e-9));
    CHECK(t <= spectral_norm(w) + 1e-12);
    const Eigen::VectorXd c = oracle::random_matrix(9, 1, gen);
    const Eigen::VectorXd d = oracle::random_matrix(9, 1, gen);
    const Eigen::VectorXd o = Eigen::VectorXd::Ones(9);
    CHECK(std::abs(tangent_operator_norm(Eigen::MatrixXd(w + o * c.transpose() + d * o.transpose())) - t) <
          1e-9);
  }
}

TEST_CASE("tangent_lambda_max") {
  CHECK(tangent_lambda_max(pitchfork_w()) == doctest::Approx(1.0));
  CHECK(tangent_lambda_max(Eigen::MatrixXd(-Eigen::MatrixXd::Identity(4, 4))) ==
        doctest::Approx(-1.0));
  CHECK_THROWS_AS(tangent_lambda_max(Eigen::MatrixXd(Eigen::Matrix2d{{0, 1}, {0, 0}})),
                  PreconditionError);

  std::mt19937_64 gen(14);
  for (int trial = 0; trial < 5; ++trial) {
    const Eigen::MatrixXd a = oracle::random_matrix(10, 10, gen);
    const Eigen::MatrixXd w = 0.5 * (a + a.transpose());
    const double k = tangent_lambda_max(w);
    CHECK(k == doctest::Approx(oracle::tangent_lambda_max(w, {10})).epsilon(1e-10));
    const double sampled = oracle::rayleigh_tangent_max(w, 10000, gen);
    CHECK(sampled <= k + 1e-12);
    CHECK(sampled >= k - 1.0);  // loose: random sampling in 9 dimensions
    CHECK(k <= tangent_operator_norm(w) + 1e-12);
  }
}

TEST_CASE("tangent_lambda_max from below by Rayleigh sampling") {
  // A matrix whose tangent spectrum is dominated by one direction so that
  // random sampling comes within 1e-3.
  std::mt19937_64 gen(15);
  Eigen::VectorXd v = oracle::random_matrix(10, 1, gen);
  v.array() -= v.mean();
  v.normalize();
  const Eigen::MatrixXd w = 5.0 * v * v.transpose() - 0.01 * Eigen::MatrixXd::Identity(10, 10);
  const double k = tangent_lambda_max(w);
  CHECK(k == doctest::Approx(4.99).epsilon(1e-12));
  // Directly around v: the sampler must see values just below k.
  double best = -1e300;
  std::normal_distribution<double> nd;
  for (int s = 0; s < 10000; ++s) {
    Eigen::VectorXd d = v;
    for (Eigen::Index i = 0; i < 10; ++i) d[i] += 0.01 * nd(gen);
    d.array() -= d.mean();
    d.normalize();
    best = std::max(best, d.dot(w * d));
  }
  CHECK(best <= k + 1e-12);
  CHECK(best >= k - 1e-3);
}

TEST_CASE("block_tangent_norm") {
  const AffineLogitSystem had = hadamard_separation(4, 1.0);
  CHECK(block_tangent_norm(had, false) == doctest::Approx(1.0).epsilon(1e-10));

  const auto single = AffineLogitSystem::single(pitchfork_w(), Eigen::Vector2d::Zero(), 1.7);
  CHECK(block_tangent_norm(single, true) ==
        doctest::Approx(1.7 * tangent_operator_norm(pitchfork_w())));

  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(4, 4);
  w.block(0, 0, 2, 2) = pitchfork_w();
  w.block(2, 2, 2, 2) = pitchfork_w();
  const AffineLogitSystem two(BlockLayout({2, 2}), w, Eigen::VectorXd::Zero(4), {1.0, 3.0});
  const Eigen::MatrixXd p = oracle::block_centering({2, 2});
  const Eigen::Vector4d bd(1, 1, 3, 3);
  const double ref = oracle::spectral_norm(bd.asDiagonal() * p * w * p);
  CHECK(ref == doctest::Approx(3.0));
  CHECK(block_tangent_norm(two, true) == doctest::Approx(ref).epsilon(1e-10));
}

TEST_CASE("l1 norm and nonnegative spectral radius") {
  const Eigen::Vector2d u = Eigen::Vector2d(1, -1) / std::sqrt(2.0);
  CHECK(l1_operator_norm(Eigen::MatrixXd(u * u.transpose())) == doctest::Approx(1.0));
  Eigen::MatrixXd m(2, 2);
  m << 1, -4, 2, 3;
  CHECK(l1_operator_norm(m) == 7.0);

  for (int n : {1, 3, 6}) {
    const Eigen::MatrixXd c = Eigen::MatrixXd::Constant(n, n, 0.7);
    CHECK(spectral_radius_nonneg(c) == doctest::Approx(0.7 * n).epsilon(1e-10));
  }
  Eigen::MatrixXd nil = Eigen::MatrixXd::Zero(3, 3);
  nil(0, 1) = 5;
  nil(1, 2) = 7;
  CHECK(spectral_radius_nonneg(nil) == 0.0);
  CHECK_THROWS_AS(spectral_radius_nonneg(Eigen::MatrixXd(-Eigen::MatrixXd::Identity(2, 2))),
                  PreconditionError);

  // Reducible and periodic cases against Eigen's general eigensolver.
  std::mt19937_64 gen(16);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    Eigen::MatrixXd c(5, 5);
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j) c(i, j) = u01(gen) < 0.4 ? u01(gen) : 0.0;
    const double ref = Eigen::EigenSolver<Eigen::MatrixXd>(c).eigenvalues().cwiseAbs().maxCoeff();
    CHECK(spectral_radius_nonneg(c) == doctest::Approx(ref).epsilon(1e-8));
  }
  Eigen::MatrixXd perm = Eigen::MatrixXd::Zero(3, 3);
  perm(0, 1) = perm(1, 2) = perm(2, 0) = 2.0;
  CHECK(spectral_radius_nonneg(perm) == doctest::Approx(2.0).epsilon(1e-10));
}
