#include <doctest.h>

#include "oracles.hpp"
#include "softstab/certificates.hpp"
#include "softstab/instances.hpp"
#include "softstab/spectral.hpp"

using namespace softstab;

TEST_CASE("compare_threshold") {
  CHECK(compare_threshold(0.5, 1.0) == Verdict::Pass);
  CHECK(compare_threshold(1.5, 1.0) == Verdict::Fail);
  CHECK(compare_threshold(1.0, 1.0) == Verdict::Boundary);
  CHECK(compare_threshold(2.0 * (1 + 1e-13), 2.0) == Verdict::Boundary);
  CHECK(compare_threshold(2.0 * (1 - 1e-9), 2.0) == Verdict::Pass);
}

TEST_CASE("contraction certificate") {
  const auto c = certify_contraction(pitchfork_system(1.5));
  CHECK(c.q_old == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(c.q_new == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(c.old_verdict == Verdict::Fail);
  CHECK(c.new_verdict == Verdict::Pass);
  CHECK(c.new_margin == doctest::Approx(0.25));

  const auto zero = certify_contraction(
      AffineLogitSystem::single(Eigen::MatrixXd::Zero(3, 3), Eigen::VectorXd::Zero(3), 5.0));
  CHECK(zero.q_old == 0.0);
  CHECK(zero.q_new == 0.0);

  CHECK(certify_contraction(hadamard_separation(8, 1.0)).q_new == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(certify_contraction(pitchfork_system(2.0)).new_verdict == Verdict::Boundary);
  CHECK(certify_contraction(pitchfork_system(1.0)).old_verdict == Verdict::Boundary);
}

TEST_CASE("symmetric certificate") {
  const auto s = certify_symmetric(pitchfork_system(1.9));
  CHECK(s.kappa_scaled == doctest::Approx(1.9).epsilon(1e-12));
  CHECK(s.verdict == Verdict::Pass);
  CHECK(certify_symmetric(pitchfork_system(2.0)).verdict == Verdict::Boundary);
  CHECK(certify_symmetric(pitchfork_system(2.5)).verdict == Verdict::Fail);

  const auto neg = certify_symmetric(AffineLogitSystem::single(
      -Eigen::MatrixXd::Identity(3, 3), Eigen::VectorXd::Zero(3), 100.0));
  CHECK(neg.kappa.has_value());
  CHECK(*neg.kappa == doctest::Approx(-1.0));
  CHECK(neg.nonpositive_branch);
  CHECK(neg.verdict == Verdict::Pass);

  CHECK_THROWS_AS(certify_symmetric(AffineLogitSystem::single(
                      Eigen::Matrix2d{{0, 1}, {0, 0}}, Eigen::VectorXd::Zero(2), 1.0)),
                  PreconditionError);

  std::mt19937_64 gen(31);
  const Eigen::MatrixXd a = oracle::random_matrix(5, 5, gen);
  const Eigen::MatrixXd w = 0.5 * (a + a.transpose());
  const AffineLogitSystem two(BlockLayout({3, 2}), w, Eigen::VectorXd::Zero(5), {2.0, 0.5});
  const Eigen::VectorXd root = Eigen::VectorXd((Eigen::VectorXd(5) << 2, 2, 2, .5, .5).finished()).cwiseSqrt();
  const Eigen::MatrixXd p = oracle::block_centering({3, 2});
  const Eigen::MatrixXd scaled = root.asDiagonal() * p * w * p * root.asDiagonal();
  CHECK(certify_symmetric(two).kappa_scaled ==
        doctest::Approx(oracle::tangent_lambda_max(scaled, {3, 2})).epsilon(1e-10));
}

TEST_CASE("symmetric certificate passes whenever contraction does") {
  std::mt19937_64 gen(32);
  for (int trial = 0; trial < 30; ++trial) {
    const auto sys = random_instance(RandomKind::ShiftedSymmetric, 6, 1.0, {33, static_cast<std::uint64_t>(trial)});
    const double beta = 0.5 + 0.1 * trial;
    const auto s = sys.with_uniform_beta(beta);
    if (certify_contraction(s).new_verdict == Verdict::Pass) {
      CHECK(certify_symmetric(s).verdict == Verdict::Pass);
    }
  }
}

TEST_CASE("dobrushin certificate") {
  const auto d8 = certify_dobrushin(hadamard_separation(8, 1.0));
  CHECK(d8.rho == doctest::Approx(std::sqrt(8.0) / 2).epsilon(1e-10));
  CHECK(d8.verdict == Verdict::Fail);

  const auto ut = certify_dobrushin(upper_triangular_counterexample(4, 50.0));
  CHECK(ut.rho == 0.0);
  CHECK(ut.verdict == Verdict::Pass);

  const auto pf = certify_dobrushin(pitchfork_system(1.0));
  CHECK(pf.influence.rows() == 1);
  CHECK(pf.rho == doctest::Approx(0.5));

  // Row-block temperature scaling.
  const auto had = hadamard_separation(2, 1.0).with_beta({1.0, 3.0});
  const Eigen::MatrixXd c = dobrushin_influence(had);
  CHECK(c(1, 0) == doctest::Approx(3.0 * c(0, 0)));
  CHECK(c(1, 1) == doctest::Approx(3.0 * c(0, 1)));
}

TEST_CASE("certified beta range") {
  const auto r = certified_beta_range(pitchfork_system(0.3));
  CHECK(r.beta_old == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.beta_new == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(r.gain == doctest::Approx(2.0).epsilon(1e-12));

  Eigen::MatrixXd w = Eigen::VectorXd::Ones(4) * Eigen::Vector4d(1, -2, 3, 0.5).transpose();
  const auto shift = certified_beta_range(AffineLogitSystem::single(w, Eigen::VectorXd::Zero(4), 1));
  CHECK(std::isinf(shift.beta_new));
  CHECK(std::isinf(shift.gain));

  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto g = certified_beta_range(random_instance(RandomKind::GaussianSymmetric, 32, 1.0, {s, 0}));
    CHECK(g.gain >= 2.0 - 1e-9);
  }

  CHECK_THROWS_AS(certified_beta_range(hadamard_separation(2, 1.0).with_beta({1.0, 2.0})),
                  PreconditionError);
}

TEST_CASE("contraction factor bounds the measured Lipschitz ratio") {
  std::mt19937_64 gen(34);
  for (std::uint64_t s = 0; s < 5; ++s) {
    auto sys = random_instance(RandomKind::Shifted, 8, 1.0, {s, 1});
    const double beta = 1.6 / block_tangent_norm(sys, false);
    sys = sys.with_uniform_beta(beta);
    const double q = certify_contraction(sys).q_new;
    CHECK(q == doctest::Approx(0.8));
    double worst = 0.0;
    for (int k = 0; k < 2000; ++k) {
      const Eigen::VectorXd x = oracle::random_simplex(8, gen);
      const Eigen::VectorXd y = oracle::random_simplex(8, gen);
      worst = std::max(worst, (response_values(sys, x) - response_values(sys, y)).norm() / (x - y).norm());
    }
    CHECK(worst <= q + 1e-9);
  }
}

TEST_CASE("certify bundles everything") {
  const auto rep = certify(pitchfork_system(1.5));
  CHECK(rep.symmetric_w);
  REQUIRE(rep.symmetric.has_value());
  REQUIRE(rep.beta_range.has_value());
  CHECK(rep.symmetric->verdict == Verdict::Pass);

  const auto multi = certify(hadamard_separation(2, 1.0).with_beta({1.0, 2.0}));
  CHECK_FALSE(multi.beta_range.has_value());
  const auto asym = certify(random_instance(RandomKind::Gaussian, 4, 1.0, {1, 0}));
  CHECK_FALSE(asym.symmetric.has_value());
}
