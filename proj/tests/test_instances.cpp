#include <doctest.h>

#include "oracles.hpp"
#include "softstab/certificates.hpp"
#include "softstab/dynamics.hpp"
#include "softstab/instances.hpp"
#include "softstab/spectral.hpp"

using namespace softstab;

TEST_CASE("pitchfork system") {
  const auto sys = pitchfork_system(2.0);
  CHECK(sys.symmetric());
  CHECK(tangent_operator_norm(sys.W()) == doctest::Approx(1.0));
  CHECK(certify_contraction(sys).q_new == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(certify_contraction(pitchfork_system(1.0)).q_old == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("solve_pitchfork") {
  const auto r15 = solve_pitchfork(1.5);
  REQUIRE(r15.size() == 1);
  CHECK(r15[0].m == 0.0);
  CHECK(r15[0].stable);
  const auto r2 = solve_pitchfork(2.0);
  REQUIRE(r2.size() == 1);
  CHECK(r2[0].stable);

  const auto r3 = solve_pitchfork(3.0);
  REQUIRE(r3.size() == 3);
  const double m = oracle::tanh_root(1.5);
  CHECK(std::abs(r3[2].m - m) < 1e-12);
  CHECK(r3[0].m == -r3[2].m);
  CHECK(r3[0].stable);
  CHECK_FALSE(r3[1].stable);
  CHECK(r3[2].stable);
  CHECK(std::abs(r3[2].m - std::tanh(1.5 * r3[2].m)) <= 1e-12);

  double prev = 0.0;
  for (double beta = 2.05; beta <= 6.0; beta += 0.05) {
    const auto r = solve_pitchfork(beta);
    REQUIRE(r.size() == 3);
    CHECK(r[2].m > prev);
    prev = r[2].m;
  }
  for (double delta : {1e-6, 1e-4, 1e-2}) CHECK(solve_pitchfork(2.0 + delta).size() == 3);
  CHECK_THROWS_AS(solve_pitchfork(0.0), PreconditionError);
}

TEST_CASE("picard matches the stable pitchfork branches") {
  for (double beta : {2.5, 3.0, 4.0}) {
    const auto roots = solve_pitchfork(beta);
    PicardOptions o;
    o.tol = 1e-14;
    o.max_iter = 100000;
    const auto up = picard(pitchfork_system(beta), ProductPointd(SimplexPointd(Eigen::Vector2d(0.9, 0.1))), o);
    const auto dn = picard(pitchfork_system(beta), ProductPointd(SimplexPointd(Eigen::Vector2d(0.1, 0.9))), o);
    REQUIRE(up.converged);
    REQUIRE(dn.converged);
    CHECK(std::abs(((*up.fixed_point)[0] - (*up.fixed_point)[1]) - roots[2].m) < 1e-8);
    CHECK(std::abs(((*dn.fixed_point)[0] - (*dn.fixed_point)[1]) - roots[0].m) < 1e-8);
  }
}

TEST_CASE("pitchfork diagram") {
  const auto d = pitchfork_diagram({0.5, 2.0, 2.5});
  CHECK(d.roots[0].size() == 1);
  CHECK(d.roots[1].size() == 1);
  CHECK(d.roots[2].size() == 3);
}

TEST_CASE("Sylvester Hadamard matrices") {
  for (Index m = 1; m <= 64; m *= 2) {
    const Eigen::MatrixXd h = hadamard_matrix(m) / std::sqrt(double(m));
    CHECK((h * h.transpose() - Eigen::MatrixXd::Identity(m, m)).cwiseAbs().maxCoeff() <= 1e-12);
  }
  CHECK_THROWS_AS(hadamard_matrix(6), PreconditionError);
  CHECK_THROWS_AS(hadamard_separation(12, 1.0), PreconditionError);
}

TEST_CASE("Hadamard separation system") {
  const auto one = hadamard_separation(1, 0.7);
  CHECK(one.num_blocks() == 1);
  CHECK(tangent_operator_norm(one.W()) == doctest::Approx(0.7));

  const auto h4 = hadamard_separation(4, 1.5);
  const Eigen::MatrixXd p = oracle::block_centering({2, 2, 2, 2});
  CHECK(oracle::spectral_norm(p * h4.W() * p) == doctest::Approx(1.5));
  CHECK(block_tangent_norm(h4, false) == doctest::Approx(1.5).epsilon(1e-10));

  const auto h8 = hadamard_separation(8, 1.0);
  CHECK(certify_contraction(h8).q_new == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(certify_dobrushin(h8).rho == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));
  CHECK(h8.b().norm() == 0.0);
  for (double b : h8.beta()) CHECK(b == 1.0);
}

TEST_CASE("upper-triangular counterexample") {
  for (Index m : {2, 3, 5})
    for (double c : {0.1, 5.0, 40.0}) {
      const auto sys = upper_triangular_counterexample(m, c);
      CHECK(certify_dobrushin(sys).rho == 0.0);
    }
  const auto sys = upper_triangular_counterexample(2, 5.0);
  CHECK(block_tangent_norm(sys, false) == doctest::Approx(5.0).epsilon(1e-10));
  CHECK(certify_contraction(sys).new_verdict == Verdict::Fail);
  const auto tiny = upper_triangular_counterexample(3, 0.01);
  CHECK(certify_contraction(tiny).new_verdict == Verdict::Pass);
  CHECK(certify_dobrushin(tiny).verdict == Verdict::Pass);
  CHECK_THROWS_AS(upper_triangular_counterexample(1, 1.0), PreconditionError);
}

TEST_CASE("random instances") {
  for (RandomKind kind : {RandomKind::Gaussian, RandomKind::GaussianSymmetric, RandomKind::Shifted,
                          RandomKind::ShiftedSymmetric}) {
    const auto a = random_instance(kind, 6, 1.0, {5, 3});
    const auto b = random_instance(kind, 6, 1.0, {5, 3});
    CHECK(a.W() == b.W());
    CHECK(a.b() == b.b());
    CHECK(a.symmetric() == is_symmetric(kind));
    CHECK(parse_random_kind(to_string(kind)) == kind);
    CHECK_FALSE(random_instance(kind, 6, 1.0, {5, 4}).W() == a.W());
  }
  CHECK_THROWS_AS(parse_random_kind("laplace"), ParseError);

  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto base = random_instance(RandomKind::Gaussian, 12, 1.0, {s, 0});
    const auto shifted = random_instance(RandomKind::Shifted, 12, 1.0, {s, 0});
    CHECK(std::abs(tangent_operator_norm(base.W()) - tangent_operator_norm(shifted.W())) < 1e-9);
    const auto sbase = random_instance(RandomKind::GaussianSymmetric, 12, 1.0, {s, 0});
    const auto sshift = random_instance(RandomKind::ShiftedSymmetric, 12, 1.0, {s, 0});
    CHECK(std::abs(tangent_operator_norm(sbase.W()) - tangent_operator_norm(sshift.W())) < 1e-9);
    CHECK((oracle::centering(12) * (shifted.W() - base.W()) * oracle::centering(12)).norm() < 1e-12);
  }
}

TEST_CASE("Dirichlet starts") {
  const BlockLayout layout({3, 4});
  const auto x = dirichlet_start(layout, {9, 1});
  CHECK_NOTHROW(ProductPointd(layout, x.values()));
  CHECK(dirichlet_start(layout, {9, 1}).values() == x.values());

  Rng rng({123, 0});
  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  const int samples = 100000;
  for (int k = 0; k < samples; ++k) mean += dirichlet_point(BlockLayout::single(3), rng).values();
  mean /= samples;
  CHECK((mean.array() - 1.0 / 3).abs().maxCoeff() < 0.01);
}
