#include <catch2/catch.hpp>

#include "helpers.hpp"

using namespace gwcd;
using gwcd::testing::model64;
using gwcd::testing::rel_error;

TEST_CASE("dense Green's function of the two-state fixture at omega 0",
          "[greens]") {
  // psi1 psi1^T / 0.5 + psi2 psi2^T / (-0.5)
  const CMat g0 = g0_dense(two_state_fixture(), {0.0, 0.0});
  CMat expect(2, 2);
  expect << 0.0, 2.0, 2.0, 0.0;
  REQUIRE(rel_error(g0, expect) <= 1e-14);
}

TEST_CASE("Green's function conjugation symmetry", "[greens]") {
  const Complex w(0.0, 3.0);
  const CMat a = g0_dense(model64(), std::conj(w));
  const CMat b = g0_dense(model64(), w).conjugate();
  REQUIRE(rel_error(a, b) <= 1e-13);
  const CMat g = g0_dense(model64(), {0.7, 1.3});
  REQUIRE((g - g.transpose()).norm() <= 1e-12 * g.norm());
}

TEST_CASE("Green's function operator norm decays like 1/|omega|",
          "[greens]") {
  const double n3 = g0_dense(model64(), {0.0, 1e3}).norm() * 1e3;
  const double n4 = g0_dense(model64(), {0.0, 1e4}).norm() * 1e4;
  REQUIRE(n4 == Approx(n3).epsilon(0.10));
}

TEST_CASE("Green's function rejects on-shell real frequencies", "[greens]") {
  const KsSystem s2 = two_state_fixture();
  REQUIRE_THROWS_AS(g0_dense(s2, {0.5, 0.0}), PoleError);
  REQUIRE_NOTHROW(g0_dense(s2, {0.5, 0.0}, 1e-4));
}

TEST_CASE("applied Green's function matches the dense one", "[greens]") {
  const KsSystem s2 = two_state_fixture();
  CMat e1(2, 1);
  e1 << 1.0, 0.0;
  const CMat got = g0_apply(s2, {0.0, 0.0}, 0.0, e1);
  REQUIRE(std::abs(got(0, 0) - Complex(0.0, 0.0)) <= 1e-13);
  REQUIRE(std::abs(got(1, 0) - Complex(2.0, 0.0)) <= 1e-13);

  const KsSystem& sys = model64();
  for (int t = 0; t < 20; ++t) {
    const Complex w = testing::random_offaxis_frequency();
    const CMat x = testing::random_complex_matrix(sys.n_grid, 3);
    const CMat dense = g0_dense(sys, w) * x;
    const CMat applied = g0_apply(sys, w, 0.0, x);
    REQUIRE((applied - dense).norm() <= 1e-10 * dense.norm());
  }
}

TEST_CASE("projected solves reproduce the finite-broadening Green's function",
          "[greens]") {
  const KsSystem& sys = model64();
  const double eta = 3e-2;
  const Complex w(0.3, 0.7);
  const CMat x = testing::random_complex_matrix(sys.n_grid, 4);
  const CMat dense = g0_dense(sys, w, eta) * x;
  const CMat applied = g0_apply(sys, w, eta, x);
  REQUIRE((applied - dense).norm() <= 1e-10 * dense.norm());
}

TEST_CASE("projected split stays inside its subspaces", "[greens]") {
  const KsSystem& sys = model64();
  const CMat x = testing::random_complex_matrix(sys.n_grid, 2);
  const GreensSplit split = g0_apply_split(sys, {0.3, 0.7}, 1e-2, x);
  const CMat p_occ = occupied_projector(sys).cast<Complex>();
  const CMat p_perp = CMat::Identity(sys.n_grid, sys.n_grid) - p_occ;
  REQUIRE((p_occ * split.occupied - split.occupied).norm() <=
          1e-13 * split.occupied.norm());
  REQUIRE((p_perp * split.unoccupied - split.unoccupied).norm() <=
          1e-13 * split.unoccupied.norm());
}

TEST_CASE("zero block maps to exactly zero", "[greens]") {
  const CMat zero = CMat::Zero(model64().n_grid, 3);
  REQUIRE(g0_apply(model64(), {0.3, 0.7}, 0.0, zero).norm() == 0.0);
  REQUIRE(g0_apply(model64(), {0.3, 0.7}, 1e-3, zero).norm() == 0.0);
}
