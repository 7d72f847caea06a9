#include <catch2/catch.hpp>

#include "helpers.hpp"

using namespace gwcd;

TEST_CASE("two-point rule matches the classical Radau nodes and weights",
          "[quadrature]") {
  const QuadratureRule rule = lgr_rule(2);
  REQUIRE(rule.nodes(0) == 0.0);
  REQUIRE(rule.nodes(1) == Approx(2.0 / 3.0).margin(1e-14));
  REQUIRE(rule.weights(0) == Approx(0.25).margin(1e-14));
  REQUIRE(rule.weights(1) == Approx(0.75).margin(1e-14));
}

TEST_CASE("weights sum to the interval length", "[quadrature]") {
  for (Index m : {2, 3, 5, 8, 16, 64, 256})
    REQUIRE(lgr_rule(m).weights.sum() == Approx(1.0).margin(1e-14));
}

TEST_CASE("rule is exact through degree 2m-2", "[quadrature]") {
  for (Index m : {2, 4, 8, 13}) {
    const QuadratureRule rule = lgr_rule(m);
    const Index degree = 2 * m - 2;
    for (Index d = 0; d <= degree; ++d) {
      double acc = 0.0;
      for (Index q = 0; q < m; ++q)
        acc += rule.weights(q) * std::pow(rule.nodes(q), double(d));
      REQUIRE(acc == Approx(1.0 / double(d + 1)).margin(1e-13));
    }
  }
}

TEST_CASE("m=8 integrates x^13 to 1/14", "[quadrature]") {
  const QuadratureRule rule = lgr_rule(8);
  double acc = 0.0;
  for (Index q = 0; q < 8; ++q)
    acc += rule.weights(q) * std::pow(rule.nodes(q), 13.0);
  REQUIRE(acc == Approx(1.0 / 14.0).margin(1e-13));
}

TEST_CASE("nodes are strictly increasing, start at 0, stay below 1",
          "[quadrature]") {
  for (Index m : {2, 7, 33, 128}) {
    const QuadratureRule rule = lgr_rule(m);
    REQUIRE(rule.nodes(0) == 0.0);
    for (Index q = 1; q < m; ++q) {
      REQUIRE(rule.nodes(q) > rule.nodes(q - 1));
      REQUIRE(rule.nodes(q) < 1.0);
    }
    REQUIRE(rule.weights.minCoeff() > 0.0);
  }
}

TEST_CASE("half-line change of variable reproduces a known integral",
          "[quadrature]") {
  // f(zeta) = 1/(1+zeta)^2 integrates to 1 on [0, inf).
  const QuadratureRule rule = lgr_rule(16);
  double acc = 0.0;
  for (Index q = 0; q < rule.m; ++q) {
    const double zeta = half_line_zeta(rule.nodes(q));
    acc += rule.weights(q) * half_line_jacobian(rule.nodes(q)) /
           ((1.0 + zeta) * (1.0 + zeta));
  }
  REQUIRE(acc == Approx(1.0).margin(1e-10));
}

TEST_CASE("node count below 2 is rejected", "[quadrature]") {
  REQUIRE_THROWS_AS(lgr_rule(1), InvariantError);
}
