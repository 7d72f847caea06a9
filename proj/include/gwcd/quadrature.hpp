/*
 * Copyright 2026 The gwcd Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef GWCD_QUADRATURE_HPP
#define GWCD_QUADRATURE_HPP

#include "gwcd/core.hpp"

namespace gwcd {

/// Legendre-Gauss-Radau rule on [0, 1] with the fixed node at 0. Weights
/// sum to 1 and the rule is exact for polynomials of degree <= 2m - 2.
struct QuadratureRule {
  Index m = 0;
  Vec nodes;    // strictly increasing, nodes(0) == 0, all < 1
  Vec weights;  // positive
};

/// Builds the m-point LGR rule by the Jacobi-matrix construction: the
/// trailing diagonal entry of the Legendre Jacobi matrix is modified so
/// that -1 becomes an eigenvalue, then nodes and weights follow from the
/// eigendecomposition (weights from the squared first eigenvector
/// components times the zeroth moment).
inline QuadratureRule lgr_rule(Index m) {
  if (m < 2) throw InvariantError("lgr_rule: need at least 2 nodes");

  Vec beta(m - 1);
  for (Index k = 1; k < m; ++k) {
    const double kk = static_cast<double>(k);
    beta(k - 1) = kk / std::sqrt(4.0 * kk * kk - 1.0);
  }

  // delta solves (J_{m-1} - x0 I) delta = beta_{m-1}^2 e_{m-1}; the
  // modified trailing diagonal entry is x0 + delta_{m-1}.
  const double x0 = -1.0;
  Vec delta;
  {
    Mat j_small = Mat::Zero(m - 1, m - 1);
    for (Index k = 0; k + 1 < m - 1; ++k) {
      j_small(k, k + 1) = beta(k);
      j_small(k + 1, k) = beta(k);
    }
    j_small.diagonal().array() -= x0;
    Vec rhs = Vec::Zero(m - 1);
    rhs(m - 2) = beta(m - 2) * beta(m - 2);
    delta = j_small.ldlt().solve(rhs);
  }

  Mat jacobi = Mat::Zero(m, m);
  for (Index k = 0; k < m - 1; ++k) {
    jacobi(k, k + 1) = beta(k);
    jacobi(k + 1, k) = beta(k);
  }
  jacobi(m - 1, m - 1) = x0 + delta(m - 2);

  Eigen::SelfAdjointEigenSolver<Mat> es(jacobi);
  if (es.info() != Eigen::Success)
    throw SingularError("lgr_rule: Jacobi matrix eigensolver failed");

  QuadratureRule rule;
  rule.m = m;
  rule.nodes = (es.eigenvalues().array() + 1.0) * 0.5;  // [-1,1] -> [0,1]
  rule.weights = es.eigenvectors().row(0).transpose().cwiseAbs2();
  // Zeroth moment on [-1,1] is 2; halving maps it to length([0,1]) = 1.
  if (std::abs(rule.nodes(0)) > 1e-13)
    throw SingularError("lgr_rule: fixed endpoint drifted off 0");
  rule.nodes(0) = 0.0;
  for (Index q = 1; q < m; ++q)
    if (!(rule.nodes(q) > rule.nodes(q - 1)) || !(rule.nodes(q) < 1.0))
      throw SingularError("lgr_rule: nodes not strictly increasing in [0,1)");
  return rule;
}

/// Change of variable mapping [0,1) to the half line: zeta = xi/(1-xi).
inline double half_line_zeta(double xi) { return xi / (1.0 - xi); }

/// d(zeta)/d(xi) = (1-xi)^{-2}.
inline double half_line_jacobian(double xi) {
  const double u = 1.0 - xi;
  return 1.0 / (u * u);
}

}  // namespace gwcd

#endif  // GWCD_QUADRATURE_HPP
