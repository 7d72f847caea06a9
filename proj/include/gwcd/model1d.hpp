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

#ifndef GWCD_MODEL1D_HPP
#define GWCD_MODEL1D_HPP

#include "gwcd/ks_system.hpp"

namespace gwcd {

/// Synthetic 1D molecule on a periodic grid: second-order finite
/// difference Laplacian plus a sum of negative Gaussian wells, with a
/// soft-Coulomb interaction kernel 1/sqrt(dx^2 + a^2). Desk-scale
/// stand-in for an externally computed ground state.
struct ModelSpec {
  Index n_grid = 64;
  double box_length = 20.0;               // Bohr
  std::vector<double> well_depths{2.0, 1.25};   // Hartree, depths > 0
  std::vector<double> well_centers{7.0, 13.5};  // Bohr
  std::vector<double> well_widths{1.2, 1.8};    // Bohr
  double soft_core = 1.0;                 // Bohr, a > 0
  Index n_v = 2;
};

inline void validate_model_spec(const ModelSpec& spec) {
  if (spec.n_grid < 8) throw InvariantError("model: n_grid must be >= 8");
  if (!(spec.soft_core > 0)) throw InvariantError("model: soft core a must be > 0");
  if (!(spec.box_length > 0)) throw InvariantError("model: box length must be > 0");
  if (spec.n_v < 1 || spec.n_v >= spec.n_grid)
    throw InvariantError("model: need 1 <= n_v < n_grid");
  if (spec.well_depths.size() != spec.well_centers.size() ||
      spec.well_depths.size() != spec.well_widths.size())
    throw InvariantError("model: well parameter lists differ in length");
  for (double w : spec.well_widths)
    if (!(w > 0)) throw InvariantError("model: well widths must be > 0");
}

namespace detail {

/// Shortest signed displacement between grid points on the ring.
inline double ring_distance(double x, double y, double length) {
  double d = std::abs(x - y);
  return std::min(d, length - d);
}

}  // namespace detail

inline KsSystem build_model_1d(const ModelSpec& spec) {
  validate_model_spec(spec);
  const Index m = spec.n_grid;
  const double h = spec.box_length / static_cast<double>(m);

  Mat hamiltonian = Mat::Zero(m, m);
  const double inv_h2 = 1.0 / (h * h);
  for (Index i = 0; i < m; ++i) {
    hamiltonian(i, i) += 2.0 * inv_h2;
    hamiltonian(i, (i + 1) % m) -= inv_h2;
    hamiltonian(i, (m + i - 1) % m) -= inv_h2;
  }
  for (Index i = 0; i < m; ++i) {
    const double x = h * static_cast<double>(i);
    double pot = 0.0;
    for (std::size_t w = 0; w < spec.well_depths.size(); ++w) {
      const double d =
          detail::ring_distance(x, spec.well_centers[w], spec.box_length);
      const double s = spec.well_widths[w];
      pot -= spec.well_depths[w] * std::exp(-0.5 * d * d / (s * s));
    }
    hamiltonian(i, i) += pot;
  }
  // Exact symmetry regardless of rounding in the assembly above.
  hamiltonian = ((hamiltonian + hamiltonian.transpose()) * 0.5).eval();

  Eigen::SelfAdjointEigenSolver<Mat> es(hamiltonian);
  if (es.info() != Eigen::Success)
    throw SingularError("model: Hamiltonian eigensolve failed");

  KsSystem sys;
  sys.n_grid = m;
  sys.n = m;
  sys.n_v = spec.n_v;
  sys.eigenvalues = es.eigenvalues();
  sys.orbitals = es.eigenvectors();

  if (std::abs(sys.lumo() - sys.homo()) < 1e-10)
    throw GapError("model: degenerate HOMO-LUMO gap");

  // Soft-Coulomb kernel on ring distances. The grid weight h is carried
  // by the weight-folded orbitals (two factors of sqrt(h) per pair
  // density), so the kernel is stored pointwise. The minimum-image
  // truncation leaves a kink at half the box, which pushes a few
  // circulant eigenvalues slightly negative; clipping them at zero
  // projects the kernel onto the PSD cone while keeping it circulant
  // and exactly symmetric.
  Vec row(m);
  for (Index k = 0; k < m; ++k) {
    const double d = detail::ring_distance(h * static_cast<double>(k), 0.0,
                                           spec.box_length);
    row(k) = 1.0 / std::sqrt(d * d + spec.soft_core * spec.soft_core);
  }
  Vec modes(m);
  for (Index k = 0; k < m; ++k) {
    double acc = 0.0;
    for (Index j = 0; j < m; ++j)
      acc += row(j) * std::cos(2.0 * M_PI * static_cast<double>(k) *
                               static_cast<double>(j) /
                               static_cast<double>(m));
    modes(k) = acc;
  }
  // Positive floor rather than zero: a strictly positive spectrum keeps
  // v invertible, which the full-rank factorization identities rely on.
  const double floor = 1e-8 * modes.maxCoeff();
  modes = modes.cwiseMax(floor);
  Vec clipped(m);
  for (Index j = 0; j < m; ++j) {
    double acc = 0.0;
    for (Index k = 0; k < m; ++k)
      acc += modes(k) * std::cos(2.0 * M_PI * static_cast<double>(k) *
                                 static_cast<double>(j) /
                                 static_cast<double>(m));
    clipped(j) = acc / static_cast<double>(m);
  }
  for (Index j = 1; 2 * j < m; ++j) {  // enforce evenness exactly
    const double avg = 0.5 * (clipped(j) + clipped(m - j));
    clipped(j) = avg;
    clipped(m - j) = avg;
  }
  sys.coulomb = Mat(m, m);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < m; ++j)
      sys.coulomb(i, j) = clipped(std::abs(i - j));

  validate_ks_system(sys);
  return sys;
}

}  // namespace gwcd

#endif  // GWCD_MODEL1D_HPP
