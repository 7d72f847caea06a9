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

#ifndef GWCD_KS_SYSTEM_HPP
#define GWCD_KS_SYSTEM_HPP

#include <optional>
#include <sstream>

#include "gwcd/core.hpp"

namespace gwcd {

/// Discretized Kohn-Sham ground state. Grid weights are folded into the
/// stored orbitals and into the Coulomb matrix, so every inner product
/// below is a plain dot product. Immutable after construction; safe to
/// share across threads.
///
/// State indices at the public API are 1-based: state n_v is the HOMO,
/// state n_v + 1 the LUMO.
struct KsSystem {
  Index n_grid = 0;
  Index n = 0;    // total number of states
  Index n_v = 0;  // occupied states
  Vec eigenvalues;  // ascending, Hartree
  Mat orbitals;     // n_grid x n, column j-1 = state j
  Mat coulomb;      // n_grid x n_grid, symmetric PSD
  std::optional<Vec> vxc_element;  // <psi_i|Vxc|psi_i>, Hartree

  Index n_c() const { return n - n_v; }
  double eps(Index state) const { return eigenvalues(state - 1); }
  double homo() const { return eigenvalues(n_v - 1); }
  double lumo() const { return eigenvalues(n_v); }
  double gap() const { return lumo() - homo(); }
  Vec orbital(Index state) const { return orbitals.col(state - 1); }
};

namespace detail {

inline void check_state_index(const KsSystem& sys, Index state,
                              const char* who) {
  if (state < 1 || state > sys.n) {
    std::ostringstream os;
    os << who << ": state index " << state << " outside [1, " << sys.n << "]";
    throw DimensionError(os.str());
  }
}

}  // namespace detail

/// Throws InvariantError naming the first failing check. Tolerances:
/// orthonormality 1e-12 elementwise, Coulomb PSD up to -1e-12*||v||.
inline void validate_ks_system(const KsSystem& sys) {
  auto fail = [](const std::string& what) { throw InvariantError(what); };

  if (sys.n_grid < 1 || sys.n < 1) fail("empty system");
  if (!(sys.n_v > 0 && sys.n_v < sys.n))
    fail("occupation count must satisfy 0 < n_v < n");
  if (sys.eigenvalues.size() != sys.n) fail("eigenvalue count != n");
  if (sys.orbitals.rows() != sys.n_grid || sys.orbitals.cols() != sys.n)
    fail("orbital matrix is not n_grid x n");
  if (sys.coulomb.rows() != sys.n_grid || sys.coulomb.cols() != sys.n_grid)
    fail("coulomb matrix is not n_grid x n_grid");
  if (sys.vxc_element && sys.vxc_element->size() != sys.n)
    fail("vxc element count != n");

  for (Index j = 1; j < sys.n; ++j)
    if (sys.eigenvalues(j) < sys.eigenvalues(j - 1))
      fail("eigenvalues not nondecreasing");

  Mat gram = sys.orbitals.transpose() * sys.orbitals;
  gram.diagonal().array() -= 1.0;
  double ortho = gram.cwiseAbs().maxCoeff();
  if (ortho > 1e-12) {
    std::ostringstream os;
    os << "orbitals not orthonormal: max |Psi^T Psi - I| = " << ortho;
    fail(os.str());
  }

  if (sys.coulomb != sys.coulomb.transpose())
    fail("coulomb matrix not exactly symmetric as stored");
  Eigen::SelfAdjointEigenSolver<Mat> es(sys.coulomb,
                                        Eigen::EigenvaluesOnly);
  double vnorm = es.eigenvalues().cwiseAbs().maxCoeff();
  if (es.eigenvalues()(0) < -1e-12 * std::max(vnorm, 1.0)) {
    std::ostringstream os;
    os << "coulomb matrix not PSD: lambda_min = " << es.eigenvalues()(0);
    fail(os.str());
  }

  if (!(sys.gap() > 0)) fail("HOMO-LUMO gap not positive");
}

/// rho_ij = psi_i (.) psi_j, the elementwise orbital product. Symmetric
/// in (i, j) by construction.
inline Vec pair_density(const KsSystem& sys, Index i, Index j) {
  detail::check_state_index(sys, i, "pair_density");
  detail::check_state_index(sys, j, "pair_density");
  return sys.orbitals.col(i - 1).cwiseProduct(sys.orbitals.col(j - 1));
}

/// Kohn-Sham Hamiltonian rebuilt from its eigenpairs. The stored format
/// carries eigenpairs only, and at desk scale the n^3 rebuild is cheap.
inline Mat ks_hamiltonian(const KsSystem& sys) {
  return sys.orbitals * sys.eigenvalues.asDiagonal() *
         sys.orbitals.transpose();
}

/// Projector onto the occupied subspace.
inline Mat occupied_projector(const KsSystem& sys) {
  const Mat occ = sys.orbitals.leftCols(sys.n_v);
  return occ * occ.transpose();
}

/// Two-state fixture used across the test suite and the self test:
/// eigenvalues (-1/2, 1/2), orbitals the 2x2 Hadamard frame, Coulomb
/// [[1, 1/2], [1/2, 1]].
inline KsSystem two_state_fixture() {
  KsSystem sys;
  sys.n_grid = 2;
  sys.n = 2;
  sys.n_v = 1;
  sys.eigenvalues = Vec(2);
  sys.eigenvalues << -0.5, 0.5;
  const double s = 1.0 / std::sqrt(2.0);
  sys.orbitals = Mat(2, 2);
  sys.orbitals << s, s, s, -s;
  sys.coulomb = Mat(2, 2);
  sys.coulomb << 1.0, 0.5, 0.5, 1.0;
  return sys;
}

}  // namespace gwcd

#endif  // GWCD_KS_SYSTEM_HPP
