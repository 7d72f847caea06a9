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

#ifndef GWCD_GREENS_HPP
#define GWCD_GREENS_HPP

#include "gwcd/ks_system.hpp"

namespace gwcd {

/// Non-interacting Green's function: occupied poles sit below the real
/// axis shifted by +i eta, unoccupied poles above by -i eta. Complex
/// symmetric for real orbitals.
inline CMat g0_dense(const KsSystem& sys, Complex omega, double eta = 0.0) {
  if (eta == 0.0) {
    for (Index j = 0; j < sys.n; ++j)
      if (std::abs(omega - Complex(sys.eigenvalues(j), 0.0)) < 1e-10) {
        std::ostringstream os;
        os << "g0_dense: frequency within 1e-10 of eigenvalue "
           << sys.eigenvalues(j);
        throw PoleError(os.str());
      }
  }
  CVec coeff(sys.n);
  for (Index j = 0; j < sys.n; ++j) {
    const double sgn = j < sys.n_v ? -1.0 : 1.0;
    coeff(j) = 1.0 / (omega - sys.eigenvalues(j) + Complex(0.0, sgn * eta));
  }
  const CMat psi = sys.orbitals.cast<Complex>();
  return psi * coeff.asDiagonal() * psi.transpose();
}

/// The two projected solves behind g0_apply at eta > 0: `occupied`
/// solves P_v [(omega - i eta) I - H] P_v X1 = P_v X and stays in the
/// occupied subspace; `unoccupied` is its complement at omega + i eta.
struct GreensSplit {
  CMat occupied;
  CMat unoccupied;
};

inline GreensSplit g0_apply_split(const KsSystem& sys, Complex omega,
                                  double eta, const CMat& block) {
  if (block.rows() != sys.n_grid)
    throw DimensionError("g0_apply_split: block row count != n_grid");
  const CMat h_ks = ks_hamiltonian(sys).cast<Complex>();
  const CMat p_occ = occupied_projector(sys).cast<Complex>();
  const CMat p_perp = CMat::Identity(sys.n_grid, sys.n_grid) - p_occ;

  auto projected_solve = [&](const CMat& proj, const CMat& proj_other,
                             Complex shifted_omega) {
    CMat op = -h_ks;
    op.diagonal().array() += shifted_omega;
    const CMat closed = proj * op * proj + proj_other;
    // Re-project so the returned block lies in the subspace exactly.
    return (proj * closed.partialPivLu().solve(proj * block)).eval();
  };

  GreensSplit split;
  split.occupied = projected_solve(p_occ, p_perp, omega - Complex(0, eta));
  split.unoccupied = projected_solve(p_perp, p_occ, omega + Complex(0, eta));
  return split;
}

/// G0(omega) X through shifted linear solves instead of the spectral
/// sum. For eta = 0 a single system (omega I - H) Y = X suffices; for
/// eta > 0 the occupied and unoccupied contributions are solved as two
/// projected systems at omega -/+ i eta and summed.
inline CMat g0_apply(const KsSystem& sys, Complex omega, double eta,
                     const CMat& block) {
  if (block.rows() != sys.n_grid)
    throw DimensionError("g0_apply: block row count != n_grid");
  for (Index j = 0; j < sys.n; ++j)
    if (std::abs(omega - Complex(sys.eigenvalues(j), 0.0)) < 1e-10 &&
        eta == 0.0)
      throw SingularError("g0_apply: shifted operator singular");

  if (eta == 0.0) {
    CMat op = (-ks_hamiltonian(sys)).cast<Complex>();
    op.diagonal().array() += omega;
    return op.partialPivLu().solve(block);
  }
  const GreensSplit split = g0_apply_split(sys, omega, eta, block);
  return split.occupied + split.unoccupied;
}

}  // namespace gwcd

#endif  // GWCD_GREENS_HPP
