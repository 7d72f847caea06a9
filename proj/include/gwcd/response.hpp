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

#ifndef GWCD_RESPONSE_HPP
#define GWCD_RESPONSE_HPP

#include "gwcd/ks_system.hpp"

// Polarizabilities and the screened interaction. Frequencies are complex
// Hartree; eta is kept at zero whenever Im(omega) regularizes the
// denominators, and acts as the usual infinitesimal otherwise. All
// functions are pure; summations run in fixed (i, j) lexicographic order
// so results are bit-reproducible.

namespace gwcd {

namespace detail {

inline void guard_pole_distance(Complex omega, double eta,
                                const std::vector<double>& real_poles,
                                double margin, const char* who) {
  if (eta > 0.0) return;
  for (double p : real_poles) {
    if (std::abs(omega - Complex(p, 0.0)) < margin) {
      std::ostringstream os;
      os << who << ": frequency (" << omega.real() << ", " << omega.imag()
         << ") within " << margin << " of pole " << p;
      throw PoleError(os.str());
    }
  }
}

inline std::vector<double> transition_poles(const KsSystem& sys) {
  std::vector<double> poles;
  poles.reserve(2 * static_cast<std::size_t>(sys.n_v * sys.n_c()));
  for (Index i = 0; i < sys.n_v; ++i)
    for (Index j = sys.n_v; j < sys.n; ++j) {
      const double d = sys.eigenvalues(j) - sys.eigenvalues(i);
      poles.push_back(d);
      poles.push_back(-d);
    }
  return poles;
}

}  // namespace detail

/// Irreducible polarizability, Adler-Wiser double sum over occupied x
/// unoccupied pairs with spin factor 2. Complex symmetric.
inline CMat chi0_dense(const KsSystem& sys, Complex omega, double eta = 0.0) {
  detail::guard_pole_distance(omega, eta, detail::transition_poles(sys),
                              1e-10, "chi0_dense");
  const Index p = sys.n_v * sys.n_c();
  Mat phi(sys.n_grid, p);
  CVec coeff(p);
  const Complex ieta(0.0, eta);
  Index col = 0;
  for (Index i = 0; i < sys.n_v; ++i) {
    for (Index j = sys.n_v; j < sys.n; ++j, ++col) {
      phi.col(col) = sys.orbitals.col(i).cwiseProduct(sys.orbitals.col(j));
      const double delta = sys.eigenvalues(j) - sys.eigenvalues(i);
      coeff(col) = 2.0 * (1.0 / (omega - delta + ieta) -
                          1.0 / (omega + delta - ieta));
    }
  }
  CMat weighted = phi.cast<Complex>() * coeff.asDiagonal();
  return weighted * phi.transpose().cast<Complex>();
}

/// chi0(omega) * g without forming chi0: one pair of shifted solves per
/// occupied state, at shifts eps_i + omega and eps_i - omega, each with
/// right-hand side -P_perp Diag(psi_i) g. The shifted operator is closed
/// with the occupied projector so the factorization never touches the
/// projected-out subspace.
inline CVec chi0_apply(const KsSystem& sys, Complex omega, const CVec& g) {
  if (g.size() != sys.n_grid)
    throw DimensionError("chi0_apply: vector length != n_grid");
  for (Index i = 0; i < sys.n_v; ++i)
    for (Index j = sys.n_v; j < sys.n; ++j) {
      const double delta = sys.eigenvalues(j) - sys.eigenvalues(i);
      if (std::abs(Complex(delta, 0.0) - omega) < 1e-10 ||
          std::abs(Complex(delta, 0.0) + omega) < 1e-10)
        throw SingularError("chi0_apply: shifted operator singular on the "
                            "unoccupied subspace");
    }

  const CMat h_ks = ks_hamiltonian(sys).cast<Complex>();
  const CMat p_occ = occupied_projector(sys).cast<Complex>();
  const CMat p_perp =
      CMat::Identity(sys.n_grid, sys.n_grid) - p_occ;

  CVec acc = CVec::Zero(sys.n_grid);
  for (Index i = 0; i < sys.n_v; ++i) {
    const CVec psi = sys.orbitals.col(i).cast<Complex>();
    const CVec rhs = -(p_perp * psi.cwiseProduct(g));
    for (int sign : {+1, -1}) {
      const Complex shift = sys.eigenvalues(i) + double(sign) * omega;
      CMat shifted = h_ks;
      shifted.diagonal().array() -= shift;
      const CMat op = p_perp * shifted * p_perp + p_occ;
      acc += psi.cwiseProduct(op.partialPivLu().solve(rhs));
    }
  }
  return 2.0 * acc;
}

/// Dielectric matrix I - v chi0(omega).
inline CMat epsilon_dense(const KsSystem& sys, Complex omega,
                          double eta = 0.0) {
  CMat eps = -sys.coulomb.cast<Complex>() * chi0_dense(sys, omega, eta);
  eps.diagonal().array() += 1.0;
  return eps;
}

/// Reducible polarizability chi = (I - chi0 v)^{-1} chi0, symmetrized
/// after a 1e-10 consistency check.
inline CMat chi_dense(const KsSystem& sys, Complex omega, double eta = 0.0) {
  const CMat chi0 = chi0_dense(sys, omega, eta);
  CMat lhs = -chi0 * sys.coulomb.cast<Complex>();
  lhs.diagonal().array() += 1.0;
  CMat chi = lhs.partialPivLu().solve(chi0);
  const double scale = chi0.norm();
  if ((lhs * chi - chi0).norm() > 1e-6 * std::max(scale, 1.0))
    throw SingularError("chi_dense: I - chi0 v numerically singular "
                        "(frequency at a screened-interaction pole?)");
  const double asym = (chi - chi.transpose()).norm();
  if (asym > 1e-10 * std::max(chi.norm(), 1.0))
    throw InvariantError("chi_dense: result lost complex symmetry");
  return 0.5 * (chi + chi.transpose()).eval();
}

/// Frequency-dependent part of the screened interaction,
/// W_p = eps^{-1} v - v. Complex symmetric; equals v chi v.
inline CMat wp_dense(const KsSystem& sys, Complex omega, double eta = 0.0) {
  const CMat eps = epsilon_dense(sys, omega, eta);
  const CMat v = sys.coulomb.cast<Complex>();
  CMat w = eps.partialPivLu().solve(v);
  if ((eps * w - v).norm() > 1e-6 * std::max(v.norm(), 1.0))
    throw SingularError("wp_dense: dielectric matrix numerically singular");
  return w - v;
}

/// All three response operators at one frequency, sharing a single chi0
/// evaluation.
struct ResponseSnapshot {
  Complex omega{0.0, 0.0};
  CMat chi0;
  CMat epsilon;
  CMat wp;
};

inline ResponseSnapshot response_snapshot(const KsSystem& sys, Complex omega,
                                          double eta = 0.0) {
  ResponseSnapshot snap;
  snap.omega = omega;
  snap.chi0 = chi0_dense(sys, omega, eta);
  snap.epsilon = -sys.coulomb.cast<Complex>() * snap.chi0;
  snap.epsilon.diagonal().array() += 1.0;
  const CMat v = sys.coulomb.cast<Complex>();
  CMat w = snap.epsilon.partialPivLu().solve(v);
  if ((snap.epsilon * w - v).norm() > 1e-6 * std::max(v.norm(), 1.0))
    throw SingularError(
        "response_snapshot: dielectric matrix numerically singular");
  snap.wp = w - v;
  return snap;
}

}  // namespace gwcd

#endif  // GWCD_RESPONSE_HPP
