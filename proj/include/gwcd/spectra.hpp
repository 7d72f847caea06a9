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

#ifndef GWCD_SPECTRA_HPP
#define GWCD_SPECTRA_HPP

#include <optional>

#include "gwcd/response.hpp"

// Pole structure of the frequency-dependent screened interaction. The
// RPA excitation energies Omega_s and amplitude vectors b_s satisfy
//
//   W_p(w) = sum_s b_s b_s^T [1/(w - Omega_s) - 1/(w + Omega_s)],
//
// an identity against wp_dense that the test suite checks to 1e-8.

namespace gwcd {

struct CasidaSpectrum {
  Vec omegas;      // n_v * n_c excitation energies, ascending, all > 0
  Mat amplitudes;  // n_grid x (n_v * n_c); column s is b_s
};

namespace detail {

/// Transition energies eps_j - eps_i in fixed (i, j) lexicographic order,
/// plus the matching pair-density columns.
inline void transition_basis(const KsSystem& sys, Vec& deltas, Mat& phi) {
  const Index p = sys.n_v * sys.n_c();
  deltas.resize(p);
  phi.resize(sys.n_grid, p);
  Index col = 0;
  for (Index i = 0; i < sys.n_v; ++i)
    for (Index j = sys.n_v; j < sys.n; ++j, ++col) {
      deltas(col) = sys.eigenvalues(j) - sys.eigenvalues(i);
      phi.col(col) = sys.orbitals.col(i).cwiseProduct(sys.orbitals.col(j));
    }
}

/// Coupling matrix K entering the excitation eigenproblem. The spin
/// factor 2 of the polarizability double sum is folded in here; with
/// this convention the eigenvalues of D^2 + 2 D^{1/2} K D^{1/2} are the
/// squared poles of W_p exactly, which the amplitude reconstruction
/// requires.
inline Mat coupling_matrix(const KsSystem& sys, const Mat& phi) {
  return 2.0 * phi.transpose() * (sys.coulomb * phi);
}

}  // namespace detail

/// Reduced symmetric form of the excitation eigenproblem,
/// D^2 + 2 D^{1/2} K D^{1/2}; its eigenvalues are the squared poles.
inline Mat casida_reduced_matrix(const KsSystem& sys) {
  Vec deltas;
  Mat phi;
  detail::transition_basis(sys, deltas, phi);
  const Mat k = detail::coupling_matrix(sys, phi);
  const Vec dsqrt = deltas.cwiseSqrt();
  Mat reduced = dsqrt.asDiagonal() * k * dsqrt.asDiagonal();
  reduced *= 2.0;
  reduced += Mat(deltas.cwiseProduct(deltas).asDiagonal());
  return 0.5 * (reduced + reduced.transpose());
}

/// Full 2p x 2p block eigenproblem [[D+K, K], [-K, -(D+K)]]; eigenvalues
/// come in +/- pairs and the positive ones are the poles of W_p. Kept
/// mainly as the oracle for the reduced form.
inline Mat casida_full_matrix(const KsSystem& sys) {
  Vec deltas;
  Mat phi;
  detail::transition_basis(sys, deltas, phi);
  const Mat k = detail::coupling_matrix(sys, phi);
  const Index p = deltas.size();
  Mat hc(2 * p, 2 * p);
  const Mat a = Mat(deltas.asDiagonal()) + k;
  hc.topLeftCorner(p, p) = a;
  hc.topRightCorner(p, p) = k;
  hc.bottomLeftCorner(p, p) = -k;
  hc.bottomRightCorner(p, p) = -a;
  return hc;
}

/// Excitation energies and pole-strength vectors of W_p via the reduced
/// symmetric eigenproblem. Amplitudes are scaled so the pole expansion
/// reproduces wp_dense.
inline CasidaSpectrum casida_full(const KsSystem& sys) {
  const Index p = sys.n_v * sys.n_c();
  if (p > 20000)
    throw BudgetError("casida_full: n_v * n_c exceeds the dense eigensolve "
                      "budget of 20000");
  Vec deltas;
  Mat phi;
  detail::transition_basis(sys, deltas, phi);

  Eigen::SelfAdjointEigenSolver<Mat> es(casida_reduced_matrix(sys));
  if (es.info() != Eigen::Success)
    throw SingularError("casida_full: eigensolver failed");

  CasidaSpectrum spec;
  spec.omegas = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  for (Index s = 0; s < p; ++s)
    if (!(spec.omegas(s) > 0))
      throw InvariantError("casida_full: nonpositive excitation energy");

  const Vec dsqrt = deltas.cwiseSqrt();
  const Mat t = sys.coulomb * (phi * (dsqrt.asDiagonal() * es.eigenvectors()));
  spec.amplitudes.resize(sys.n_grid, p);
  for (Index s = 0; s < p; ++s)
    spec.amplitudes.col(s) = std::sqrt(2.0 / spec.omegas(s)) * t.col(s);
  return spec;
}

/// Smallest positive pole of W_p; the width of the pole-free vertical
/// stripe around the imaginary axis. Bounded below by the HOMO-LUMO gap
/// whenever the Coulomb matrix is PSD.
inline double delta_w(const KsSystem& sys) {
  Eigen::SelfAdjointEigenSolver<Mat> es(casida_reduced_matrix(sys),
                                        Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw SingularError("delta_w: eigensolver failed");
  const double lambda_min = es.eigenvalues()(0);
  if (!(lambda_min > 0))
    throw InvariantError("delta_w: smallest squared pole not positive");
  return std::sqrt(lambda_min);
}

/// Pole expansion of W_p rebuilt from a Casida spectrum.
inline CMat wp_from_poles(const CasidaSpectrum& spec, Complex omega) {
  const Index n = spec.amplitudes.rows();
  CMat w = CMat::Zero(n, n);
  for (Index s = 0; s < spec.omegas.size(); ++s) {
    const Complex coeff = 1.0 / (omega - spec.omegas(s)) -
                          1.0 / (omega + spec.omegas(s));
    const CVec b = spec.amplitudes.col(s).cast<Complex>();
    w.noalias() += coeff * (b * b.transpose());
  }
  return w;
}

/// Classification of a real evaluation frequency: a vertical integration
/// path with real part between lb and ub avoids every pole of both
/// G0(omega + w') and W_p(w').
struct ResidueFreeReport {
  double omega = 0.0;
  double delta_w = 0.0;
  double lb = 0.0;
  double ub = 0.0;
  bool is_residue_free = false;
  std::optional<double> suggested_shift;  // midpoint, iff residue free
};

inline ResidueFreeReport residue_free(const KsSystem& sys, double omega,
                                      double dw) {
  ResidueFreeReport rep;
  rep.omega = omega;
  rep.delta_w = dw;
  rep.lb = std::max(-dw, sys.homo() - omega);
  rep.ub = std::min(sys.lumo() - omega, dw);
  rep.is_residue_free = rep.lb < rep.ub;
  if (rep.is_residue_free) rep.suggested_shift = 0.5 * (rep.lb + rep.ub);
  return rep;
}

/// One G0 pole requiring a residue correction for a given vertical path.
/// `location` is eps_j - omega on the real axis; `sign` is the factor
/// multiplying the residue term in the corrected integral: -1 for an
/// occupied pole right of the path, +1 for an unoccupied pole left of
/// it. For an admissible path at a residue-free frequency the list is
/// empty.
struct PathResidue {
  Index state = 0;        // 1-based orbital index; strength psi_j psi_j^T
  double location = 0.0;  // Re of the pole in the w' plane
  int sign = 0;
};

inline std::vector<PathResidue> enclosed_g0_poles(
    const KsSystem& sys, double omega, double shift,
    const CasidaSpectrum* wp_poles = nullptr) {
  for (Index j = 0; j < sys.n; ++j)
    if (std::abs(sys.eigenvalues(j) - omega - shift) < 1e-8) {
      std::ostringstream os;
      os << "enclosed_g0_poles: path Re(w') = " << shift
         << " runs through the G0 pole at " << sys.eigenvalues(j) - omega;
      throw PoleError(os.str());
    }
  if (wp_poles)
    for (Index s = 0; s < wp_poles->omegas.size(); ++s)
      if (std::abs(wp_poles->omegas(s) - shift) < 1e-8 ||
          std::abs(wp_poles->omegas(s) + shift) < 1e-8)
        throw PoleError("enclosed_g0_poles: path runs through a pole of "
                        "the screened interaction");

  std::vector<PathResidue> out;
  for (Index j = 1; j <= sys.n; ++j) {
    const double z = sys.eps(j) - omega;
    const bool occupied = j <= sys.n_v;
    if (occupied && z > shift) out.push_back({j, z, -1});
    if (!occupied && z < shift) out.push_back({j, z, +1});
  }
  return out;
}

}  // namespace gwcd

#endif  // GWCD_SPECTRA_HPP
