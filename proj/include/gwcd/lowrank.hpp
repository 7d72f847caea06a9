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

#ifndef GWCD_LOWRANK_HPP
#define GWCD_LOWRANK_HPP

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

#include "gwcd/greens.hpp"
#include "gwcd/response.hpp"

// Rank-k representations of W_p. All factorizations here are dense
// reference SVDs: the goal is to isolate the error of the low-rank
// approximation itself, with every linear system solved to full
// precision.

namespace gwcd {

enum class Scheme { Dense, SvdWp, SvdVchi, SmwVchi0, FourierTrunc };

inline const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::Dense: return "dense";
    case Scheme::SvdWp: return "svd-wp";
    case Scheme::SvdVchi: return "svd-vchi";
    case Scheme::SmwVchi0: return "smw-vchi0";
    case Scheme::FourierTrunc: return "fourier";
  }
  return "?";
}

/// Rank-k factorization U S V^* of W_p at one frequency. S is diagonal
/// for plain truncated SVDs and a full k x k middle factor for the
/// SMW and Fourier constructions.
struct LowRankFactor {
  Scheme scheme = Scheme::SvdWp;
  Complex omega{0.0, 0.0};
  Index rank = 0;
  CMat U, S, V;

  CMat reconstruct() const { return U * S * V.adjoint(); }
};

namespace detail {

inline void check_rank(const KsSystem& sys, Index k, const char* who) {
  if (k < 1 || k > sys.n_grid) {
    std::ostringstream os;
    os << who << ": rank " << k << " outside [1, " << sys.n_grid << "]";
    throw DimensionError(os.str());
  }
}

inline Eigen::JacobiSVD<CMat> thin_svd(const CMat& a) {
  return Eigen::JacobiSVD<CMat>(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
}

inline double spectral_norm(const CMat& a) {
  return Eigen::JacobiSVD<CMat>(a).singularValues()(0);
}

}  // namespace detail

/// Best rank-k approximation of W_p itself (Eckart-Young optimal in the
/// 2-norm).
inline LowRankFactor svd_wp(const KsSystem& sys, Complex omega, Index k,
                            double eta = 0.0) {
  detail::check_rank(sys, k, "svd_wp");
  auto svd = detail::thin_svd(wp_dense(sys, omega, eta));
  LowRankFactor f;
  f.scheme = Scheme::SvdWp;
  f.omega = omega;
  f.rank = k;
  f.U = svd.matrixU().leftCols(k);
  f.S = svd.singularValues().head(k).cast<Complex>().asDiagonal();
  f.V = svd.matrixV().leftCols(k);
  return f;
}

/// Truncated SVD of v chi; one bare-Coulomb factor is kept exactly and
/// the right factor v V-hat is no longer orthonormal.
inline LowRankFactor svd_vchi(const KsSystem& sys, Complex omega, Index k,
                              double eta = 0.0) {
  detail::check_rank(sys, k, "svd_vchi");
  const CMat vchi = sys.coulomb.cast<Complex>() * chi_dense(sys, omega, eta);
  auto svd = detail::thin_svd(vchi);
  LowRankFactor f;
  f.scheme = Scheme::SvdVchi;
  f.omega = omega;
  f.rank = k;
  f.U = svd.matrixU().leftCols(k);
  f.S = svd.singularValues().head(k).cast<Complex>().asDiagonal();
  f.V = sys.coulomb.cast<Complex>() * svd.matrixV().leftCols(k);
  return f;
}

/// Truncated SVD of v chi0 converted to a factorization of W_p through
/// the Sherman-Morrison-Woodbury identity: W_p ~ U-hat O^{-1} (v V-hat)^*
/// with O = S^{-1} - V-hat^* U-hat. Only irreducible-polarizability
/// solves enter this scheme. The middle factor is evaluated in the
/// inversion-free form O^{-1} = (I - S V-hat^* U-hat)^{-1} S, so trailing
/// singular values at or below roundoff never get inverted; the
/// conditioning guard sits on the factor that is.
inline LowRankFactor smw_vchi0(const KsSystem& sys, Complex omega, Index k,
                               double eta = 0.0) {
  detail::check_rank(sys, k, "smw_vchi0");
  const CMat vchi0 = sys.coulomb.cast<Complex>() * chi0_dense(sys, omega, eta);
  auto svd = detail::thin_svd(vchi0);
  const CMat u = svd.matrixU().leftCols(k);
  const CMat v = svd.matrixV().leftCols(k);
  const CMat s = svd.singularValues().head(k).cast<Complex>().asDiagonal();

  CMat screen = -s * (v.adjoint() * u);
  screen.diagonal().array() += 1.0;  // I - S V^* U
  auto screen_svd = Eigen::JacobiSVD<CMat>(screen);
  const double cond = screen_svd.singularValues()(0) /
                      screen_svd.singularValues()(k - 1);
  if (!(cond <= 1e12))
    throw SingularError("smw_vchi0: middle factor numerically singular "
                        "(frequency too close to a screened-interaction "
                        "pole for this rank)");

  LowRankFactor f;
  f.scheme = Scheme::SmwVchi0;
  f.omega = omega;
  f.rank = k;
  f.U = u;
  f.S = screen.partialPivLu().solve(s);
  f.V = sys.coulomb.cast<Complex>() * v;
  return f;
}

namespace detail {

/// Unitary DFT matrix, F(j, l) = exp(-2 pi i j l / n) / sqrt(n).
inline CMat dft_matrix(Index n) {
  CMat f(n, n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (Index j = 0; j < n; ++j)
    for (Index l = 0; l < n; ++l) {
      const double phase = -2.0 * M_PI * static_cast<double>(j) *
                           static_cast<double>(l) / static_cast<double>(n);
      f(j, l) = scale * Complex(std::cos(phase), std::sin(phase));
    }
  return f;
}

/// Indices of the k largest diagonal entries of F^* v F; ties broken by
/// lower frequency (min(l, n-l)), then by raw index.
inline std::vector<Index> coulomb_mode_selection(const Vec& diag, Index k) {
  const Index n = diag.size();
  std::vector<Index> order(static_cast<std::size_t>(n));
  for (Index l = 0; l < n; ++l) order[static_cast<std::size_t>(l)] = l;
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    if (diag(a) != diag(b)) return diag(a) > diag(b);
    const Index fa = std::min(a, n - a), fb = std::min(b, n - b);
    if (fa != fb) return fa < fb;
    return a < b;
  });
  order.resize(static_cast<std::size_t>(k));
  return order;
}

}  // namespace detail

/// Reciprocal-space truncation of the bare Coulomb operator: keep the k
/// largest diagonal entries of F^* v F, project chi0 onto those modes,
/// and rebuild W_p in the inversion-free form
/// (F E v_t) chi_t [I - v_t chi_t]^{-1} (F E v_t)^* -- chi_t itself may
/// be singular (it is at rank deficiency of chi0), so it is never
/// inverted.
inline LowRankFactor fourier_trunc(const KsSystem& sys, Complex omega,
                                   Index k, double eta = 0.0) {
  detail::check_rank(sys, k, "fourier_trunc");
  const Index n = sys.n_grid;
  const CMat f = detail::dft_matrix(n);
  const CMat vhat = f.adjoint() * sys.coulomb.cast<Complex>() * f;
  const Vec vdiag = vhat.diagonal().real();
  const auto picked = detail::coulomb_mode_selection(vdiag, k);

  CMat modes(n, k);  // F E_t
  Vec vt(k);
  for (Index c = 0; c < k; ++c) {
    modes.col(c) = f.col(picked[static_cast<std::size_t>(c)]);
    vt(c) = vdiag(picked[static_cast<std::size_t>(c)]);
  }

  const CMat chi0 = chi0_dense(sys, omega, eta);
  const CMat chi_t = modes.adjoint() * chi0 * modes;
  CMat denom = vt.cast<Complex>().asDiagonal() * chi_t;
  denom = -denom;
  denom.diagonal().array() += 1.0;
  Eigen::PartialPivLU<CMat> lu(denom);
  const CMat denom_inv = lu.solve(CMat::Identity(k, k));
  if ((denom * denom_inv - CMat::Identity(k, k)).norm() > 1e-6)
    throw SingularError("fourier_trunc: I - v_t chi_t numerically singular");
  const CMat mid = chi_t * denom_inv;

  LowRankFactor res;
  res.scheme = Scheme::FourierTrunc;
  res.omega = omega;
  res.rank = k;
  res.U = modes * vt.cast<Complex>().asDiagonal();
  res.S = mid;
  res.V = res.U;
  return res;
}

/// Normalized singular value profiles of W_p (= v chi v), v chi0, and
/// v chi at one frequency, each divided by its largest value.
struct SingularValueProfile {
  Vec wp;
  Vec vchi0;
  Vec vchi;
};

inline SingularValueProfile singular_value_profile(const KsSystem& sys,
                                                   Complex omega,
                                                   double eta = 0.0) {
  const CMat v = sys.coulomb.cast<Complex>();
  SingularValueProfile prof;
  prof.wp = Eigen::JacobiSVD<CMat>(wp_dense(sys, omega, eta)).singularValues();
  prof.vchi0 =
      Eigen::JacobiSVD<CMat>(v * chi0_dense(sys, omega, eta)).singularValues();
  prof.vchi =
      Eigen::JacobiSVD<CMat>(v * chi_dense(sys, omega, eta)).singularValues();
  for (Vec* p : {&prof.wp, &prof.vchi0, &prof.vchi})
    if (p->size() > 0 && (*p)(0) > 0) *p /= (*p)(0);
  return prof;
}

/// Spectral-norm bounds on the W_p perturbation each rank-k scheme can
/// introduce at one frequency:
///   b1 = sigma_{k+1}(v chi v)
///   b2 = sigma_{k+1}(v chi)    |v|
///   b3 = 2 sigma_{k+1}(v chi0) |eps^{-1}|^2 |v|
/// b3 holds only while sigma_{k+1}(v chi0) |eps^{-1}| <= 1/2; the flag
/// records that condition instead of throwing.
struct WpPerturbationBounds {
  double b1 = 0.0;
  double b2 = 0.0;
  double b3 = 0.0;
  bool b3_valid = false;
};

inline WpPerturbationBounds wp_perturbation_bounds(const KsSystem& sys,
                                                   Complex wp_frequency,
                                                   Index k) {
  const Index n = sys.n_grid;
  const CMat v = sys.coulomb.cast<Complex>();
  const CMat chi0 = chi0_dense(sys, wp_frequency);
  const CMat eps_inv = epsilon_dense(sys, wp_frequency)
                           .partialPivLu()
                           .solve(CMat::Identity(n, n));

  auto tail_sv = [&](const CMat& a) {
    if (k >= n) return 0.0;
    return Eigen::JacobiSVD<CMat>(a).singularValues()(k);
  };

  const double v_norm = detail::spectral_norm(v);
  const double eps_inv_norm = detail::spectral_norm(eps_inv);
  const double tail_vchi0 = tail_sv(v * chi0);

  WpPerturbationBounds b;
  b.b1 = tail_sv(wp_dense(sys, wp_frequency));
  b.b2 = tail_sv(v * chi_dense(sys, wp_frequency)) * v_norm;
  b.b3 = 2.0 * tail_vchi0 * eps_inv_norm * eps_inv_norm * v_norm;
  b.b3_valid = tail_vchi0 * eps_inv_norm <= 0.5;
  return b;
}

/// Bounds on the integrand-sample perturbation: the Hadamard product
/// obeys |A (.) B| <= |A| |B|, so each W_p bound is scaled by the
/// spectral norm of G0 at the frequency where the sample is taken.
struct ErrorBounds {
  double e1 = 0.0;
  double e2 = 0.0;
  double e3 = 0.0;
  bool e3_valid = false;
};

inline ErrorBounds error_bounds(const KsSystem& sys, Complex wp_frequency,
                                Complex g0_frequency, Index k) {
  const WpPerturbationBounds wb = wp_perturbation_bounds(sys, wp_frequency, k);
  const double g0_norm = detail::spectral_norm(g0_dense(sys, g0_frequency));
  ErrorBounds b;
  b.e1 = wb.b1 * g0_norm;
  b.e2 = wb.b2 * g0_norm;
  b.e3 = wb.b3 * g0_norm;
  b.e3_valid = wb.b3_valid;
  return b;
}

}  // namespace gwcd

#endif  // GWCD_LOWRANK_HPP
