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

#ifndef GWCD_CONTOUR_HPP
#define GWCD_CONTOUR_HPP

#include <memory>

#include "gwcd/greens.hpp"
#include "gwcd/lowrank.hpp"
#include "gwcd/quadrature.hpp"
#include "gwcd/spectra.hpp"

// Correlation self-energy matrix elements on a deformed contour: the
// real-axis convolution integral is traded for a vertical path
// Re(w') = shift plus residue corrections for whichever G0 poles sit on
// the wrong side of that path. Conjugation symmetry across the real
// axis folds the two half lines into -(1/pi) Re of the upper one.

namespace gwcd {

/// Supplies W_p(w') to the integrator, either densely or as a rank-k
/// factorization. Implementations are immutable after construction and
/// safe to call concurrently.
class WpProvider {
 public:
  struct Term {
    bool low_rank = false;
    CMat dense;     // valid when !low_rank
    CMat U, S, V;   // valid when low_rank; operator = U S V^*
  };

  virtual ~WpProvider() = default;
  virtual Term evaluate(Complex omega_prime) const = 0;
  virtual Scheme scheme() const = 0;
  virtual Index rank() const = 0;
};

class DenseWpProvider final : public WpProvider {
 public:
  explicit DenseWpProvider(const KsSystem& sys) : sys_(sys) {}
  Term evaluate(Complex omega_prime) const override {
    Term t;
    t.dense = wp_dense(sys_, omega_prime);
    return t;
  }
  Scheme scheme() const override { return Scheme::Dense; }
  Index rank() const override { return sys_.n_grid; }

 private:
  const KsSystem& sys_;
};

/// W_p == 0; the correlation part vanishes identically. Test hook.
class ZeroWpProvider final : public WpProvider {
 public:
  explicit ZeroWpProvider(Index n) : n_(n) {}
  Term evaluate(Complex) const override {
    Term t;
    t.dense = CMat::Zero(n_, n_);
    return t;
  }
  Scheme scheme() const override { return Scheme::Dense; }
  Index rank() const override { return 0; }

 private:
  Index n_;
};

/// Rank-k provider for the four factorization schemes. With
/// `reuse_static_basis` the left/right subspaces are fixed once from the
/// omega = 0 factorization and only the k x k middle factor is
/// recomputed per frequency.
class LowRankWpProvider final : public WpProvider {
 public:
  LowRankWpProvider(const KsSystem& sys, Scheme scheme, Index k,
                    bool reuse_static_basis = false)
      : sys_(sys), scheme_(scheme), rank_(k), reuse_(reuse_static_basis) {
    if (scheme == Scheme::Dense)
      throw DimensionError("LowRankWpProvider: use DenseWpProvider");
    if (reuse_ && scheme_ != Scheme::FourierTrunc) {
      const CMat base = basis_operator(Complex(0.0, 0.0));
      auto svd = detail::thin_svd(base);
      left_ = svd.matrixU().leftCols(rank_);
      right_ = svd.matrixV().leftCols(rank_);
      if (scheme_ != Scheme::SvdWp)
        v_right_ = sys_.coulomb.cast<Complex>() * right_;
    }
  }

  Term evaluate(Complex omega_prime) const override {
    Term t;
    t.low_rank = true;
    if (!reuse_ || scheme_ == Scheme::FourierTrunc) {
      LowRankFactor f = factor(omega_prime);
      t.U = std::move(f.U);
      t.S = std::move(f.S);
      t.V = std::move(f.V);
      return t;
    }
    const CMat mid = left_.adjoint() * basis_operator(omega_prime) * right_;
    switch (scheme_) {
      case Scheme::SvdWp:
        t.U = left_;
        t.S = mid;
        t.V = right_;
        break;
      case Scheme::SvdVchi:
        t.U = left_;
        t.S = mid;
        t.V = v_right_;
        break;
      case Scheme::SmwVchi0: {
        // (mid^{-1} - V^* U)^{-1} = (I - mid V^* U)^{-1} mid, which
        // avoids inverting the projected middle factor.
        CMat woodbury = -mid * (right_.adjoint() * left_);
        woodbury.diagonal().array() += 1.0;
        const CMat solved = woodbury.partialPivLu().solve(mid);
        if ((woodbury * solved - mid).norm() >
            1e-6 * std::max(mid.norm(), 1.0))
          throw SingularError(
              "LowRankWpProvider: reused-basis middle factor singular");
        t.U = left_;
        t.S = solved;
        t.V = v_right_;
        break;
      }
      default:
        throw SingularError("LowRankWpProvider: unreachable scheme");
    }
    return t;
  }

  Scheme scheme() const override { return scheme_; }
  Index rank() const override { return rank_; }

 private:
  CMat basis_operator(Complex omega_prime) const {
    switch (scheme_) {
      case Scheme::SvdWp:
        return wp_dense(sys_, omega_prime);
      case Scheme::SvdVchi:
        return sys_.coulomb.cast<Complex>() * chi_dense(sys_, omega_prime);
      case Scheme::SmwVchi0:
        return sys_.coulomb.cast<Complex>() * chi0_dense(sys_, omega_prime);
      default:
        throw SingularError("LowRankWpProvider: unreachable scheme");
    }
  }

  LowRankFactor factor(Complex omega_prime) const {
    switch (scheme_) {
      case Scheme::SvdWp:
        return svd_wp(sys_, omega_prime, rank_);
      case Scheme::SvdVchi:
        return svd_vchi(sys_, omega_prime, rank_);
      case Scheme::SmwVchi0:
        return smw_vchi0(sys_, omega_prime, rank_);
      case Scheme::FourierTrunc:
        return fourier_trunc(sys_, omega_prime, rank_);
      default:
        throw SingularError("LowRankWpProvider: unreachable scheme");
    }
  }

  const KsSystem& sys_;
  Scheme scheme_;
  Index rank_;
  bool reuse_;
  CMat left_, right_, v_right_;
};

/// Vertical integration path Re(w') = shift with its quadrature rule and
/// the residue corrections it owes.
struct IntegrationPath {
  double shift = 0.0;
  QuadratureRule rule;
  std::vector<PathResidue> residues;
};

/// Validates the path against both pole families and collects the
/// enclosed G0 poles. `wp_poles` also enables the residue-overlap check
/// (a residue point too close to a screened-interaction pole cannot be
/// evaluated).
inline IntegrationPath make_integration_path(
    const KsSystem& sys, double omega, double shift, Index m,
    const CasidaSpectrum* wp_poles = nullptr) {
  IntegrationPath path;
  path.shift = shift;
  path.rule = lgr_rule(m);
  path.residues = enclosed_g0_poles(sys, omega, shift, wp_poles);
  if (wp_poles) {
    for (const auto& r : path.residues)
      for (Index s = 0; s < wp_poles->omegas.size(); ++s)
        if (std::abs(r.location - wp_poles->omegas(s)) < 1e-8 ||
            std::abs(r.location + wp_poles->omegas(s)) < 1e-8)
          throw PoleError(
              "make_integration_path: residue point overlaps a pole of the "
              "screened interaction");
  }
  return path;
}

namespace detail {

inline Complex term_quadratic_form(const WpProvider::Term& term,
                                   const Vec& rho) {
  const CVec rho_c = rho.cast<Complex>();
  if (!term.low_rank) {
    const CVec applied = term.dense * rho_c;
    return (rho_c.array() * applied.array()).sum();
  }
  const CVec left = term.U.transpose() * rho_c;
  const CVec right = term.S * (term.V.adjoint() * rho_c);
  return (left.array() * right.array()).sum();
}

}  // namespace detail

/// One sample of the convolution integrand,
/// <psi_i| G0(omega + w') (.) W_p(w') |psi_i>. Dense terms go through
/// the elementwise product directly; factored terms use the trace
/// identity a^T (A (.) B) a = trace[(Diag(a) V)^* A (Diag(a) U) S] so
/// only a k-column block of G0 applications is needed.
inline Complex integrand_sample(const KsSystem& sys, Index i, double omega,
                                Complex omega_prime,
                                const WpProvider& provider) {
  detail::check_state_index(sys, i, "integrand_sample");
  const Vec psi = sys.orbitals.col(i - 1);
  const Complex z = Complex(omega, 0.0) + omega_prime;
  const WpProvider::Term term = provider.evaluate(omega_prime);
  if (!term.low_rank) {
    const CMat g0 = g0_dense(sys, z);
    const CVec psi_c = psi.cast<Complex>();
    const CVec applied = g0.cwiseProduct(term.dense) * psi_c;
    return (psi_c.array() * applied.array()).sum();
  }
  const CMat u_psi = psi.asDiagonal() * term.U;
  const CMat v_psi = psi.asDiagonal() * term.V;
  const CMat g0_u = g0_apply(sys, z, 0.0, u_psi);
  const CMat small = v_psi.adjoint() * g0_u * term.S;
  return small.trace();
}

/// Sigma_C matrix element on a deformed contour:
///   -(1/pi) sum_q w_q Re F(shift + i zeta(xi_q)) (1-xi_q)^{-2}
/// plus the signed residue terms rho_ij^T W_p(eps_j - omega) rho_ij for
/// each enclosed G0 pole. Node evaluations may run concurrently; the
/// reduction is fixed-order, so the result does not depend on the
/// thread count.
inline double sigma_c_contour(const KsSystem& sys, Index i, double omega,
                              const IntegrationPath& path,
                              const WpProvider& provider, int threads = 1) {
  detail::check_state_index(sys, i, "sigma_c_contour");
  for (Index j = 0; j < sys.n; ++j)
    if (std::abs(sys.eigenvalues(j) - omega - path.shift) < 1e-8)
      throw PoleError("sigma_c_contour: path runs through a G0 pole");

  const Index m = path.rule.m;
  std::vector<Complex> samples(static_cast<std::size_t>(m));
  parallel_for_indexed(m, threads, [&](Index q) {
    const double xi = path.rule.nodes(q);
    const Complex omega_prime(path.shift, half_line_zeta(xi));
    samples[static_cast<std::size_t>(q)] =
        integrand_sample(sys, i, omega, omega_prime, provider);
  });

  double line = 0.0;
  for (Index q = 0; q < m; ++q)
    line += path.rule.weights(q) *
            samples[static_cast<std::size_t>(q)].real() *
            half_line_jacobian(path.rule.nodes(q));
  double result = -line / M_PI;

  for (const auto& r : path.residues) {
    const Vec rho = pair_density(sys, i, r.state);
    const WpProvider::Term term =
        provider.evaluate(Complex(r.location, 0.0));
    result += static_cast<double>(r.sign) *
              detail::term_quadratic_form(term, rho).real();
  }
  return result;
}

struct QuadratureSweepRow {
  double shift = 0.0;
  Index m = 0;
  double value = 0.0;      // Hartree
  double abs_error = 0.0;  // against the largest m in the sweep
};

/// Convergence table |I_m - I_{m_max}| for each shift and node count.
inline std::vector<QuadratureSweepRow> quadrature_error_sweep(
    const KsSystem& sys, Index i, double omega,
    const std::vector<double>& shifts, const std::vector<Index>& m_list,
    const WpProvider& provider, const CasidaSpectrum* wp_poles = nullptr,
    int threads = 1) {
  if (m_list.empty()) return {};
  const Index m_max = *std::max_element(m_list.begin(), m_list.end());
  std::vector<QuadratureSweepRow> rows;
  for (double shift : shifts) {
    const auto ref_path =
        make_integration_path(sys, omega, shift, m_max, wp_poles);
    const double ref =
        sigma_c_contour(sys, i, omega, ref_path, provider, threads);
    for (Index m : m_list) {
      const auto path = make_integration_path(sys, omega, shift, m, wp_poles);
      QuadratureSweepRow row;
      row.shift = shift;
      row.m = m;
      row.value = sigma_c_contour(sys, i, omega, path, provider, threads);
      row.abs_error = std::abs(row.value - ref);
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace gwcd

#endif  // GWCD_CONTOUR_HPP
