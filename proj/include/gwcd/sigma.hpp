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

#ifndef GWCD_SIGMA_HPP
#define GWCD_SIGMA_HPP

#include "gwcd/contour.hpp"

namespace gwcd {

/// Exchange part of the self energy for state i:
/// -sum_{j occupied} rho_ij^T v rho_ij. Frequency independent, and
/// nonpositive whenever the Coulomb matrix is PSD.
inline double sigma_x_element(const KsSystem& sys, Index i) {
  detail::check_state_index(sys, i, "sigma_x_element");
  double acc = 0.0;
  for (Index j = 1; j <= sys.n_v; ++j) {
    const Vec rho = pair_density(sys, i, j);
    acc -= rho.dot(sys.coulomb * rho);
  }
  return acc;
}

/// Closed-form correlation matrix element obtained by convolving the
/// pole expansions of G0 and W_p analytically:
///
///   sum_s [ sum_{j occ}   (rho_ij^T b_s)^2 / (omega - eps_j + Omega_s)
///         + sum_{j unocc} (rho_ij^T b_s)^2 / (omega - eps_j - Omega_s) ]
///
/// The signs follow from closing the frequency integral in the upper
/// half plane: occupied G0 poles and the negative-frequency W_p poles
/// are the enclosed ones. Serves as the independent sum-over-states
/// oracle for the contour evaluator; certified in the test suite against
/// brute-force real-axis integration at finite broadening.
inline double sigma_c_exact_sos(const KsSystem& sys, Index i, double omega,
                                const CasidaSpectrum& spectrum) {
  detail::check_state_index(sys, i, "sigma_c_exact_sos");
  for (Index j = 1; j <= sys.n; ++j) {
    const bool occ = j <= sys.n_v;
    for (Index s = 0; s < spectrum.omegas.size(); ++s) {
      const double pole =
          sys.eps(j) + (occ ? -spectrum.omegas(s) : spectrum.omegas(s));
      if (std::abs(omega - pole) < 1e-10) {
        std::ostringstream os;
        os << "sigma_c_exact_sos: omega within 1e-10 of the pole "
              "combination eps_" << j << (occ ? " - " : " + ") << "Omega_"
           << s + 1;
        throw PoleError(os.str());
      }
    }
  }

  double acc = 0.0;
  for (Index j = 1; j <= sys.n; ++j) {
    const Vec rho = pair_density(sys, i, j);
    const double sgn = j <= sys.n_v ? 1.0 : -1.0;
    for (Index s = 0; s < spectrum.omegas.size(); ++s) {
      const double coupling = rho.dot(spectrum.amplitudes.col(s));
      acc += coupling * coupling /
             (omega - sys.eps(j) + sgn * spectrum.omegas(s));
    }
  }
  return acc;
}

inline double sigma_c_exact_sos(const KsSystem& sys, Index i, double omega) {
  return sigma_c_exact_sos(sys, i, omega, casida_full(sys));
}

enum class ShiftPolicy { Auto, Fixed };

struct SigmaConfig {
  Scheme scheme = Scheme::Dense;
  Index rank = 0;               // ignored for dense
  Index quad_points = 64;
  ShiftPolicy shift_policy = ShiftPolicy::Auto;
  double shift = 0.0;           // used when Fixed
  bool reuse_static_basis = false;
  bool compute_bounds = true;   // low-rank schemes only
  bool compute_oracle = false;  // sum-over-states value alongside
  int threads = 1;
};

struct SigmaReport {
  Index state = 0;
  double omega = 0.0;
  double sigma_x = 0.0;  // Hartree
  double sigma_c = 0.0;  // Hartree
  Scheme scheme = Scheme::Dense;
  Index rank = 0;
  Index quad_points = 0;
  double shift = 0.0;
  Index residue_count = 0;
  std::optional<ErrorBounds> bounds;   // quadrature-integrated
  std::optional<double> oracle_value;  // sum-over-states Sigma_C

  /// |sigma_c - oracle|; reported whenever the oracle was computed.
  std::optional<double> oracle_gap() const {
    if (!oracle_value) return std::nullopt;
    return std::abs(sigma_c - *oracle_value);
  }
};

namespace detail {

inline std::unique_ptr<WpProvider> make_provider(const KsSystem& sys,
                                                 const SigmaConfig& cfg) {
  if (cfg.scheme == Scheme::Dense)
    return std::make_unique<DenseWpProvider>(sys);
  return std::make_unique<LowRankWpProvider>(sys, cfg.scheme, cfg.rank,
                                             cfg.reuse_static_basis);
}

/// Quadrature-weighted integral of the per-node sample bounds plus the
/// perturbation each residue correction can pick up; sound for the full
/// contour value whenever the per-node bounds are.
inline ErrorBounds integrated_bounds(const KsSystem& sys, Index i,
                                     double omega,
                                     const IntegrationPath& path, Index k) {
  ErrorBounds total;
  total.e3_valid = true;
  for (Index q = 0; q < path.rule.m; ++q) {
    const double xi = path.rule.nodes(q);
    const Complex omega_prime(path.shift, half_line_zeta(xi));
    const ErrorBounds node = error_bounds(
        sys, omega_prime, Complex(omega, 0.0) + omega_prime, k);
    const double scale =
        path.rule.weights(q) * half_line_jacobian(xi) / M_PI;
    total.e1 += scale * node.e1;
    total.e2 += scale * node.e2;
    total.e3 += scale * node.e3;
    total.e3_valid = total.e3_valid && node.e3_valid;
  }
  for (const auto& r : path.residues) {
    const Vec rho = pair_density(sys, i, r.state);
    const double rho_sq = rho.squaredNorm();
    const WpPerturbationBounds wb =
        wp_perturbation_bounds(sys, Complex(r.location, 0.0), k);
    total.e1 += wb.b1 * rho_sq;
    total.e2 += wb.b2 * rho_sq;
    total.e3 += wb.b3 * rho_sq;
    total.e3_valid = total.e3_valid && wb.b3_valid;
  }
  return total;
}

}  // namespace detail

/// Correlation matrix element for one state at one frequency:
/// classifies the frequency, picks or validates the vertical path,
/// builds the W_p representation, and runs the contour quadrature with
/// residue corrections.
inline SigmaReport sigma_c_element(const KsSystem& sys, Index i, double omega,
                                   const SigmaConfig& cfg) {
  detail::check_state_index(sys, i, "sigma_c_element");
  if (cfg.scheme != Scheme::Dense)
    detail::check_rank(sys, cfg.rank, "sigma_c_element");

  const CasidaSpectrum spectrum = casida_full(sys);
  const double dw = spectrum.omegas(0);
  const ResidueFreeReport rf = residue_free(sys, omega, dw);

  IntegrationPath path;
  if (cfg.shift_policy == ShiftPolicy::Fixed) {
    path = make_integration_path(sys, omega, cfg.shift, cfg.quad_points,
                                 &spectrum);
  } else {
    // Residue-free frequencies get the midpoint of the admissible
    // stripe; otherwise fall back to the imaginary axis, nudging by a
    // gap fraction if a pole sits exactly on it.
    std::vector<double> candidates;
    if (rf.is_residue_free) candidates.push_back(*rf.suggested_shift);
    const double g = sys.gap();
    for (double c : {0.0, g / 64.0, -g / 64.0, g / 8.0, -g / 8.0})
      candidates.push_back(c);
    bool made = false;
    for (double c : candidates) {
      try {
        path = make_integration_path(sys, omega, c, cfg.quad_points,
                                     &spectrum);
        made = true;
        break;
      } catch (const PoleError&) {
      }
    }
    if (!made)
      throw PoleError("sigma_c_element: no admissible vertical path found "
                      "(shift policy exhausted)");
  }

  const auto provider = detail::make_provider(sys, cfg);

  SigmaReport rep;
  rep.state = i;
  rep.omega = omega;
  rep.scheme = cfg.scheme;
  rep.rank = cfg.scheme == Scheme::Dense ? sys.n_grid : cfg.rank;
  rep.quad_points = cfg.quad_points;
  rep.shift = path.shift;
  rep.residue_count = static_cast<Index>(path.residues.size());
  rep.sigma_x = sigma_x_element(sys, i);
  rep.sigma_c = sigma_c_contour(sys, i, omega, path, *provider, cfg.threads);
  if (cfg.scheme != Scheme::Dense && cfg.compute_bounds)
    rep.bounds = detail::integrated_bounds(sys, i, omega, path, cfg.rank);
  if (cfg.compute_oracle)
    rep.oracle_value = sigma_c_exact_sos(sys, i, omega, spectrum);
  return rep;
}

struct QpResult {
  double energy = 0.0;  // Hartree
  bool converged = false;
  int iterations = 0;
};

/// Quasiparticle energy from the scalar fixed-point equation
/// omega = eps_i + Sigma(omega) - <Vxc>, solved by secant iteration
/// started at eps_i and eps_i + (Sigma(eps_i) - <Vxc>).
inline QpResult solve_qp(const KsSystem& sys, Index i, const SigmaConfig& cfg,
                         double tol = 1e-6, int max_iter = 50) {
  detail::check_state_index(sys, i, "solve_qp");
  if (!sys.vxc_element)
    throw InvariantError("solve_qp: system carries no Vxc matrix elements");
  const double vxc = (*sys.vxc_element)(i - 1);
  const double sigma_x = sigma_x_element(sys, i);

  auto residual = [&](double w) {
    const SigmaReport rep = sigma_c_element(sys, i, w, cfg);
    return sys.eps(i) + sigma_x + rep.sigma_c - vxc - w;
  };

  QpResult out;
  double w_prev = sys.eps(i);
  double f_prev = residual(w_prev);
  double w_cur = w_prev + f_prev;  // eps_i + (Sigma(eps_i) - vxc)
  out.energy = w_cur;
  out.iterations = 1;
  if (std::abs(w_cur - w_prev) <= tol) {
    out.converged = true;
    return out;
  }

  double f_cur = residual(w_cur);
  for (int t = 1; t < max_iter; ++t) {
    const double denom = f_cur - f_prev;
    if (denom == 0.0) break;
    const double w_next = w_cur - f_cur * (w_cur - w_prev) / denom;
    ++out.iterations;
    out.energy = w_next;
    if (std::abs(w_next - w_cur) <= tol) {
      out.converged = true;
      return out;
    }
    w_prev = w_cur;
    f_prev = f_cur;
    w_cur = w_next;
    f_cur = residual(w_cur);
  }
  return out;  // not converged; last iterate with flag
}

}  // namespace gwcd

#endif  // GWCD_SIGMA_HPP
