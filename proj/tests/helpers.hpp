#ifndef GWCD_TESTS_HELPERS_HPP
#define GWCD_TESTS_HELPERS_HPP

#include <random>

#include "gwcd/gwcd.hpp"

namespace gwcd::testing {

/// Default desk-scale model, built once per binary run.
inline const KsSystem& model64() {
  static const KsSystem sys = build_model_1d(ModelSpec{});
  return sys;
}

/// Smaller grid for the expensive oracles (full block eigenproblem,
/// brute-force scans).
inline const KsSystem& model16() {
  static const KsSystem sys = [] {
    ModelSpec spec;
    spec.n_grid = 16;
    spec.box_length = 8.0;
    spec.well_depths = {2.0};
    spec.well_centers = {3.0};
    spec.well_widths = {1.0};
    spec.n_v = 2;
    return build_model_1d(spec);
  }();
  return sys;
}

inline std::mt19937& rng() {
  static std::mt19937 gen(987654321u);
  return gen;
}

inline Complex random_offaxis_frequency(double re_span = 2.0,
                                        double im_min = 0.5,
                                        double im_max = 3.0) {
  std::uniform_real_distribution<double> re(-re_span, re_span);
  std::uniform_real_distribution<double> im(im_min, im_max);
  std::bernoulli_distribution flip(0.5);
  const double imag = flip(rng()) ? im(rng()) : -im(rng());
  return {re(rng()), imag};
}

inline CVec random_complex_vector(Index n) {
  std::normal_distribution<double> dist(0.0, 1.0);
  CVec v(n);
  for (Index i = 0; i < n; ++i) v(i) = Complex(dist(rng()), dist(rng()));
  return v;
}

inline CMat random_complex_matrix(Index rows, Index cols) {
  std::normal_distribution<double> dist(0.0, 1.0);
  CMat m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i)
      m(i, j) = Complex(dist(rng()), dist(rng()));
  return m;
}

/// Random dense system: orthonormal orbitals from a QR frame, sorted
/// eigenvalues with a guaranteed gap, and an exactly symmetric PSD
/// interaction. Exercises the "any system" properties away from the
/// structured fixtures.
inline KsSystem random_system(Index n_grid, Index n_v, unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> dist(0.0, 1.0);

  Mat raw(n_grid, n_grid);
  for (Index j = 0; j < n_grid; ++j)
    for (Index i = 0; i < n_grid; ++i) raw(i, j) = dist(gen);
  const Mat q = Eigen::HouseholderQR<Mat>(raw).householderQ();

  Vec eps(n_grid);
  for (Index j = 0; j < n_grid; ++j) eps(j) = dist(gen);
  std::sort(eps.data(), eps.data() + n_grid);
  for (Index j = n_v; j < n_grid; ++j) eps(j) += 0.8;  // open a gap

  Mat b(n_grid, n_grid);
  for (Index j = 0; j < n_grid; ++j)
    for (Index i = 0; i < n_grid; ++i) b(i, j) = dist(gen);
  Mat v = b * b.transpose() / double(n_grid);
  v = ((v + v.transpose()) * 0.5).eval();
  v.diagonal().array() += 0.1;

  KsSystem sys;
  sys.n_grid = n_grid;
  sys.n = n_grid;
  sys.n_v = n_v;
  sys.eigenvalues = eps;
  sys.orbitals = q;
  sys.coulomb = v;
  validate_ks_system(sys);
  return sys;
}

inline double rel_error(const CMat& got, const CMat& want) {
  const double scale = want.norm();
  return scale == 0.0 ? got.norm() : (got - want).norm() / scale;
}

/// Recursive adaptive Simpson for complex integrands.
inline Complex adaptive_simpson(const std::function<Complex(double)>& f,
                                double a, double b, Complex fa, Complex fm,
                                Complex fb, Complex whole, double tol,
                                int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const Complex flm = f(lm), frm = f(rm);
  const Complex left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const Complex right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const Complex sum = left + right;
  if (depth <= 0 || std::abs(sum - whole) <= 15.0 * tol)
    return sum + (sum - whole) / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline Complex integrate_segment(const std::function<Complex(double)>& f,
                                 double a, double b, double tol) {
  const double m = 0.5 * (a + b);
  const Complex fa = f(a), fm = f(m), fb = f(b);
  const Complex whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

/// Brute-force real-axis convolution at finite broadening: the full
/// causal integral (i/2pi) Int F(w') exp(i w' eta) dw' with every pole
/// eta-regularized. Independent of the contour and Casida machinery.
inline double sigma_c_real_axis_brute_force(const KsSystem& sys, Index i,
                                            double omega, double eta) {
  auto f = [&](double w_prime) -> Complex {
    const CMat g0 = g0_dense(sys, Complex(omega + w_prime, 0.0), eta);
    const CMat wp = wp_dense(sys, Complex(w_prime, 0.0), eta);
    const Vec psi = sys.orbital(i);
    const CVec psi_c = psi.cast<Complex>();
    const CVec applied = g0.cwiseProduct(wp) * psi_c;
    const Complex sample = (psi_c.array() * applied.array()).sum();
    return sample * std::exp(Complex(0.0, w_prime * eta));
  };

  // Segment boundaries bracket the eta-broadened peaks: G0 poles at
  // eps_j - omega and screened-interaction poles near +-Omega_s.
  const std::vector<double> cuts{-1e4, -3.0, -2.0, -1.2, -0.8, -0.3, 0.0,
                                 0.3,  0.8,  1.2,  2.0,  3.0,  1e4};
  Complex total(0.0, 0.0);
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s)
    total += integrate_segment(f, cuts[s], cuts[s + 1], 1e-9);
  return (Complex(0.0, 1.0) / (2.0 * M_PI) * total).real();
}

}  // namespace gwcd::testing

#endif  // GWCD_TESTS_HELPERS_HPP
