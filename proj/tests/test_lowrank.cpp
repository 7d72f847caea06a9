#include <catch2/catch.hpp>

#include "helpers.hpp"

using namespace gwcd;
using gwcd::testing::model64;
using gwcd::testing::rel_error;

namespace {

double spectral_norm(const CMat& a) {
  return Eigen::JacobiSVD<CMat>(a).singularValues()(0);
}

KsSystem identity_coulomb_fixture() {
  KsSystem sys = two_state_fixture();
  sys.coulomb = Mat::Identity(2, 2);
  return sys;
}

}  // namespace

TEST_CASE("rank-1 SVD of the rank-1 screened interaction is exact",
          "[lowrank]") {
  const KsSystem s2 = two_state_fixture();
  const LowRankFactor f = svd_wp(s2, {0.0, 0.0}, 1);
  REQUIRE(f.S(0, 0).real() == Approx(0.25).margin(1e-13));
  REQUIRE(f.S(0, 0).imag() == Approx(0.0).margin(1e-13));
  REQUIRE((f.reconstruct() - wp_dense(s2, {0.0, 0.0})).norm() <= 1e-14);
}

TEST_CASE("full-rank factors reproduce the dense operator", "[lowrank]") {
  const KsSystem& sys = model64();
  const Complex w(0.1, 0.9);
  const CMat dense = wp_dense(sys, w);
  for (auto maker : {svd_wp, svd_vchi, smw_vchi0, fourier_trunc}) {
    const LowRankFactor f = maker(sys, w, sys.n_grid, 0.0);
    REQUIRE(rel_error(f.reconstruct(), dense) <= 1e-10);
  }
}

TEST_CASE("truncated SVD factors are orthonormal with ordered values",
          "[lowrank]") {
  const KsSystem& sys = model64();
  const LowRankFactor f = svd_wp(sys, {0.0, 1.2}, 10);
  const CMat gram_u = f.U.adjoint() * f.U;
  const CMat gram_v = f.V.adjoint() * f.V;
  REQUIRE((gram_u - CMat::Identity(10, 10)).cwiseAbs().maxCoeff() <= 1e-12);
  REQUIRE((gram_v - CMat::Identity(10, 10)).cwiseAbs().maxCoeff() <= 1e-12);
  for (Index i = 0; i < 10; ++i) {
    REQUIRE(f.S(i, i).imag() == 0.0);
    REQUIRE(f.S(i, i).real() >= 0.0);
    if (i) REQUIRE(f.S(i, i).real() <= f.S(i - 1, i - 1).real());
  }
}

TEST_CASE("Eckart-Young: the truncation error equals the next singular value",
          "[lowrank]") {
  const KsSystem& sys = model64();
  const Complex w(0.0, 0.0);
  const CMat dense = wp_dense(sys, w);
  const Vec sv = Eigen::JacobiSVD<CMat>(dense).singularValues();
  for (Index k : {Index(4), Index(16), Index(40)}) {
    const LowRankFactor f = svd_wp(sys, w, k);
    const double err = spectral_norm(dense - f.reconstruct());
    REQUIRE(err == Approx(sv(k)).margin(1e-10 * sv(0)));
  }
}

TEST_CASE("svd of v chi with identity coupling degenerates to svd of chi",
          "[lowrank]") {
  const KsSystem sys = identity_coulomb_fixture();
  const Complex w(0.0, 0.6);
  const LowRankFactor f = svd_vchi(sys, w, 2);
  REQUIRE(rel_error(f.reconstruct(), chi_dense(sys, w)) <= 1e-12);
  REQUIRE(rel_error(f.reconstruct(), wp_dense(sys, w)) <= 1e-12);
}

TEST_CASE("rank-1 svd of v chi is exact on the rank-1 fixture", "[lowrank]") {
  const KsSystem s2 = two_state_fixture();
  const LowRankFactor f = svd_vchi(s2, {0.0, 0.0}, 1);
  REQUIRE((f.reconstruct() - wp_dense(s2, {0.0, 0.0})).norm() <= 1e-13);
}

TEST_CASE("svd of v chi obeys its truncation bound at every rank",
          "[lowrank]") {
  const KsSystem& sys = model64();
  const Complex w(0.0, 0.8);
  const CMat dense = wp_dense(sys, w);
  const CMat vchi = sys.coulomb.cast<Complex>() * chi_dense(sys, w);
  const Vec sv = Eigen::JacobiSVD<CMat>(vchi).singularValues();
  const double v_norm = spectral_norm(sys.coulomb.cast<Complex>());
  for (Index k = 1; k < sys.n_grid; k += 7) {
    const LowRankFactor f = svd_vchi(sys, w, k);
    const double err = spectral_norm(dense - f.reconstruct());
    REQUIRE(err <= sv(k) * v_norm * (1.0 + 1e-10) + 1e-14);
  }
}

TEST_CASE("Woodbury conversion of a truncated v chi0 factorization",
          "[lowrank]") {
  const KsSystem s2 = two_state_fixture();
  const LowRankFactor f = smw_vchi0(s2, {0.0, 0.0}, 1);
  REQUIRE((f.reconstruct() - wp_dense(s2, {0.0, 0.0})).norm() <= 1e-13);
}

TEST_CASE("reciprocal-space truncation keeps the selected mode only",
          "[lowrank]") {
  // Flat Coulomb spectrum: every diagonal entry of F* v F equals 1, so
  // the tie-break keeps the DC mode. For this fixture the DC mode does
  // not couple to chi0 at all, and the approximation collapses to zero
  // while W_p = chi has spectral norm 4/3 |rho|^2 = 2/3.
  const KsSystem sys = identity_coulomb_fixture();
  const LowRankFactor f = fourier_trunc(sys, {0.0, 0.0}, 1);
  const CMat dense = wp_dense(sys, {0.0, 0.0});
  REQUIRE(f.reconstruct().norm() <= 1e-13);
  REQUIRE(spectral_norm(dense - f.reconstruct()) ==
          Approx(2.0 / 3.0).margin(1e-12));
}

TEST_CASE("singular value profiles are normalized and nonincreasing",
          "[lowrank]") {
  const SingularValueProfile tiny =
      singular_value_profile(two_state_fixture(), {0.0, 0.0});
  REQUIRE(tiny.wp.size() == 2);
  REQUIRE(tiny.wp(0) == 1.0);

  for (const Complex w : {Complex(0.0, 0.0), Complex(0.0, 2.0)}) {
    const SingularValueProfile prof = singular_value_profile(model64(), w);
    for (const Vec* p : {&prof.wp, &prof.vchi0, &prof.vchi}) {
      REQUIRE((*p)(0) == 1.0);
      for (Index i = 1; i < p->size(); ++i)
        REQUIRE((*p)(i) <= (*p)(i - 1) + 1e-14);
    }
  }
}

TEST_CASE("full-rank bounds vanish", "[lowrank]") {
  const KsSystem& sys = model64();
  const ErrorBounds b =
      error_bounds(sys, {0.0, 1.0}, {0.3, 1.0}, sys.n_grid);
  REQUIRE(b.e1 == 0.0);
  REQUIRE(b.e2 == 0.0);
  REQUIRE(b.e3 == 0.0);
  REQUIRE(b.e3_valid);
}

TEST_CASE("first bound never exceeds the second", "[lowrank]") {
  const KsSystem& sys = model64();
  const Complex wp_freq(0.0, 0.9);
  const Complex g0_freq(-0.6, 0.9);
  for (Index k = 1; k <= sys.n_grid; k += 3) {
    const ErrorBounds b = error_bounds(sys, wp_freq, g0_freq, k);
    REQUIRE(b.e1 <= b.e2 * (1.0 + 1e-12) + 1e-15);
  }
}

TEST_CASE("measured integrand perturbation stays within its bound",
          "[lowrank]") {
  const KsSystem& sys = model64();
  const double omega = 0.5 * (sys.homo() + sys.lumo());
  const Vec psi = sys.orbital(sys.n_v);
  const CVec psi_c = psi.cast<Complex>();

  for (const Complex wp_freq :
       {Complex(0.0, 0.7), Complex(0.1, 1.6), Complex(-0.2, 0.9)}) {
    const Complex g0_freq = Complex(omega, 0.0) + wp_freq;
    const CMat g0 = g0_dense(sys, g0_freq);
    const CMat dense = wp_dense(sys, wp_freq);
    const CVec ref_v = g0.cwiseProduct(dense) * psi_c;
    const Complex ref = (psi_c.array() * ref_v.array()).sum();

    for (Index k : {Index(2), Index(6), Index(12), Index(24), Index(48)}) {
      const ErrorBounds b = error_bounds(sys, wp_freq, g0_freq, k);

      auto measured = [&](const LowRankFactor& f) {
        const CVec smp_v = g0.cwiseProduct(f.reconstruct()) * psi_c;
        const Complex smp = (psi_c.array() * smp_v.array()).sum();
        return std::abs(smp - ref);
      };

      REQUIRE(measured(svd_wp(sys, wp_freq, k)) <= b.e1 * (1 + 1e-10) + 1e-14);
      REQUIRE(measured(svd_vchi(sys, wp_freq, k)) <=
              b.e2 * (1 + 1e-10) + 1e-14);
      if (b.e3_valid)
        REQUIRE(measured(smw_vchi0(sys, wp_freq, k)) <=
                b.e3 * (1 + 1e-10) + 1e-14);
    }
  }
}

TEST_CASE("Hadamard product norm inequality", "[lowrank]") {
  for (int t = 0; t < 20; ++t) {
    const CMat a = testing::random_complex_matrix(12, 12);
    const CMat b = testing::random_complex_matrix(12, 12);
    REQUIRE(spectral_norm(a.cwiseProduct(b)) <=
            spectral_norm(a) * spectral_norm(b) * (1.0 + 1e-12));
  }
}

TEST_CASE("static-basis reuse recomputes only the middle factor",
          "[lowrank]") {
  const KsSystem& sys = model64();
  const Index k = 12;
  const LowRankWpProvider fresh(sys, Scheme::SvdWp, k, false);
  const LowRankWpProvider reused(sys, Scheme::SvdWp, k, true);

  // At the anchoring frequency both agree with the plain factorization.
  const auto t_fresh = fresh.evaluate({0.0, 0.0});
  const auto t_reused = reused.evaluate({0.0, 0.0});
  const CMat rec_fresh = t_fresh.U * t_fresh.S * t_fresh.V.adjoint();
  const CMat rec_reused = t_reused.U * t_reused.S * t_reused.V.adjoint();
  REQUIRE(rel_error(rec_reused, rec_fresh) <= 1e-10);

  // A full-rank reused basis is exact anywhere.
  const LowRankWpProvider full(sys, Scheme::SvdWp, sys.n_grid, true);
  const auto t_full = full.evaluate({0.0, 2.0});
  const CMat rec_full = t_full.U * t_full.S * t_full.V.adjoint();
  REQUIRE(rel_error(rec_full, wp_dense(sys, {0.0, 2.0})) <= 1e-10);
}

TEST_CASE("rank bounds are validated", "[lowrank]") {
  const KsSystem& sys = model64();
  REQUIRE_THROWS_AS(svd_wp(sys, {0.0, 1.0}, 0), DimensionError);
  REQUIRE_THROWS_AS(svd_wp(sys, {0.0, 1.0}, sys.n_grid + 1), DimensionError);
}
