#include <doctest.h>

#include "nle/radial.hpp"
#include "nle/symbol.hpp"

#include <cmath>
#include <complex>

using namespace nle;

namespace {

// Brute-force oracle for the symmetric radial pair
//   integral_0^inf 2 (cos(kappa r) - 1) r^{-1-sigma} dr,
// which equals the unit-kernel symbol / (2 - sigma) for every sigma in
// (0, 2): the odd compensator terms cancel between +r and -r, whatever the
// compensator kind.  Taylor series below 1e-3, graded then uniform panels to
// R = 4000, closed tail by two integrations by parts (error ~ R^{-sigma-2.5}).
Real sym_pair_oracle(Real sigma, Real kappa) {
  const Real d = 1e-3, R = 4000.0;
  const Real k2 = kappa * kappa;
  Real inner = -k2 * std::pow(d, 2.0 - sigma) / (2.0 - sigma) +
               k2 * k2 * std::pow(d, 4.0 - sigma) / (12.0 * (4.0 - sigma)) -
               k2 * k2 * k2 * std::pow(d, 6.0 - sigma) / (360.0 * (6.0 - sigma));
  auto f = [&](Real r) {
    return 2.0 * (std::cos(kappa * r) - 1.0) * std::pow(r, -1.0 - sigma);
  };
  Real mid = 0.0;
  Real a = d;
  while (a < 1.0) {
    Real b = std::min(2.0 * a, 1.0);
    mid += integrate_panels(f, a, b, 4, 16);
    a = b;
  }
  mid += integrate_panels(f, 1.0, R, int((R - 1.0) / 0.25) + 1, 16);
  const Real nu = 1.0 + sigma;
  Real t_cos = -std::sin(kappa * R) * std::pow(R, -nu) / kappa +
               nu * std::cos(kappa * R) * std::pow(R, -nu - 1.0) / k2;
  Real tail = 2.0 * t_cos - 2.0 * std::pow(R, -sigma) / sigma;
  return inner + mid + tail;
}

// One-sided oracle integral_0^inf (e^{i kappa r} - 1) r^{-1-sigma} dr for
// sigma < 1 (no compensator), same region scheme with a parts recursion
// T(nu) = -e^{i kappa R} R^{-nu} / (i kappa) + (nu / (i kappa)) T(nu+1).
Complex one_sided_oracle(Real sigma, Real kappa) {
  const Real d = 1e-3, R = 4000.0;
  const Complex ik(0.0, kappa);
  Complex inner = 0.0;
  Complex p = ik;
  Real fact = 1.0;
  for (int k = 1; k <= 10; ++k) {
    inner += p * std::pow(d, k - sigma) / (fact * (k - sigma));
    p *= ik;
    fact *= k + 1;
  }
  auto f = [&](Real r) {
    return (std::exp(Complex(0.0, kappa * r)) - 1.0) *
           std::pow(r, -1.0 - sigma);
  };
  Complex mid = 0.0;
  Real a = d;
  while (a < 1.0) {
    Real b = std::min(2.0 * a, 1.0);
    mid += integrate_panels(f, a, b, 4, 16);
    a = b;
  }
  mid += integrate_panels(f, 1.0, R, int((R - 1.0) / 0.25) + 1, 16);
  const Complex eR = std::exp(Complex(0.0, kappa * R));
  Complex T = 0.0;
  for (int depth = 2; depth >= 0; --depth) {
    Real nu = 1.0 + sigma + depth;
    T = -eR * std::pow(R, -nu) / ik + (nu / ik) * T;
  }
  Complex tail = T - std::pow(R, -sigma) / sigma;
  return inner + mid + tail;
}

// Radial pair integral of the truncated unit kernel, as an explicit series:
//   integral_0^1 2 (cos(kappa r) - 1) r^{-1-sigma} dr
//     = 2 sum_{j>=1} (-1)^j kappa^{2j} / ((2j)! (2j - sigma)).
Real truncated_pair_series(Real sigma, Real kappa) {
  Real acc = 0.0;
  Real fact = 2.0;   // (2j)!
  Real kpow = kappa * kappa;
  Real sign = -1.0;
  for (int j = 1; j <= 40; ++j) {
    if (j > 1) {
      fact *= (2.0 * j - 1.0) * (2.0 * j);
      kpow *= kappa * kappa;
    }
    acc += sign * kpow / (fact * (2.0 * j - sigma));
    sign = -sign;
  }
  return 2.0 * acc;
}

// Direct ray sum over the circle: no angular harmonics, no cusp moments.
Complex ray_sum_2d(const KernelSpec& k, const Point& xi, int rays) {
  QuadOptions o;
  Complex acc = 0.0;
  for (int t = 0; t < rays; ++t) {
    Real th = pi * t / rays;
    Point e{std::cos(th), std::sin(th)};
    Real kap = xi[0] * e[0] + xi[1] * e[1];
    if (std::abs(kap) < 1e-12) continue;
    auto ap = [&](Real r) {
      return k.amplitude({0, 0}, {e[0] * r, e[1] * r});
    };
    auto am = [&](Real r) {
      return k.amplitude({0, 0}, {-e[0] * r, -e[1] * r});
    };
    acc += kap > 0.0
               ? radial::full_pair(k.sigma, kap, ap, am, k.truncated, o)
               : radial::full_pair(k.sigma, -kap, am, ap, k.truncated, o);
  }
  return (2.0 - k.sigma) * acc * (pi / rays);
}

}  // namespace

TEST_CASE("unit kernel symbol against the brute radial oracle") {
  for (Real sigma : {0.6, 1.0, 1.5}) {
    KernelSpec k = make_unit_kernel(sigma, 1);
    for (Real xi : {2.0, 7.0}) {
      Real want = (2.0 - sigma) * sym_pair_oracle(sigma, xi);
      Complex got = symbol_eval(k, {xi, 0.0});
      CHECK(std::abs(got.imag()) < 1e-9 * std::abs(want));
      CHECK(got.real() == doctest::Approx(want).epsilon(1e-8));
    }
  }
}

TEST_CASE("sigma = 1 principal value: closed form -pi |xi|") {
  // 2 integral_0^inf (cos t - 1) t^{-2} dt = -pi, so the unit kernel at
  // sigma = 1 has m(xi) = -pi |xi| exactly.
  KernelSpec k = make_unit_kernel(1.0, 1);
  Complex m1 = symbol_eval(k, {1.0, 0.0});
  CHECK(m1.real() == doctest::Approx(-pi).epsilon(1e-9));
  CHECK(std::abs(m1.imag()) < 1e-10);
  Complex m3 = symbol_eval(k, {3.0, 0.0});
  CHECK(m3.real() == doctest::Approx(-3.0 * pi).epsilon(1e-9));
}

TEST_CASE("nonsymmetric kernel symbol and conjugate symmetry") {
  const Real sigma = 0.6;
  KernelSpec k = make_nonsym1d(sigma);
  Complex I = one_sided_oracle(sigma, 2.0);
  Complex want = (2.0 - sigma) * (1.5 * I + 0.5 * std::conj(I));
  Complex got = symbol_eval(k, {2.0, 0.0});
  CHECK(std::abs(got - want) < 1e-8 * std::abs(want));
  CHECK(std::abs(got.imag()) > 1e-3);   // genuinely complex

  Complex gotm = symbol_eval(k, {-2.0, 0.0});
  CHECK(std::abs(gotm - std::conj(got)) < 1e-12 * std::abs(got));
}

TEST_CASE("truncated kernel symbol against the series") {
  for (Real sigma : {0.8, 1.6}) {
    KernelSpec k = make_truncated(sigma);
    for (Real xi : {1.0, 4.0}) {
      Real want = (2.0 - sigma) * truncated_pair_series(sigma, xi);
      Complex got = symbol_eval(k, {xi, 0.0});
      CHECK(std::abs(got.imag()) < 1e-10 * std::abs(want));
      CHECK(got.real() == doctest::Approx(want).epsilon(1e-9));
    }
  }
}

TEST_CASE("calibrated fractional laplacian symbol is -|xi|^sigma") {
  for (Real sigma : {0.5, 1.0, 1.5, 1.9}) {
    KernelSpec k1 = make_fraclap(sigma, 1);
    CHECK(symbol_eval(k1, {1.0, 0.0}).real() ==
          doctest::Approx(-1.0).epsilon(1e-10));
    // homogeneity carries the calibration to other frequencies
    CHECK(symbol_eval(k1, {2.0, 0.0}).real() ==
          doctest::Approx(-std::pow(2.0, sigma)).epsilon(1e-7));
    KernelSpec k2 = make_fraclap(sigma, 2);
    CHECK(symbol_eval(k2, {3.0, 4.0}).real() ==
          doctest::Approx(-std::pow(5.0, sigma)).epsilon(1e-6));
    CHECK(std::abs(symbol_eval(k2, {1.0, 1.0}).imag()) < 1e-8);
  }
}

TEST_CASE("2d anisotropic symbol against a direct ray sum") {
  for (Real sigma : {0.7, 1.0, 1.2}) {
    KernelSpec k = make_aniso2d(sigma);
    for (Point xi : {Point{2.3, 1.1}, Point{0.0, 3.0}}) {
      Complex want = ray_sum_2d(k, xi, 2048);
      Complex got = symbol_eval(k, xi);
      CHECK(std::abs(got - want) < 1e-5 * std::abs(want));
      CHECK(got.real() < 0.0);
    }
  }
}

TEST_CASE("2d truncated kernel against the per-ray series") {
  const Real sigma = 1.3;
  KernelSpec k = make_unit_kernel(sigma, 2);
  k.truncated = true;
  k.amplitude = [](const Point&, const Point& y) {
    return norm(y) <= 1.0 ? 1.0 : 0.0;
  };
  k.name = "truncated2d";
  const Point xi{2.0, 1.0};
  const int rays = 1024;
  Real want = 0.0;
  for (int t = 0; t < rays; ++t) {
    Real th = pi * t / rays;
    Real kap = xi[0] * std::cos(th) + xi[1] * std::sin(th);
    want += truncated_pair_series(sigma, std::abs(kap));
  }
  want *= (2.0 - sigma) * pi / rays;
  Complex got = symbol_eval(k, xi);
  CHECK(got.real() == doctest::Approx(want).epsilon(1e-6));
  CHECK(std::abs(got.imag()) < 1e-9 * std::abs(want));
}

TEST_CASE("inner/middle split invariance") {
  KernelSpec k = make_fraclap(1.3, 1);
  QuadOptions coarse;
  QuadOptions fine;
  fine.delta_scale = 0.5;
  Complex a = symbol_eval(k, {3.0, 0.0}, coarse);
  Complex b = symbol_eval(k, {3.0, 0.0}, fine);
  CHECK(std::abs(a - b) < 1e-7 * std::abs(a));
}

TEST_CASE("symbol table invariants") {
  GridSpec g = make_grid(1, 128);
  SymbolTable t = symbol_table(make_nonsym1d(0.6), g);
  CHECK(t.m[0] == Complex(0.0, 0.0));
  for (int k = 1; k < 64; ++k) {
    CHECK(t.m[128 - k] == std::conj(t.m[k]));   // exact by construction
    CHECK(t.m[k].real() <= 0.0);
  }
  CHECK(t.m[64].imag() == 0.0);   // real Nyquist

  // tables match pointwise evaluation
  Complex direct = symbol_eval(make_nonsym1d(0.6), {5.0, 0.0});
  CHECK(std::abs(t.m[5] - direct) < 1e-12 * std::abs(direct));

  CHECK_THROWS_AS(symbol_table(make_xdep(0.8, 0.1), g), std::invalid_argument);
}

TEST_CASE("2d symbol table uses the plan consistently") {
  GridSpec g = make_grid(2, 64);
  KernelSpec k = make_aniso2d(1.4);
  SymbolTable t = symbol_table(k, g);
  CHECK(t.m[0] == Complex(0.0, 0.0));
  Complex direct = symbol_eval(k, {3.0, 2.0});
  CHECK(std::abs(t.m[flat(g, 3, 2)] - direct) < 1e-12 * std::abs(direct));
  // conjugate mirror: mode (-3, -2) sits at indices (61, 62)
  CHECK(t.m[flat(g, 61, 62)] == std::conj(t.m[flat(g, 3, 2)]));
}

TEST_CASE("kernel lookup by name") {
  KernelSpec k = make_kernel("fraclap", 0.7, 2);
  CHECK(k.dim == 2);
  CHECK(k.name.find("fraclap") == 0);
  CHECK_THROWS(make_kernel("nosuch", 0.7, 1));
  KernelSpec x = make_kernel("xdep", 0.9, 1, 0.2);
  CHECK(x.x_dependent);
}
