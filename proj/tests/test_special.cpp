#include <doctest.h>

#include "nle/special.hpp"

#include <cmath>
#include <complex>
#include <utility>
#include <vector>

using namespace nle;

namespace {

// Independent oracle for the oscillatory tail: plain Gauss-Legendre panels
// on [z0, Z] plus the integration-by-parts expansion at Z,
//   integral_Z^inf e^{iz} z^{-nu} dz = i e^{iZ} Z^{-nu} - i nu T(nu+1),
// truncated at depth 4 (error below nu^4 Z^{-nu-4}, negligible for Z = 600).
// No contour rotation anywhere, so the code path is disjoint from the
// implementation under test.
Complex osc_tail_oracle(Real nu, Real z0) {
  const Real Z = 600.0;
  Complex head = integrate_panels(
      [&](Real z) { return std::exp(Complex(0.0, z)) * std::pow(z, -nu); },
      z0, Z, int((Z - z0) / 1.5) + 1, 24);
  Complex tail(0.0, 0.0);
  Complex factor(1.0, 0.0);
  const Complex eiZ = std::exp(Complex(0.0, Z));
  Real nus = nu;
  for (int depth = 0; depth < 4; ++depth) {
    tail += factor * Complex(0.0, 1.0) * eiZ * std::pow(Z, -nus);
    factor *= Complex(0.0, -1.0) * nus;
    nus += 1.0;
  }
  return head + tail;
}

}  // namespace

TEST_CASE("gauss-legendre exactness at degree 2n-1") {
  // order-8 rule integrates x^15 over [0,1] exactly
  auto moment = [](int p, int order) {
    return integrate_panels([&](Real x) { return std::pow(x, p); }, 0.0, 1.0,
                            1, order);
  };
  CHECK(moment(15, 8) == doctest::Approx(1.0 / 16.0).epsilon(1e-14));
  CHECK(moment(31, 16) == doctest::Approx(1.0 / 32.0).epsilon(1e-13));
  // one degree beyond exactness the rule must miss (sanity that the check
  // above is not vacuous)
  CHECK(std::abs(moment(17, 4) - 1.0 / 18.0) > 1e-10);
}

TEST_CASE("integrate_panels on a logarithm and a complex integrand") {
  Real v = integrate_panels([](Real x) { return 1.0 / x; }, 1.0, 2.0, 4);
  CHECK(v == doctest::Approx(std::log(2.0)).epsilon(1e-13));

  Complex w = integrate_panels(
      [](Real x) { return std::exp(Complex(0.0, x)); }, 0.0, pi, 8);
  CHECK(w.real() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(w.imag() == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("hurwitz zeta against the basel value and a brute sum") {
  CHECK(hurwitz_zeta(2.0, 1.0) ==
        doctest::Approx(pi * pi / 6.0).epsilon(1e-12));

  // brute force: direct sum to M plus the integral tail and the half term,
  // accurate to ~ s (q+M)^{-s-1}
  const Real s = 1.5, q = 2.5;
  const int M = 2000000;
  Real brute = 0.0;
  for (int m = M - 1; m >= 0; --m) brute += std::pow(q + m, -s);
  brute += std::pow(q + M, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(q + M, -s);
  CHECK(hurwitz_zeta(s, q) == doctest::Approx(brute).epsilon(1e-10));
}

TEST_CASE("oscillatory power tail against the parts oracle") {
  const std::vector<std::pair<Real, Real>> cases = {
      {1.5, 30.0}, {2.5, 30.0}, {1.2, 45.0}, {3.0, 100.0}};
  for (auto [nu, z0] : cases) {
    Complex got = osc_power_tail(nu, z0);
    Complex want = osc_tail_oracle(nu, z0);
    CHECK(std::abs(got - want) <= 1e-10 * std::abs(want));
  }
}

TEST_CASE("oscillatory power tail magnitude decays like z0^-nu") {
  // |I(nu, z0)| <= z0^-nu and the leading term dominates for large z0
  Real nu = 1.7;
  Complex a = osc_power_tail(nu, 50.0);
  Complex b = osc_power_tail(nu, 200.0);
  CHECK(std::abs(a) <= std::pow(50.0, -nu));
  CHECK(std::abs(b) <= std::pow(200.0, -nu));
  CHECK(std::abs(b) < std::abs(a));
}
