#include <doctest.h>

#include "nle/norms.hpp"

#include <cmath>

using namespace nle;

namespace {

Field cosine(const GridSpec& g, int mode) {
  Field f{g, Array::Zero(g.size())};
  for (int i = 0; i < g.n; ++i)
    f.values[i] = std::cos(mode * i * g.spacing());
  return f;
}

}  // namespace

TEST_CASE("sup and holder of a plain cosine") {
  GridSpec g = make_grid(1, 1024);
  Field u = cosine(g, 1);
  CHECK(sup_norm(u) == doctest::Approx(1.0).epsilon(1e-6));
  // Lipschitz seminorm: sup 2 sin(d/2)/d over grid distances -> 1 at d = h
  Real lip = holder_seminorm(u, 1.0);
  CHECK(lip == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(lip <= 1.0);
  CHECK_THROWS(holder_seminorm(u, 1.2));
  CHECK_THROWS(holder_seminorm(u, 0.0));
}

TEST_CASE("zygmund seminorm of cos is exactly 4/pi on dyadic offsets") {
  // sup_x |cos(x+d) - 2cos(x) + cos(x-d)| = 2(1 - cos d), and
  // 2(1 - cos d)/d over dyadic d <= T/4 peaks at d = pi/2 with value 4/pi.
  GridSpec g = make_grid(1, 1024);
  Field u = cosine(g, 1);
  CHECK(zygmund_seminorm(u) == doctest::Approx(4.0 / pi).epsilon(1e-12));
}

TEST_CASE("extension norm of a single mode has a closed form") {
  // U(x,y) = e^{-ky} cos(kx), k = floor(s)+1 derivatives:
  // sup_y y^{k-s} k^k e^{-ky} = k^s (k-s)^{k-s} e^{-(k-s)} at y = (k-s)/k.
  GridSpec g = make_grid(1, 1024);
  Field u = cosine(g, 4);
  for (Real s : {0.5, 1.0, 1.4}) {
    int kk = int(std::floor(s)) + 1;
    Real want = std::pow(4.0, s) * std::pow(kk - s, kk - s) *
                std::exp(-(kk - s));
    CHECK(extension_norm(u, s) == doctest::Approx(want).epsilon(0.03));
    CHECK(extension_norm(u, s) <= want * (1.0 + 1e-9));   // grid max from below
  }
}

TEST_CASE("campanato is bounded by holder both ways on rough fields") {
  GridSpec g = make_grid(1, 1024);
  for (Real alpha : {0.4, 0.7}) {
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
      Field u = random_field(g, alpha, seed);
      Real h = holder_seminorm(u, alpha);
      Real c = campanato_seminorm(u, alpha);
      CHECK(c <= std::pow(2.0, alpha) * h * (1.0 + 1e-9));
      CHECK(c >= 0.02 * h);
    }
  }
}

TEST_CASE("campanato in 2d stays below the holder bound") {
  GridSpec g = make_grid(2, 64);
  Field u = random_field(g, 0.6, 7);
  Real h = holder_seminorm(u, 0.6);
  Real c = campanato_seminorm(u, 0.6);
  CHECK(c > 0.0);
  CHECK(c <= std::pow(2.0, 0.6) * h * (1.0 + 1e-9));
}

TEST_CASE("log-lipschitz seminorm of the borderline field is finite") {
  GridSpec g = make_grid(1, 1024);
  Field u = lacunary_field(g, 8);
  Real ll = log_lipschitz_seminorm(u);
  CHECK(std::isfinite(ll));
  CHECK(ll > 0.0);
}

TEST_CASE("modulus of continuity is monotone and matches the cosine") {
  GridSpec g = make_grid(1, 512);
  Field u = cosine(g, 1);
  ModulusData m = modulus_of_continuity(u);
  REQUIRE(m.radii.size() == m.omega.size());
  REQUIRE(m.radii.size() >= 3);
  for (std::size_t i = 1; i < m.radii.size(); ++i) {
    CHECK(m.radii[i] > m.radii[i - 1]);
    CHECK(m.omega[i] >= m.omega[i - 1]);
  }
  // omega(d) = max |cos(x+d) - cos(x)| = 2 sin(d/2) for d <= pi
  for (std::size_t i = 0; i < m.radii.size(); ++i) {
    if (m.radii[i] <= pi)
      CHECK(m.omega[i] ==
            doctest::Approx(2.0 * std::sin(m.radii[i] / 2.0)).epsilon(1e-3));
  }
}

TEST_CASE("dini integral closed forms") {
  // pure power omega = r^gamma on dyadic radii: cells are exact, so the
  // integral equals r_max^gamma / gamma and the fitted exponent is gamma.
  ModulusData power;
  power.radii = Array(11);
  power.omega = Array(11);
  for (int l = 0; l < 11; ++l) {
    power.radii[l] = std::pow(2.0, l - 12);
    power.omega[l] = std::pow(power.radii[l], 0.5);
  }
  DiniResult dr = dini_integral(power);
  CHECK(dr.convergent);
  CHECK(dr.fitted_gamma == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(dr.integral ==
        doctest::Approx(std::pow(0.25, 0.5) / 0.5).epsilon(1e-12));

  // omega = 1/(1 - ln r): the integral sum_j omega(2^-j) diverges like the
  // harmonic series. The local slope log2(w(2r)/w(r)) decays like 1/|ln r|,
  // so the data has to reach small enough radii to drop below the threshold.
  ModulusData logm;
  logm.radii = Array(33);
  logm.omega = Array(33);
  for (int l = 0; l < 33; ++l) {
    Real r = std::pow(2.0, l - 34);
    logm.radii[l] = r;
    logm.omega[l] = 1.0 / (1.0 - std::log(r));
  }
  DiniResult dl = dini_integral(logm);
  CHECK_FALSE(dl.convergent);
}

TEST_CASE("dini integral of a holder field converges") {
  GridSpec g = make_grid(1, 1024);
  Field u = random_field(g, 0.7, 3);
  DiniResult dr = dini_integral(modulus_of_continuity(u));
  CHECK(dr.convergent);
  CHECK(dr.integral > 0.0);
  CHECK(dr.fitted_gamma > 0.2);
}

TEST_CASE("dini sum geometric closed form") {
  // omega(s) = s^gamma: sum_j a^j omega(b^j r) = r^gamma / (1 - a b^gamma)
  const Real gamma = 0.3, a = 0.5, b = 0.5, r = 0.7;
  Real got = dini_sum([&](Real s) { return std::pow(s, gamma); }, a, b, r);
  Real want = std::pow(r, gamma) / (1.0 - a * std::pow(b, gamma));
  CHECK(got == doctest::Approx(want).epsilon(1e-10));
}

TEST_CASE("dyadic quotient ratio lies in [1, 2]") {
  GridSpec g = make_grid(1, 512);
  for (Real alpha : {0.3, 0.6, 0.9}) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      Field u = random_field(g, alpha, seed);
      Real q = dyadic_quotient_ratio(u, alpha);
      CHECK(q >= 1.0 - 1e-12);
      CHECK(q <= 2.0 * (1.0 + 1e-9));
    }
  }
}

TEST_CASE("norm_report bundles the individual seminorms") {
  GridSpec g = make_grid(1, 512);
  Field u = random_field(g, 0.5, 2);
  NormReport r = norm_report(u, 0.5);
  CHECK(r.alpha == 0.5);
  CHECK(r.sup_norm == sup_norm(u));
  CHECK(r.holder == holder_seminorm(u, 0.5));
  CHECK(r.zygmund_secdiff == zygmund_seminorm(u));
  CHECK(r.zygmund_ext == extension_norm(u, 1.0));
  CHECK(r.campanato == campanato_seminorm(u, 0.5));
  CHECK(r.log_lip == log_lipschitz_seminorm(u));
}
