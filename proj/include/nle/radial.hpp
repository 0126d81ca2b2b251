#pragma once

#include "nle/grid.hpp"
#include "nle/special.hpp"

#include <cmath>
#include <stdexcept>

// Radial quadrature primitives shared by the symbol evaluator and the
// real-space application route.  Everything here integrates
//   g(r) = e^{i r kappa} - 1 - i r kappa chi(r)
// against r^{-1-sigma} along an antipodal direction pair, split into an
// inner Taylor series, oscillation-resolved Gauss-Legendre octaves, and a
// rotated-contour analytic tail.  At sigma = 1 the chi terms and the k = 1
// series term are dropped: for kernels satisfying the cancellation
// condition they vanish in the pair (or angular) sum, which realizes the
// principal value without ever forming it numerically.

namespace nle {

struct QuadOptions {
  Real budget = 1e-8;          // per-region error target
  Real delta_scale = 1.0;      // scales the inner/middle split (invariance probe)
  int min_nodes_per_octave = 32;
  Real z_launch = 30.0;        // r |xi| >= z_launch starts the analytic tail
};

namespace radial {

// sum_{k >= k0} (i kappa)^k delta^{k-sigma} / (k! (k - sigma)), the
// term-by-term integral of the compensated Taylor series over [0, delta].
// k0 = 1 below sigma = 1, else 2; the k = 2 term carries the
// delta^{2-sigma}/(2-sigma) factor that stays bounded as sigma -> 2.
inline Complex inner_series(Real sigma, Real kappa, Real delta, int k0) {
  const Complex z(0.0, kappa);
  Complex zpow = std::pow(z, k0);
  Real fact = 1.0;
  for (int j = 2; j <= k0; ++j) fact *= j;
  Real dpow = std::pow(delta, k0 - sigma);
  Complex acc = 0.0;
  Real top = 0.0;
  for (int k = k0; k < 48; ++k) {
    const Complex term = zpow * dpow / (fact * (k - sigma));
    acc += term;
    top = std::max(top, std::abs(term));
    if (std::abs(term) < 1e-18 * top) break;
    zpow *= z;
    dpow *= delta;
    fact *= k + 1;
  }
  return acc;
}

struct Layout {
  Real r_from = 0.0;
  Real r_end = 0.0;    // end of the resolved middle region
  bool far_tail = false;
  bool ball_gap = false;   // truncated with r_end < 1: analytic piece on [r_end, 1]
  bool empty = false;
};

inline Layout layout(Real kappa, Real r_min, bool truncated,
                     const QuadOptions& o) {
  Layout l;
  l.r_from = r_min;
  const Real r_star = o.z_launch / kappa;
  if (truncated) {
    if (r_min >= 1.0) {
      l.empty = true;
      return l;
    }
    l.r_end = std::min(1.0, std::max(r_min, r_star));
    l.ball_gap = r_star < 1.0;
  } else {
    l.r_end = std::max(r_min, r_star);
    l.far_tail = true;
  }
  return l;
}

// Analytic integral beyond the resolved region for unit amplitude on the
// +e ray; the -e ray is the conjugate.  Valid because kappa * r_end >=
// z_launch whenever a tail exists.
inline Complex tail_value(Real sigma, Real kappa, const Layout& l) {
  if (l.empty || (!l.far_tail && !l.ball_gap)) return 0.0;
  const Real r0 = l.r_end;
  const Real nu = 1.0 + sigma;
  Complex osc;
  Real power, comp;
  if (l.ball_gap) {
    osc = std::pow(kappa, sigma) *
          (osc_power_tail(nu, kappa * r0) - osc_power_tail(nu, kappa));
    power = (std::pow(r0, -sigma) - 1.0) / sigma;
    comp = sigma > 1.0 ? (std::pow(r0, 1.0 - sigma) - 1.0) / (sigma - 1.0) : 0.0;
  } else {
    osc = std::pow(kappa, sigma) * osc_power_tail(nu, kappa * r0);
    power = std::pow(r0, -sigma) / sigma;
    comp = sigma > 1.0 ? std::pow(r0, 1.0 - sigma) / (sigma - 1.0) : 0.0;
  }
  Complex t = osc - power;
  if (sigma > 1.0) t -= Complex(0.0, kappa) * comp;
  return t;
}

// integral_{r_min}^inf [a_p(r) g(r) + a_m(r) conj(g(r))] r^{-1-sigma} dr
// with amplitudes evaluated at the middle-region nodes and frozen at a
// representative radius in the analytic tail.
template <class Fp, class Fm>
Complex range_pair(Real sigma, Real kappa, Fp&& a_p, Fm&& a_m, Real r_min,
                   bool truncated, const QuadOptions& o) {
  if (kappa <= 0.0) throw std::invalid_argument("range_pair: kappa > 0");
  const Layout l = layout(kappa, r_min, truncated, o);
  if (l.empty) return 0.0;
  const bool chi_full = sigma > 1.0;
  Complex acc = 0.0;

  Real a = l.r_from;
  const int base_panels = std::max(2, o.min_nodes_per_octave / 16);
  while (a < l.r_end * (1.0 - 1e-14)) {
    const Real b = std::min(2.0 * a, l.r_end);
    const Real cycles = (b - a) * kappa / two_pi;
    const int panels = std::max(base_panels, int(std::ceil(2.0 * cycles)));
    acc += integrate_panels(
        [&](Real r) {
          Complex g = std::exp(Complex(0.0, r * kappa)) - 1.0;
          if (chi_full) g -= Complex(0.0, r * kappa);
          return (a_p(r) * g + a_m(r) * std::conj(g)) *
                 std::pow(r, -1.0 - sigma);
        },
        a, b, panels, 16);
    a = b;
  }

  const Complex t = tail_value(sigma, kappa, l);
  if (t != Complex(0.0, 0.0)) {
    const Real rep = l.ball_gap ? 0.5 * (l.r_end + 1.0) : 2.0 * l.r_end;
    acc += a_p(rep) * t + a_m(rep) * std::conj(t);
  }
  return acc;
}

// Full radial integral over (0, infinity): inner series below delta plus
// range_pair above it.  The inner amplitudes are frozen at delta/2.
template <class Fp, class Fm>
Complex full_pair(Real sigma, Real kappa, Fp&& a_p, Fm&& a_m, bool truncated,
                  const QuadOptions& o) {
  if (kappa <= 0.0) throw std::invalid_argument("full_pair: kappa > 0");
  const Real delta = o.delta_scale * std::min(0.5, 0.5 / kappa);
  const int k0 = sigma < 1.0 ? 1 : 2;
  const Complex s = inner_series(sigma, kappa, delta, k0);
  return a_p(0.5 * delta) * s + a_m(0.5 * delta) * std::conj(s) +
         range_pair(sigma, kappa, a_p, a_m, delta, truncated, o);
}

}  // namespace radial
}  // namespace nle
