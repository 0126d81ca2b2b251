#pragma once

#include "nle/grid.hpp"

#include <vector>

// Quadrature building blocks and the few special functions the radial
// integrals need.  Everything here is deterministic and double precision.

namespace nle {

struct GaussRule {
  std::vector<Real> nodes;     // on (-1, 1)
  std::vector<Real> weights;
};

// Gauss-Legendre rule, cached per order.
const GaussRule& gauss_legendre(int order);

// Composite Gauss-Legendre over [a, b] split into `panels` equal panels.
// Works for real- or complex-valued integrands.
template <class F>
auto integrate_panels(F&& f, Real a, Real b, int panels, int order = 16)
    -> decltype(f(a) * Real(1)) {
  using Value = decltype(f(a) * Real(1));
  const GaussRule& rule = gauss_legendre(order);
  const Real w = (b - a) / panels;
  Value acc{};
  for (int p = 0; p < panels; ++p) {
    const Real lo = a + p * w;
    Value local{};
    for (size_t i = 0; i < rule.nodes.size(); ++i)
      local += rule.weights[i] * f(lo + 0.5 * w * (1.0 + rule.nodes[i]));
    acc += 0.5 * w * local;
  }
  return acc;
}

// Hurwitz zeta sum_{m >= 0} (q + m)^{-s} for s > 1, q > 0 (Euler-Maclaurin).
Real hurwitz_zeta(Real s, Real q);

// Oscillatory power tail integral_{z0}^infty e^{iz} z^{-nu} dz for z0 > 0,
// nu > 0, evaluated on the rotated contour z = z0 + it:
//   i e^{i z0} integral_0^infty e^{-t} (z0 + i t)^{-nu} dt,
// which is absolutely convergent and smooth for every z0 > 0.
Complex osc_power_tail(Real nu, Real z0);

}  // namespace nle
