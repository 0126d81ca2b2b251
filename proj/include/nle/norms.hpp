#pragma once

#include "nle/grid.hpp"

#include <functional>

// Grid-based regularity diagnostics.  Every seminorm is a finite maximum
// over grid pairs or dyadic scales, so the values are deterministic and
// refinement-stable for fields whose spectrum is held fixed.

namespace nle {

Real sup_norm(const Field& u);

// sup |u(x)-u(y)| / d(x,y)^alpha over grid pairs, torus distance.  1d scans
// every offset; 2d scans dyadic multiples of 8 lattice directions.
Real holder_seminorm(const Field& u, Real alpha);

// Zygmund second-difference seminorm: sup over dyadic h in [spacing,
// period/4] of ||u(.+h) - 2u + u(.-h)||_inf / h.
Real zygmund_seminorm(const Field& u);

// Order-s norm through the harmonic extension U(., y): the maximum over
// log-spaced heights of y^{k-s} ||d^k U / dy^k||_inf, k = floor(s)+1.
// Meaningful for any s > 0, including s >= 2 where difference quotients
// need special-casing; constants are annihilated.
Real extension_norm(const Field& u, Real s);

// Campanato seminorm sup_{x, dyadic r} r^{-alpha} times the L2 mean
// oscillation of u over the ball (1d: arc; 2d: square) of radius r at x.
Real campanato_seminorm(const Field& u, Real alpha);

// sup |u(x)-u(y)| / (d (1 - ln d)) over pairs with torus distance d <= 1/2.
Real log_lipschitz_seminorm(const Field& u);

struct ModulusData {
  Array radii;   // dyadic, ascending
  Array omega;   // monotone modulus at those radii
};
ModulusData modulus_of_continuity(const Field& u);

struct DiniResult {
  Real integral = 0.0;
  Real fitted_gamma = 0.0;   // local power fitted at the smallest scales
  bool convergent = false;
};

// integral_0^{r_max} omega(s)/s ds from dyadic samples: each cell is
// integrated exactly under the local power law interpolating its endpoints,
// and the below-grid tail uses the fitted exponent; `convergent` requires
// the fitted exponent to clear 0.05.
DiniResult dini_integral(const ModulusData& m);

// sum_{j >= 0} decay^j omega(scale^j r), truncated once terms stop
// mattering, with a geometric-ratio bound closing the remainder.
Real dini_sum(const std::function<Real(Real)>& omega, Real decay, Real scale,
              Real r);

// sup over all grid radii of M(r)/r^alpha divided by the same sup over
// dyadic radii only, with M the monotone modulus.  Splitting any grid pair
// at an on-grid midpoint bounds this by 2.  1d fields.
Real dyadic_quotient_ratio(const Field& u, Real alpha);

struct NormReport {
  Real alpha = 0.0;
  Real sup_norm = 0.0;
  Real holder = 0.0;
  Real zygmund_secdiff = 0.0;
  Real zygmund_ext = 0.0;    // extension norm at order 1
  Real campanato = 0.0;
  Real log_lip = 0.0;
};

NormReport norm_report(const Field& u, Real alpha);

}  // namespace nle
