#pragma once

#include "nle/grid.hpp"
#include "nle/kernel.hpp"
#include "nle/radial.hpp"

// Fourier symbol m(xi) = integral (e^{i y.xi} - 1 - i y.xi chi(y)) K(y) dy of
// an x-independent kernel.  The radial integral is split into
//   (i)  [0, delta]: term-by-term integration of the compensated Taylor
//        series against the power law (exact; delta ~ 1/|xi| so the series
//        converges in a dozen terms, and the k = 2 term carries the
//        delta^{2-sigma}/(2-sigma) factor that stays bounded as sigma -> 2),
//   (ii) [delta, R]: composite Gauss-Legendre per radial octave, panels
//        sized to the oscillation, at least 32 nodes per octave,
//   (iii) [R, infinity): the e^{i r xi} part on a rotated contour
//        (osc_power_tail) plus closed-form power integrals for the rest,
//        with R*|xi| pinned so every region's error stays below `budget`
//        relative to |m(xi)|.
// At sigma = 1 the kernel must satisfy the cancellation condition; odd-order
// terms then cancel between antipodal directions and are dropped
// analytically, which realizes the principal value exactly.

namespace nle {

Complex symbol_eval(const KernelSpec& k, const Point& xi,
                    const QuadOptions& opts = {});

struct SymbolTable {
  GridSpec grid;
  Real sigma = 0.0;
  std::string kernel_name;
  CArray m;   // FFT layout, conjugate-symmetric, m[0] = 0, Re m <= 0
};

// Evaluates the symbol on the full frequency lattice of `g` and enforces the
// table invariants: m(0) = 0, conjugate pairs symmetrized exactly, Re m <= 0
// (violations beyond quadrature tolerance raise InvalidKernel).
SymbolTable symbol_table(const KernelSpec& k, const GridSpec& g,
                         const QuadOptions& opts = {});

// The constant c(d, sigma) with K(y) = c/|y|^{d+sigma} normalized so the
// symbol equals -|xi|^sigma: fixed numerically from the unit-amplitude
// symbol at |xi| = 1 (the closed-form constant is never trusted).  Cached.
Real calibrate_fraclap(Real sigma, int dim);

// Calibrated fractional Laplacian kernel, a = c(d,sigma)/(2-sigma).
KernelSpec make_fraclap(Real sigma, int dim);

// Built-in kernel lookup by CLI name: fraclap | aniso2d | nonsym1d |
// truncated | xdep.  `eps` is used by xdep, `period` by xdep's profile.
KernelSpec make_kernel(const std::string& name, Real sigma, int dim,
                       Real eps = 0.1, Real period = two_pi);

}  // namespace nle
