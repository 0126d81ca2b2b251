#pragma once

#include "nle/grid.hpp"
#include "nle/kernel.hpp"
#include "nle/symbol.hpp"

#include <functional>
#include <vector>

// Two independent routes for applying the operator
//   Lu(x) = integral (u(x+y) - u(x) - y.grad u(x) chi(y)) K(x, y) dy
// to periodic grid data: a spectral multiplier route through the symbol
// table, and a real-space quadrature route that never touches the symbol.
// Their agreement is the main cross-check of the whole toolkit.

namespace nle {

// ---- spectral route ----------------------------------------------------

Field apply_symbol(const SymbolTable& t, const Field& u);
Spectrum apply_symbol(const SymbolTable& t, const Spectrum& s);

// Harmonic extension to height y > 0 and its y-derivatives: multipliers
// e^{-|xi| y} and (-|xi|)^order e^{-|xi| y}.
Field poisson_extend(const Field& u, Real y);
Field extension_derivative(const Field& u, Real y, int order);

// Smooth cutoff window: 1 on the arc within `core` of `center`, cosine ramp
// to 0 over `ramp`, wrapped periodically.  1d grids only.
Field bump_window(const GridSpec& g, Real center, Real core, Real ramp);

// L(w u) - w L(u) with both applications through the symbol table.
Field commutator_spectral(const SymbolTable& t, const Field& u,
                          const Field& window);

// ---- real-space route --------------------------------------------------

struct ApplyOptions {
  Real delta_scale = 1.0;        // inner radius = delta_scale/2 * h/pi
  int taylor_orders = 12;        // spectral derivatives used below delta
  int oversample = 8;            // zero-padding factor for off-grid values
  int stencil = 10;              // barycentric points on the oversampled grid
  Real nodes_per_cycle = 12.0;   // middle-region Gauss-Legendre density
  Real tail_start_factor = 0.5;  // tail multipliers take over at factor*period
};

// Radial layout, per-node amplitudes and tail multipliers for one
// (kernel, grid) combination; build once, apply to many fields.
//
// Below the grid scale the integrand is reconstructed from spectral
// derivatives of u (the data is band-limited, so the Taylor series at
// radius ~ h/(2 pi) converges in a dozen terms).  The middle region is
// composite Gauss-Legendre against the exact power weight with off-grid
// values from a barycentric stencil on the oversampled grid.  Beyond
// tail_start_factor * period the amplitude is direction-frozen (all
// built-in kernels are direction-only there) and the remaining integral is
// a per-mode multiplier computed by the same contour machinery as the
// symbol; it covers the -u(x) and compensator pieces as well.
struct ApplyPlan {
  KernelSpec kernel;
  GridSpec grid;
  ApplyOptions opts;
  Real delta = 0.0;
  Real mid_end = 0.0;
  bool has_tail = false;
  std::vector<Real> mid_r;   // shared radial nodes
  std::vector<Real> mid_w;   // Gauss weights times r^{-1-sigma}
  std::vector<Real> amp_p, amp_m;              // 1d, x-independent kernels
  std::vector<Point> dirs;                     // 2d: theta nodes on [0, pi)
  std::vector<std::vector<Real>> amp_dir_p, amp_dir_m;
  CArray tau;   // 1d: one-sided multiplier (other side is its conjugate);
                // 2d: pair-summed multiplier with amplitudes folded in
};

ApplyPlan make_apply_plan(const KernelSpec& k, const GridSpec& g,
                          const ApplyOptions& opts = {});

Field apply_quadrature(const ApplyPlan& plan, const Field& u);
Field apply_quadrature(const KernelSpec& k, const Field& u,
                       const ApplyOptions& opts = {});

// Evaluation restricted to flat grid indices (the 2d route costs ~1ms per
// site, so sweeps sample a subset).
Array apply_quadrature_at(const ApplyPlan& plan, const Field& u,
                          const std::vector<Eigen::Index>& sites);

// Application to a smooth rapidly decaying function on the line, for
// symmetric 1d kernels: the pair form
//   integral_0^inf a(r) (u(x+r) + u(x-r) - 2 u(x)) (2-sigma) r^{-1-sigma} dr
// needs no compensator for any sigma.  The quadrature truncates where u is
// negligible, so u must decay faster than any power.
Array apply_to_function(const KernelSpec& k,
                        const std::function<Real(Real)>& u, const Array& x);

}  // namespace nle
