#pragma once

#include "nle/grid.hpp"

#include <array>
#include <functional>
#include <stdexcept>
#include <string>

// Jump kernels K(x,y) = (2 - sigma) * a(x,y) / |y|^{d+sigma} with bounded
// amplitude nu <= a <= Lambda.  The (2 - sigma) factor is part of the kernel,
// not of the amplitude, which keeps every derived quantity bounded as
// sigma -> 2.

namespace nle {

using Point = std::array<Real, 2>;   // second component unused in 1d

inline Real norm(const Point& p) { return std::hypot(p[0], p[1]); }

enum class CompensatorKind { none, unit_ball, full };

// Order-dependent drift compensator: none for sigma < 1, the indicator of the
// unit ball exactly at sigma = 1, identically one for sigma > 1.  A function
// of sigma alone.
CompensatorKind compensator(Real sigma);

struct KernelSpec {
  Real sigma = 1.0;
  int dim = 1;
  // a(x,y); must be nonnegative and bounded by [nu, lambda_upper].  The
  // quadrature samples the innermost and outermost radial regions per
  // direction only, so a there must depend on y through y/|y| alone (true
  // for every built-in kernel; `truncated` additionally cuts |y| > 1).
  std::function<Real(const Point& x, const Point& y)> amplitude;
  Real nu = 1.0;
  Real lambda_upper = 1.0;
  bool x_dependent = false;
  bool truncated = false;
  std::string name;
};

class InvalidKernel : public std::runtime_error {
 public:
  explicit InvalidKernel(const std::string& what) : std::runtime_error(what) {}
};

Real kernel_value(const KernelSpec& k, const Point& x, const Point& y);

struct EllipticityReport {
  Real min_ratio = 0.0;
  Real max_ratio = 0.0;
  bool pass = false;
};

// Checks nu <= a(x,y) <= Lambda over a deterministic low-discrepancy sample
// of points and of log-spaced radii (tolerance 1e-12).  For truncated
// kernels the bounds apply on |y| <= 1 and a must vanish outside.  Throws
// InvalidKernel, naming the sample point, on negative or non-finite values.
EllipticityReport ellipticity_check(const KernelSpec& k, int sample_count = 4096);

// Surface moment integral_{|y|=r} y K(x,y) dS(y), the sigma = 1 cancellation
// defect.  In 1d this is the two-point sum r K(x,r) - r K(x,-r); in 2d a
// trapezoid rule on the circle with at least 256 nodes.  Scales like
// r^{1-sigma} for direction-only amplitudes.
Point cancellation_defect(const KernelSpec& k, const Point& x, Real r,
                          int circle_nodes = 256);

// Parameter validation: sigma in (0,2), bounds ordered, amplitude
// nonnegative on a coarse direction/radius sample, and at sigma = 1 a
// vanishing cancellation defect at every dyadic radius 2^-8 .. 2^3 (checked
// at several x for x-dependent kernels).  Throws InvalidKernel.
void validate_kernel(const KernelSpec& k);

inline constexpr Real cancellation_tol = 1e-10;

// Built-in kernels with amplitude depending on direction (and possibly x)
// only.  The calibrated "fraclap" kernel lives in symbol.hpp since its
// constant comes from symbol calibration.
KernelSpec make_unit_kernel(Real sigma, int dim);                    // a == 1
KernelSpec make_aniso2d(Real sigma);        // a = 1 + cos(2 theta)/2, d = 2
KernelSpec make_nonsym1d(Real sigma);       // a = 1 + sign(y)/2, sigma != 1
KernelSpec make_truncated(Real sigma);      // a = 1_{|y| <= 1}, d = 1
KernelSpec make_xdep(Real sigma, Real eps, Real period = two_pi);
// xdep: a(x,y) = 1 + eps * g(x), g(x) = sin(2 pi x / period), so the
// amplitude frozen at x0 = 0 is exactly 1.

}  // namespace nle
