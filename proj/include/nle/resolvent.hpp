#pragma once

#include "nle/grid.hpp"
#include "nle/operators.hpp"
#include "nle/symbol.hpp"

#include <stdexcept>
#include <vector>

// Resolvent solves (lambda - L) u = f.  Constant-coefficient kernels go
// through the symbol table directly; x-dependent kernels iterate against a
// frozen-coefficient resolvent, with the remainder applied in real space.

namespace nle {

// lambda > 0 keeps |lambda - m| >= lambda since Re m <= 0.
Spectrum solve_constant(const SymbolTable& t, const Spectrum& f, Real lambda);
Field solve_constant(const SymbolTable& t, const Field& f, Real lambda);

struct PicardTrace {
  std::vector<Real> residuals;    // ||lambda u_m - L u_m - f||_inf per iterate
  std::vector<Real> contraction;  // ||u_{m+1}-u_m|| / ||u_m-u_{m-1}||
  int iterations = 0;
  bool converged = false;
  Real final_residual = 0.0;
};

class PicardDivergence : public std::runtime_error {
 public:
  PicardDivergence(const std::string& what, PicardTrace t)
      : std::runtime_error(what), trace(std::move(t)) {}
  PicardTrace trace;
};

struct SolveOptions {
  Real tol = 1e-8;             // residual target relative to ||f||_inf
  int max_iter = 50;
  Point x_freeze = {0.0, 0.0};
  ApplyOptions apply;          // quadrature options for the remainder
};

// Picard iteration u_{m+1} = (lambda - L0)^{-1} (f + (L - L0) u_m) with L0
// the operator frozen at x_freeze.  The perturbation is applied by the
// real-space route, so nothing assumes the kernel separates.  Throws
// PicardDivergence (carrying the trace) after three consecutive
// non-decreasing residuals.
Field solve_variable(const KernelSpec& k, const Field& f, Real lambda,
                     PicardTrace* trace = nullptr,
                     const SolveOptions& opts = {});

struct GreenOptions {
  Real t_min = 1e-7;     // closed-form slabs below t_min and beyond t_max
  Real cutoff = 1e-12;   // e^{-lambda t_max} at the far end
  int panel_order = 12;
};

// Periodized resolvent density integral_0^infty e^{-lambda t} p_t dt of the
// beta-stable semigroup p_hat_t(xi) = e^{-|xi|^beta t}: geometric-grid time
// quadrature per mode with closed-form end slabs.  Total mass is 1/lambda
// up to quadrature error.  beta = 2 is allowed (heat semigroup), which is
// the closed-form cross-check case.
Field green_function(const GridSpec& g, Real beta, Real lambda,
                     const GreenOptions& opts = {});

}  // namespace nle
