#include "nle/resolvent.hpp"

#include "nle/special.hpp"

#include <cmath>

namespace nle {

Spectrum solve_constant(const SymbolTable& t, const Spectrum& f, Real lambda) {
  if (!(lambda > 0.0))
    throw std::invalid_argument("solve_constant: lambda > 0 required");
  if (!(t.grid == f.grid))
    throw std::invalid_argument("solve_constant: grid mismatch");
  Spectrum u{f.grid, CArray(f.coeff.size())};
  for (Eigen::Index i = 0; i < f.coeff.size(); ++i)
    u.coeff[i] = f.coeff[i] / (lambda - t.m[i]);
  return u;
}

Field solve_constant(const SymbolTable& t, const Field& f, Real lambda) {
  return inverse(solve_constant(t, transform(f), lambda));
}

Field solve_variable(const KernelSpec& k, const Field& f, Real lambda,
                     PicardTrace* trace, const SolveOptions& opts) {
  if (!(lambda > 0.0))
    throw std::invalid_argument("solve_variable: lambda > 0 required");
  if (!k.x_dependent)
    throw std::invalid_argument(
        "solve_variable: use solve_constant for x-independent kernels");

  KernelSpec frozen = k;
  const Point xf = opts.x_freeze;
  auto amp = k.amplitude;
  frozen.amplitude = [amp, xf](const Point&, const Point& y) {
    return amp(xf, y);
  };
  frozen.x_dependent = false;
  frozen.name = k.name + "@frozen";

  const SymbolTable t0 = symbol_table(frozen, f.grid);
  const ApplyPlan plan = make_apply_plan(k, f.grid, opts.apply);

  const Real fnorm = f.values.abs().maxCoeff();
  PicardTrace tr;
  Field u = solve_constant(t0, f, lambda);
  Field prev_delta{f.grid, Array::Zero(f.grid.size())};
  bool have_delta = false;
  int stall = 0;

  for (int m = 0; m < opts.max_iter; ++m) {
    const Field lu = apply_quadrature(plan, u);
    const Field l0u = apply_symbol(t0, u);
    const Array resid_vec = lambda * u.values - lu.values - f.values;
    const Real resid = resid_vec.abs().maxCoeff();
    tr.residuals.push_back(resid);
    tr.iterations = m + 1;
    if (resid <= opts.tol * fnorm) {
      tr.converged = true;
      tr.final_residual = resid;
      if (trace) *trace = tr;
      return u;
    }
    if (tr.residuals.size() >= 2 &&
        resid >= tr.residuals[tr.residuals.size() - 2] * (1.0 - 1e-12)) {
      if (++stall >= 3) {
        tr.final_residual = resid;
        if (trace) *trace = tr;
        throw PicardDivergence("solve_variable: residual stopped decreasing",
                               tr);
      }
    } else {
      stall = 0;
    }

    const Field rhs{f.grid, f.values + lu.values - l0u.values};
    const Field next = solve_constant(t0, rhs, lambda);
    const Array delta = next.values - u.values;
    if (have_delta) {
      const Real num = delta.abs().maxCoeff();
      const Real den = prev_delta.values.abs().maxCoeff();
      if (den > 0.0) tr.contraction.push_back(num / den);
    }
    prev_delta.values = delta;
    have_delta = true;
    u = next;
  }

  tr.final_residual = tr.residuals.empty() ? 0.0 : tr.residuals.back();
  if (trace) *trace = tr;
  throw PicardDivergence("solve_variable: iteration cap reached", tr);
}

Field green_function(const GridSpec& g, Real beta, Real lambda,
                     const GreenOptions& opts) {
  validate(g);
  if (!(beta > 0.0 && beta <= 2.0))
    throw std::invalid_argument("green_function: beta in (0, 2]");
  if (!(lambda > 0.0))
    throw std::invalid_argument("green_function: lambda > 0");

  const Array mag = xi_magnitude(g);
  const Real t_max = -std::log(opts.cutoff) / lambda;
  const Real vol = g.dim == 1 ? g.period : g.period * g.period;

  Spectrum s{g, CArray(g.size())};
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    const Real rho = lambda + std::pow(mag[i], beta);
    // exact end slabs; the geometric middle grid carries the quadrature
    Real m = (1.0 - std::exp(-rho * opts.t_min)) / rho +
             std::exp(-rho * t_max) / rho;
    Real a = opts.t_min;
    while (a < t_max * (1.0 - 1e-14)) {
      const Real b = std::min(2.0 * a, t_max);
      m += integrate_panels([rho](Real t) { return std::exp(-rho * t); }, a, b,
                            1, opts.panel_order);
      a = b;
    }
    s.coeff[i] = m / vol;
  }
  return inverse(s);
}

}  // namespace nle
