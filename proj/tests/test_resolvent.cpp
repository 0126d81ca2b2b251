#include <doctest.h>

#include "nle/operators.hpp"
#include "nle/resolvent.hpp"
#include "nle/symbol.hpp"

#include <Eigen/Dense>

#include <cmath>

using namespace nle;

TEST_CASE("constant-kernel solve has an exact spectral residual") {
  GridSpec g = make_grid(1, 256);
  SymbolTable t = symbol_table(make_fraclap(1.1, 1), g);
  Field f = random_field(g, 0.5, 4);
  const Real lambda = 0.8;
  Field u = solve_constant(t, f, lambda);
  Field Lu = apply_symbol(t, u);
  Real resid = (lambda * u.values - Lu.values - f.values).abs().maxCoeff();
  CHECK(resid < 1e-10 * f.values.abs().maxCoeff());
  CHECK_THROWS(solve_constant(t, f, 0.0));
  CHECK_THROWS(solve_constant(t, f, -1.0));
}

TEST_CASE("solve and forward map are inverse to each other") {
  GridSpec g = make_grid(1, 128);
  SymbolTable t = symbol_table(make_nonsym1d(0.7), g);
  Field u = random_field(g, 1.5, 11);
  const Real lambda = 2.0;
  Field f{g, lambda * u.values - apply_symbol(t, u).values};
  Field back = solve_constant(t, f, lambda);
  CHECK((back.values - u.values).abs().maxCoeff() <
        1e-11 * u.values.abs().maxCoeff());
}

TEST_CASE("heat-kernel resolvent matches the exact multiplier") {
  GridSpec g = make_grid(1, 512);
  const Real lambda = 1.3;
  Field G = green_function(g, 2.0, lambda);
  Array mag = xi_magnitude(g);
  Spectrum exact{g, CArray::Zero(g.n)};
  for (int i = 0; i < g.n; ++i)
    exact.coeff[i] = 1.0 / ((lambda + mag[i] * mag[i]) * g.period);
  Field Ge = inverse(exact);
  CHECK((G.values - Ge.values).abs().maxCoeff() <
        1e-9 * Ge.values.maxCoeff());
}

TEST_CASE("green function mass and positivity") {
  GridSpec g = make_grid(1, 1024);
  for (Real beta : {0.7, 1.5}) {
    for (Real lambda : {0.5, 2.0}) {
      Field G = green_function(g, beta, lambda);
      Real mass = G.values.sum() * g.spacing();
      CHECK(mass == doctest::Approx(1.0 / lambda).epsilon(1e-8));
      CHECK(G.values.minCoeff() > -1e-10 * G.values.maxCoeff());
    }
  }
  CHECK_THROWS(green_function(g, 2.5, 1.0));
  CHECK_THROWS(green_function(g, 0.0, 1.0));
  CHECK_THROWS(green_function(g, 1.0, 0.0));
}

TEST_CASE("picard solution solves the dense quadrature system") {
  const int n = 128;
  GridSpec g = make_grid(1, n);
  KernelSpec k = make_xdep(0.8, 0.1, g.period);
  const Real lambda = 2.0;
  Field f = random_field(g, 0.7, 3);

  PicardTrace tr;
  Field u = solve_variable(k, f, lambda, &tr);
  CHECK(tr.converged);
  CHECK(tr.final_residual <= 1e-8 * f.values.abs().maxCoeff());
  for (Real c : tr.contraction) CHECK(c < 1.0);

  // dense matrix of the quadrature operator, column by column
  ApplyPlan plan = make_apply_plan(k, g);
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    Field e{g, Array::Zero(n)};
    e.values[j] = 1.0;
    M.col(j) = -apply_quadrature(plan, e).values.matrix();
  }
  M.diagonal().array() += lambda;
  Eigen::VectorXd w = Eigen::PartialPivLU<Eigen::MatrixXd>(M)
                          .solve(f.values.matrix());
  CHECK((u.values - w.array()).abs().maxCoeff() <
        1e-6 * w.array().abs().maxCoeff());
}

TEST_CASE("picard reports divergence with a bad freeze point") {
  GridSpec g = make_grid(1, 128);
  KernelSpec k = make_xdep(0.8, 0.9, g.period);
  Field f = random_field(g, 0.7, 5);
  SolveOptions opts;
  opts.x_freeze = {1.5 * pi, 0.0};   // amplitude 0.1 there, up to 1.9 elsewhere
  bool threw = false;
  try {
    solve_variable(k, f, 1.0, nullptr, opts);
  } catch (const PicardDivergence& e) {
    threw = true;
    CHECK(e.trace.residuals.size() >= 3);
    CHECK_FALSE(e.trace.converged);
  }
  CHECK(threw);
}

TEST_CASE("picard tolerance controls the iteration count") {
  GridSpec g = make_grid(1, 128);
  KernelSpec k = make_xdep(1.2, 0.1, g.period);
  Field f = random_field(g, 0.7, 6);
  SolveOptions loose, tight;
  loose.tol = 1e-3;
  tight.tol = 1e-10;
  PicardTrace a, b;
  solve_variable(k, f, 3.0, &a, loose);
  solve_variable(k, f, 3.0, &b, tight);
  CHECK(a.iterations < b.iterations);
  CHECK(b.final_residual < 1e-10 * f.values.abs().maxCoeff());
}
