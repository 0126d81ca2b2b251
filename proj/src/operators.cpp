#include "nle/operators.hpp"

#include "nle/radial.hpp"
#include "nle/special.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace nle {

namespace {

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* who) {
  if (!(a == b)) throw std::invalid_argument(std::string(who) + ": grid mismatch");
}

}  // namespace

Spectrum apply_symbol(const SymbolTable& t, const Spectrum& s) {
  require_same_grid(t.grid, s.grid, "apply_symbol");
  return Spectrum{s.grid, s.coeff * t.m};
}

Field apply_symbol(const SymbolTable& t, const Field& u) {
  return inverse(apply_symbol(t, transform(u)));
}

Field poisson_extend(const Field& u, Real y) {
  return extension_derivative(u, y, 0);
}

Field extension_derivative(const Field& u, Real y, int order) {
  if (y <= 0.0) throw std::invalid_argument("extension_derivative: y > 0");
  Spectrum s = transform(u);
  const Array mag = xi_magnitude(u.grid);
  for (Eigen::Index i = 0; i < s.coeff.size(); ++i) {
    Real mult = std::exp(-mag[i] * y);
    for (int j = 0; j < order; ++j) mult *= -mag[i];
    s.coeff[i] *= mult;
  }
  return inverse(s);
}

Field bump_window(const GridSpec& g, Real center, Real core, Real ramp) {
  validate(g);
  if (g.dim != 1) throw std::invalid_argument("bump_window: 1d grids only");
  if (core < 0.0 || ramp <= 0.0 || 2.0 * (core + ramp) > g.period)
    throw std::invalid_argument("bump_window: window does not fit the period");
  Field f{g, Array(g.n)};
  const Real h = g.spacing();
  for (int i = 0; i < g.n; ++i) {
    Real d = std::fmod(std::abs(i * h - center), g.period);
    d = std::min(d, g.period - d);
    if (d <= core)
      f.values[i] = 1.0;
    else if (d >= core + ramp)
      f.values[i] = 0.0;
    else
      f.values[i] = 0.5 * (1.0 + std::cos(pi * (d - core) / ramp));
  }
  return f;
}

Field commutator_spectral(const SymbolTable& t, const Field& u,
                          const Field& window) {
  require_same_grid(u.grid, window.grid, "commutator_spectral");
  const Field wu{u.grid, window.values * u.values};
  const Field lwu = apply_symbol(t, wu);
  const Field lu = apply_symbol(t, u);
  return Field{u.grid, lwu.values - window.values * lu.values};
}

// ---- barycentric evaluation on the oversampled grid --------------------

namespace {

std::vector<Real> bary_lambda(int p) {
  // (-1)^j binomial(p-1, j): the barycentric weights of equispaced nodes
  std::vector<Real> lam(p);
  Real b = 1.0;
  for (int j = 0; j < p; ++j) {
    lam[j] = (j % 2 == 0) ? b : -b;
    b = b * (p - 1 - j) / (j + 1);
  }
  return lam;
}

// Normalized stencil weights at fractional position tau in [0, p-1].
void bary_weights(const std::vector<Real>& lam, Real tau, Real* w) {
  const int p = int(lam.size());
  for (int j = 0; j < p; ++j) {
    const Real d = tau - j;
    if (std::abs(d) < 1e-12) {
      for (int l = 0; l < p; ++l) w[l] = 0.0;
      w[j] = 1.0;
      return;
    }
    w[j] = lam[j] / d;
  }
  Real sum = 0.0;
  for (int j = 0; j < p; ++j) sum += w[j];
  for (int j = 0; j < p; ++j) w[j] /= sum;
}

struct Interp1 {
  Array v;
  int n = 0;
  Real h = 0.0;
  int p = 10;
  std::vector<Real> lam;

  Interp1() = default;
  Interp1(const Field& fine, int stencil)
      : v(fine.values), n(fine.grid.n), h(fine.grid.spacing()), p(stencil),
        lam(bary_lambda(stencil)) {}

  Real eval(Real x) const {
    Real t = x / h;
    t -= std::floor(t / n) * n;   // into [0, n)
    const int c = int(std::floor(t));
    const int s = c - (p / 2 - 1);
    const Real tau = t - s;
    Real w[32];
    bary_weights(lam, tau, w);
    Real acc = 0.0;
    if (s >= 0 && s + p <= n) {
      const Real* base = v.data() + s;
      for (int j = 0; j < p; ++j) acc += w[j] * base[j];
    } else {
      for (int j = 0; j < p; ++j) acc += w[j] * v[((s + j) % n + n) % n];
    }
    return acc;
  }
};

struct Interp2 {
  Array v;   // axis-0 major, n x n
  int n = 0;
  Real h = 0.0;
  int p = 10;
  std::vector<Real> lam;

  Interp2() = default;
  Interp2(const Field& fine, int stencil)
      : v(fine.values), n(fine.grid.n), h(fine.grid.spacing()), p(stencil),
        lam(bary_lambda(stencil)) {}

  Real eval(Real x0, Real x1) const {
    Real t0 = x0 / h, t1 = x1 / h;
    t0 -= std::floor(t0 / n) * n;
    t1 -= std::floor(t1 / n) * n;
    const int c0 = int(std::floor(t0)), c1 = int(std::floor(t1));
    const int s0 = c0 - (p / 2 - 1), s1 = c1 - (p / 2 - 1);
    Real w0[32], w1[32];
    bary_weights(lam, t0 - s0, w0);
    bary_weights(lam, t1 - s1, w1);
    Real acc = 0.0;
    const bool in0 = s0 >= 0 && s0 + p <= n;
    const bool in1 = s1 >= 0 && s1 + p <= n;
    for (int j0 = 0; j0 < p; ++j0) {
      const int i0 = in0 ? s0 + j0 : ((s0 + j0) % n + n) % n;
      const Real* row = v.data() + Eigen::Index(i0) * n;
      Real racc = 0.0;
      if (in1) {
        const Real* base = row + s1;
        for (int j1 = 0; j1 < p; ++j1) racc += w1[j1] * base[j1];
      } else {
        for (int j1 = 0; j1 < p; ++j1)
          racc += w1[j1] * row[((s1 + j1) % n + n) % n];
      }
      acc += w0[j0] * racc;
    }
    return acc;
  }
};

int pair_dirs(Real max_phase) {
  // >= 6 theta nodes per oscillation cycle across the circle, at least 64
  const Real cycles = max_phase / two_pi;
  int n_th = std::max(64, 2 * int(std::ceil(3.0 * cycles)));
  return n_th / 2;
}

}  // namespace

ApplyPlan make_apply_plan(const KernelSpec& k, const GridSpec& g,
                          const ApplyOptions& opts) {
  validate(g);
  if (k.dim != g.dim)
    throw std::invalid_argument("make_apply_plan: kernel/grid dimension mismatch");
  if (!k.amplitude) throw std::invalid_argument("make_apply_plan: no amplitude");
  if (k.dim == 2 && k.x_dependent)
    throw std::invalid_argument(
        "make_apply_plan: x-dependent amplitudes unsupported in 2d");
  if (opts.taylor_orders < 4 || opts.taylor_orders > 15 ||
      opts.stencil < 4 || opts.stencil > 31 || opts.oversample < 2)
    throw std::invalid_argument("make_apply_plan: options out of range");
  if (k.sigma == 1.0) validate_kernel(k);

  ApplyPlan plan;
  plan.kernel = k;
  plan.grid = g;
  plan.opts = opts;
  const Real h = g.spacing();
  const Real k_top = pi / h * (g.dim == 2 ? std::sqrt(2.0) : 1.0);
  plan.delta = opts.delta_scale * 0.5 / k_top;
  if (k.truncated) {
    plan.mid_end = 1.0;
    plan.has_tail = false;
  } else {
    plan.mid_end = opts.tail_start_factor * g.period;
    plan.has_tail = true;
  }
  if (plan.delta >= plan.mid_end)
    throw std::invalid_argument("make_apply_plan: degenerate radial layout");

  // shared middle-region nodes: per octave, panels sized to the worst-case
  // oscillation of band-limited data
  const GaussRule& rule = gauss_legendre(16);
  Real a = plan.delta;
  while (a < plan.mid_end * (1.0 - 1e-14)) {
    const Real b = std::min(2.0 * a, plan.mid_end);
    const Real cycles = (b - a) * k_top / two_pi;
    const int panels =
        std::max(2, int(std::ceil(cycles * opts.nodes_per_cycle / 16.0)));
    const Real w = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
      const Real lo = a + p * w;
      for (size_t i = 0; i < rule.nodes.size(); ++i) {
        const Real r = lo + 0.5 * w * (1.0 + rule.nodes[i]);
        plan.mid_r.push_back(r);
        plan.mid_w.push_back(0.5 * w * rule.weights[i] *
                             std::pow(r, -1.0 - k.sigma));
      }
    }
    a = b;
  }

  const Point x0{0.0, 0.0};
  const QuadOptions qo;
  const Real dxi = two_pi / g.period;

  if (g.dim == 1) {
    if (!k.x_dependent) {
      plan.amp_p.resize(plan.mid_r.size());
      plan.amp_m.resize(plan.mid_r.size());
      for (size_t j = 0; j < plan.mid_r.size(); ++j) {
        plan.amp_p[j] = k.amplitude(x0, {plan.mid_r[j], 0.0});
        plan.amp_m[j] = k.amplitude(x0, {-plan.mid_r[j], 0.0});
      }
    }
    if (plan.has_tail) {
      plan.tau = CArray::Zero(g.n);
      auto unit = [](Real) { return 1.0; };
      auto zero = [](Real) { return 0.0; };
      for (int i = 1; i <= g.n / 2; ++i) {
        const Complex t = radial::range_pair(k.sigma, dxi * i, unit, zero,
                                             plan.mid_end, false, qo);
        plan.tau[i] = t;
        if (i < g.n / 2) plan.tau[g.n - i] = std::conj(t);
      }
    }
  } else {
    const int pairs = pair_dirs(plan.mid_end * k_top);
    const Real dth = pi / pairs;
    plan.dirs.resize(pairs);
    plan.amp_dir_p.resize(pairs);
    plan.amp_dir_m.resize(pairs);
    for (int i = 0; i < pairs; ++i) {
      const Real th = i * dth;
      plan.dirs[i] = {std::cos(th), std::sin(th)};
      plan.amp_dir_p[i].resize(plan.mid_r.size());
      plan.amp_dir_m[i].resize(plan.mid_r.size());
      for (size_t j = 0; j < plan.mid_r.size(); ++j) {
        const Real r = plan.mid_r[j];
        plan.amp_dir_p[i][j] =
            k.amplitude(x0, {r * plan.dirs[i][0], r * plan.dirs[i][1]});
        plan.amp_dir_m[i][j] =
            k.amplitude(x0, {-r * plan.dirs[i][0], -r * plan.dirs[i][1]});
      }
    }
    if (plan.has_tail) {
      plan.tau = CArray::Zero(g.size());
      const Real far = 2.0 * plan.mid_end;
      for (int i0 = 0; i0 < g.n; ++i0) {
        const int f0 = freq_index(i0, g.n);
        for (int i1 = 0; i1 < g.n; ++i1) {
          const int f1 = freq_index(i1, g.n);
          if (!(f0 > 0 || (f0 == 0 && f1 > 0))) continue;
          const Real xi0 = dxi * f0, xi1 = dxi * f1;
          const Real mag = std::hypot(xi0, xi1);
          const int tail_pairs = pair_dirs(2.0 * plan.mid_end * mag);
          Complex acc = 0.0;
          for (int i = 0; i < tail_pairs; ++i) {
            const Real th = i * pi / tail_pairs;
            const Point e{std::cos(th), std::sin(th)};
            const Real kap = xi0 * e[0] + xi1 * e[1];
            if (std::abs(kap) < 1e-13 * mag) continue;
            const Real ap = k.amplitude(x0, {far * e[0], far * e[1]});
            const Real am = k.amplitude(x0, {-far * e[0], -far * e[1]});
            auto fp = [ap](Real) { return ap; };
            auto fm = [am](Real) { return am; };
            const Complex v =
                kap > 0.0 ? radial::range_pair(k.sigma, kap, fp, fm,
                                               plan.mid_end, false, qo)
                          : radial::range_pair(k.sigma, -kap, fm, fp,
                                               plan.mid_end, false, qo);
            acc += v * (pi / tail_pairs);
          }
          const Eigen::Index ia = flat(g, i0, i1);
          const int j0 = f0 == 0 ? 0 : g.n - i0;
          const int j1 = f1 == 0 ? 0 : g.n - i1;
          const Eigen::Index ib = flat(g, j0, j1);
          plan.tau[ia] = acc;
          if (ib != ia) plan.tau[ib] = std::conj(acc);
        }
      }
    }
  }
  return plan;
}

namespace {

// Inner-series coefficients delta^{k-sigma} / (k! (k-sigma)); k = 1 is
// dropped at sigma >= 1 (compensated / cancelled by pairing).
std::vector<Real> inner_coeffs(Real sigma, Real delta, int orders) {
  std::vector<Real> c(orders + 1, 0.0);
  Real fact = 1.0;
  for (int k = 1; k <= orders; ++k) {
    fact *= k;
    if (k == 1 && sigma >= 1.0) continue;
    c[k] = std::pow(delta, k - sigma) / (fact * (k - sigma));
  }
  return c;
}

struct Fields1 {
  std::vector<Array> deriv;   // deriv[k], k = 1..K
  Interp1 fine;
  Array tail_p, tail_m;
};

Fields1 prepare_1d(const ApplyPlan& plan, const Field& u) {
  Fields1 f;
  const Spectrum s = transform(u);
  f.deriv.resize(plan.opts.taylor_orders + 1);
  for (int k = 1; k <= plan.opts.taylor_orders; ++k)
    f.deriv[k] = inverse(derivative(s, k)).values;
  f.fine = Interp1(inverse(refine(s, plan.opts.oversample)), plan.opts.stencil);
  if (plan.has_tail) {
    f.tail_p = inverse(Spectrum{u.grid, s.coeff * plan.tau}).values;
    f.tail_m = inverse(Spectrum{u.grid, s.coeff * plan.tau.conjugate()}).values;
  }
  return f;
}

}  // namespace

Field apply_quadrature(const ApplyPlan& plan, const Field& u) {
  require_same_grid(plan.grid, u.grid, "apply_quadrature");
  if (plan.grid.dim == 2) {
    std::vector<Eigen::Index> sites(u.grid.size());
    for (Eigen::Index i = 0; i < u.grid.size(); ++i) sites[i] = i;
    return Field{u.grid, apply_quadrature_at(plan, u, sites)};
  }

  const KernelSpec& k = plan.kernel;
  const Real sigma = k.sigma;
  const bool chi = sigma > 1.0;
  const int k0 = sigma < 1.0 ? 1 : 2;
  const Fields1 f = prepare_1d(plan, u);
  const std::vector<Real> c =
      inner_coeffs(sigma, plan.delta, plan.opts.taylor_orders);
  const Real h = u.grid.spacing();
  const Real rin = 0.5 * plan.delta;
  const Real rfar = 2.0 * plan.mid_end;
  const size_t nodes = plan.mid_r.size();

  Field out{u.grid, Array(u.grid.n)};
  for (int i = 0; i < u.grid.n; ++i) {
    const Real x = i * h;
    const Point xp{x, 0.0};
    const Real ux = u.values[i];
    const Real d1 = f.deriv[1][i];

    const Real ap_in = k.amplitude(xp, {rin, 0.0});
    const Real am_in = k.amplitude(xp, {-rin, 0.0});

    Real inner = 0.0;
    for (int q = k0; q <= plan.opts.taylor_orders; ++q) {
      if (c[q] == 0.0) continue;
      const Real pair = q % 2 == 0 ? ap_in + am_in : ap_in - am_in;
      inner += pair * f.deriv[q][i] * c[q];
    }

    Real mid = 0.0;
    if (k.x_dependent) {
      for (size_t j = 0; j < nodes; ++j) {
        const Real r = plan.mid_r[j];
        const Real up = f.fine.eval(x + r) - ux - (chi ? r * d1 : 0.0);
        const Real um = f.fine.eval(x - r) - ux + (chi ? r * d1 : 0.0);
        mid += plan.mid_w[j] * (k.amplitude(xp, {r, 0.0}) * up +
                                k.amplitude(xp, {-r, 0.0}) * um);
      }
    } else {
      for (size_t j = 0; j < nodes; ++j) {
        const Real r = plan.mid_r[j];
        const Real up = f.fine.eval(x + r) - ux - (chi ? r * d1 : 0.0);
        const Real um = f.fine.eval(x - r) - ux + (chi ? r * d1 : 0.0);
        mid += plan.mid_w[j] * (plan.amp_p[j] * up + plan.amp_m[j] * um);
      }
    }

    Real tail = 0.0;
    if (plan.has_tail) {
      const Real afp = k.amplitude(xp, {rfar, 0.0});
      const Real afm = k.amplitude(xp, {-rfar, 0.0});
      tail = afp * f.tail_p[i] + afm * f.tail_m[i];
    }

    out.values[i] = (2.0 - sigma) * (inner + mid + tail);
  }
  return out;
}

Field apply_quadrature(const KernelSpec& k, const Field& u,
                       const ApplyOptions& opts) {
  return apply_quadrature(make_apply_plan(k, u.grid, opts), u);
}

Array apply_quadrature_at(const ApplyPlan& plan, const Field& u,
                          const std::vector<Eigen::Index>& sites) {
  require_same_grid(plan.grid, u.grid, "apply_quadrature_at");
  if (plan.grid.dim == 1) {
    const Field full = apply_quadrature(plan, u);
    Array out(sites.size());
    for (size_t i = 0; i < sites.size(); ++i) out[i] = full.values[sites[i]];
    return out;
  }

  const KernelSpec& k = plan.kernel;
  const Real sigma = k.sigma;
  const bool chi = sigma > 1.0;
  const int k0 = sigma < 1.0 ? 1 : 2;
  const int K = plan.opts.taylor_orders;
  const int n = u.grid.n;
  const Real h = u.grid.spacing();

  const Spectrum s = transform(u);
  // mixed partials P[j][l], j + l <= K
  std::vector<std::vector<Array>> P(K + 1);
  for (int j = 0; j <= K; ++j) {
    P[j].resize(K - j + 1);
    for (int l = 0; l <= K - j; ++l)
      if (j + l >= 1) P[j][l] = inverse(derivative(s, j, l)).values;
  }
  const Interp2 fine(inverse(refine(s, plan.opts.oversample)),
                     plan.opts.stencil);
  Array tail;
  if (plan.has_tail)
    tail = inverse(Spectrum{u.grid, s.coeff * plan.tau}).values;

  const std::vector<Real> c = inner_coeffs(sigma, plan.delta, K);
  // binomials up to K
  std::vector<std::vector<Real>> binom(K + 1, std::vector<Real>(K + 1, 0.0));
  for (int a = 0; a <= K; ++a) {
    binom[a][0] = 1.0;
    for (int b = 1; b <= a; ++b)
      binom[a][b] = binom[a - 1][b - 1] + (b <= a - 1 ? binom[a - 1][b] : 0.0);
  }

  const int pairs = int(plan.dirs.size());
  const Real dth = pi / pairs;
  const size_t nodes = plan.mid_r.size();

  Array out(sites.size());
  for (size_t si = 0; si < sites.size(); ++si) {
    const Eigen::Index a = sites[si];
    const int i0 = int(a / n), i1 = int(a % n);
    const Real x0 = i0 * h, x1 = i1 * h;
    const Real ux = u.values[a];
    const Real g0 = P[1][0][a], g1 = P[0][1][a];

    Real acc = 0.0;
    for (int t = 0; t < pairs; ++t) {
      const Real e0 = plan.dirs[t][0], e1 = plan.dirs[t][1];
      // directional derivatives via the binomial expansion
      Real e0p[16], e1p[16];
      e0p[0] = e1p[0] = 1.0;
      for (int q = 1; q <= K; ++q) {
        e0p[q] = e0p[q - 1] * e0;
        e1p[q] = e1p[q - 1] * e1;
      }
      Real inner = 0.0;
      for (int q = k0; q <= K; ++q) {
        if (c[q] == 0.0) continue;
        Real dq = 0.0;
        for (int j = 0; j <= q; ++j)
          dq += binom[q][j] * e0p[j] * e1p[q - j] * P[j][q - j][a];
        const Real pair = q % 2 == 0 ? plan.amp_dir_p[t][0] + plan.amp_dir_m[t][0]
                                     : plan.amp_dir_p[t][0] - plan.amp_dir_m[t][0];
        inner += pair * dq * c[q];
      }

      const Real ge = e0 * g0 + e1 * g1;
      Real mid = 0.0;
      for (size_t j = 0; j < nodes; ++j) {
        const Real r = plan.mid_r[j];
        const Real up = fine.eval(x0 + r * e0, x1 + r * e1) - ux -
                        (chi ? r * ge : 0.0);
        const Real um = fine.eval(x0 - r * e0, x1 - r * e1) - ux +
                        (chi ? r * ge : 0.0);
        mid += plan.mid_w[j] *
               (plan.amp_dir_p[t][j] * up + plan.amp_dir_m[t][j] * um);
      }
      acc += dth * (inner + mid);
    }
    if (plan.has_tail) acc += tail[a];
    out[si] = (2.0 - sigma) * acc;
  }
  return out;
}

Array apply_to_function(const KernelSpec& k,
                        const std::function<Real(Real)>& u, const Array& x) {
  if (k.dim != 1) throw std::invalid_argument("apply_to_function: 1d only");
  if (k.x_dependent)
    throw std::invalid_argument("apply_to_function: x-independent only");
  for (Real r : {0.3, 1.0, 3.7}) {
    const Real ap = k.amplitude({0.0, 0.0}, {r, 0.0});
    const Real am = k.amplitude({0.0, 0.0}, {-r, 0.0});
    if (std::abs(ap - am) > 1e-12 * (std::abs(ap) + 1.0))
      throw std::invalid_argument("apply_to_function: symmetric kernels only");
  }
  const Real sigma = k.sigma;
  const Real delta = 0.1;

  Array out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const Real xi = x[i];
    const Real ux = u(xi);
    const Real hd = 1e-3;
    const Real d2 = (-u(xi + 2 * hd) + 16 * u(xi + hd) - 30 * ux +
                     16 * u(xi - hd) - u(xi - 2 * hd)) /
                    (12 * hd * hd);
    const Real hq = 1e-2;
    const Real d4 = (u(xi + 2 * hq) - 4 * u(xi + hq) + 6 * ux -
                     4 * u(xi - hq) + u(xi - 2 * hq)) /
                    (hq * hq * hq * hq);
    Real acc = d2 * std::pow(delta, 2.0 - sigma) / (2.0 - sigma) *
                   k.amplitude({xi, 0.0}, {0.5 * delta, 0.0}) +
               d4 * std::pow(delta, 4.0 - sigma) / (12.0 * (4.0 - sigma)) *
                   k.amplitude({xi, 0.0}, {0.5 * delta, 0.0});

    Real r_max = 64.0;
    while (r_max < std::abs(xi) + 40.0) r_max *= 2.0;
    if (k.truncated) r_max = 1.0;
    Real a = delta;
    while (a < r_max * (1.0 - 1e-14)) {
      const Real b = std::min(2.0 * a, r_max);
      const int panels = std::max(2, int(std::ceil((b - a) / 0.7)));
      acc += integrate_panels(
          [&](Real r) {
            const Real amp = k.amplitude({xi, 0.0}, {r, 0.0});
            return amp * (u(xi + r) + u(xi - r) - 2.0 * ux) *
                   std::pow(r, -1.0 - sigma);
          },
          a, b, panels, 16);
      a = b;
    }
    if (!k.truncated)
      acc -= 2.0 * ux * k.amplitude({xi, 0.0}, {r_max, 0.0}) *
             std::pow(r_max, -sigma) / sigma;
    out[i] = (2.0 - sigma) * acc;
  }
  return out;
}

}  // namespace nle
