#include "nle/symbol.hpp"

#include "nle/special.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <map>
#include <mutex>

namespace nle {

namespace {

Real require_sigma_pairing(const KernelSpec& k) {
  // sigma = 1 evaluation relies on the validated cancellation condition
  if (k.sigma == 1.0) validate_kernel(k);
  return k.sigma;
}

Complex symbol_eval_1d(const KernelSpec& k, Real xi, const QuadOptions& o) {
  if (xi == 0.0) return 0.0;
  const Real kappa = std::abs(xi);
  const Point x0{0.0, 0.0};
  auto a_p = [&](Real r) { return k.amplitude(x0, {r, 0.0}); };
  auto a_m = [&](Real r) { return k.amplitude(x0, {-r, 0.0}); };
  const Complex m = (2.0 - k.sigma) *
                    radial::full_pair(k.sigma, kappa, a_p, a_m, k.truncated, o);
  return xi > 0.0 ? m : std::conj(m);
}

// 2d evaluation plan for untruncated kernels: the radial integral is exactly
// homogeneous, Phi(kappa) = |kappa|^sigma C_{sign kappa}, so the angular
// integral reduces to harmonic moments of A against |cos psi|^sigma.
struct Plan2d {
  Real sigma = 0.0;
  Complex c_plus;                 // one-sided radial constant at kappa = +1
  std::vector<Complex> a_hat;     // harmonics of A(theta), index 0..M
  std::vector<Real> h_m;          // 2 int_0^{pi/2} cos^sigma psi cos(m psi) dpsi
};

// cos^sigma has a cusp at pi/2; panels are graded geometrically toward it
// and subdivided for the cos(m psi) oscillation.
Real cusp_moment(Real sigma, int m) {
  auto f = [&](Real psi) {
    return std::pow(std::cos(psi), sigma) * std::cos(m * psi);
  };
  const int osc0 = std::max(1, int(std::ceil(m * (pi / 4.0) / 3.0)));
  Real acc = integrate_panels(f, 0.0, pi / 4.0, osc0, 16);
  const Real hi = pi / 2.0;
  Real width = pi / 4.0;
  Real lo = hi - width;
  for (int l = 0; l < 54; ++l) {
    width *= 0.5;
    const Real next = hi - width;
    const int osc = std::max(1, int(std::ceil(m * (next - lo) / 3.0)));
    acc += integrate_panels(f, lo, next, osc, 16);
    lo = next;
  }
  return 2.0 * acc;
}

Plan2d make_plan_2d(const KernelSpec& k, const QuadOptions& o) {
  Plan2d p;
  p.sigma = k.sigma;
  auto unit = [](Real) { return 1.0; };
  auto zero = [](Real) { return 0.0; };
  p.c_plus = radial::full_pair(k.sigma, 1.0, unit, zero, false, o);
  const int n_a = 256, m_max = 64;
  Eigen::VectorXcd samples(n_a);
  const Point x0{0.0, 0.0};
  for (int i = 0; i < n_a; ++i) {
    const Real th = two_pi * i / n_a;
    samples[i] = k.amplitude(x0, {std::cos(th), std::sin(th)});
  }
  Eigen::FFT<Real> fft;
  Eigen::VectorXcd hat(n_a);
  fft.fwd(hat, samples);
  hat /= Real(n_a);
  p.a_hat.resize(m_max + 1);
  p.h_m.resize(m_max + 1);
  for (int m = 0; m <= m_max; ++m) {
    p.a_hat[m] = hat[m];
    p.h_m[m] = cusp_moment(k.sigma, m);
  }
  return p;
}

Complex eval_plan_2d(const Plan2d& p, Real xi0, Real xi1) {
  const Real mag = std::hypot(xi0, xi1);
  if (mag == 0.0) return 0.0;
  const Real phi = std::atan2(xi1, xi0);
  const Complex c_minus = std::conj(p.c_plus);
  Complex acc = 0.0;
  for (size_t m = 0; m < p.a_hat.size(); ++m) {
    const Real sign = m % 2 == 0 ? 1.0 : -1.0;
    const Complex g = (p.c_plus + sign * c_minus) * p.h_m[m];
    if (m == 0) {
      acc += p.a_hat[0] * g;
    } else {
      // A is real, so the -m harmonic pairs up to 2 Re(A_m e^{im phi});
      // the moment g itself is shared by both (q is even in psi)
      const Complex e = std::exp(Complex(0.0, Real(m) * phi));
      acc += 2.0 * (p.a_hat[m] * e).real() * g;
    }
  }
  return (2.0 - p.sigma) * std::pow(mag, p.sigma) * acc;
}

Complex symbol_eval_2d_truncated(const KernelSpec& k, Real xi0, Real xi1,
                                 const QuadOptions& o) {
  const Real mag = std::hypot(xi0, xi1);
  if (mag == 0.0) return 0.0;
  const Real phi = std::atan2(xi1, xi0);
  const int n_th = 128;   // integrand analytic in theta: trapezoid converges fast
  const Point x0{0.0, 0.0};
  Complex acc = 0.0;
  for (int i = 0; i < n_th; ++i) {
    const Real th = two_pi * i / n_th;
    if (th >= pi) break;   // antipodal pair handled inside range_pair
    const Point e{std::cos(th), std::sin(th)};
    const Real kappa = mag * std::cos(th - phi);
    auto a_p = [&](Real r) { return k.amplitude(x0, {r * e[0], r * e[1]}); };
    auto a_m = [&](Real r) { return k.amplitude(x0, {-r * e[0], -r * e[1]}); };
    const Real kap = std::abs(kappa);
    Complex v;
    if (kap < 1e-13 * mag) {
      v = 0.0;   // radial integral vanishes with kappa
    } else if (kappa > 0.0) {
      v = radial::full_pair(k.sigma, kap, a_p, a_m, true, o);
    } else {
      // kappa < 0: the +e ray carries the conjugate phase, so the roles swap
      v = radial::full_pair(k.sigma, kap, a_m, a_p, true, o);
    }
    acc += v * (two_pi / n_th);
  }
  return (2.0 - k.sigma) * acc;
}

}  // namespace

Complex symbol_eval(const KernelSpec& k, const Point& xi, const QuadOptions& o) {
  if (k.x_dependent)
    throw std::invalid_argument("symbol_eval: kernel is x-dependent");
  require_sigma_pairing(k);
  if (k.dim == 1) return symbol_eval_1d(k, xi[0], o);
  if (k.truncated) return symbol_eval_2d_truncated(k, xi[0], xi[1], o);
  const Plan2d plan = make_plan_2d(k, o);
  return eval_plan_2d(plan, xi[0], xi[1]);
}

SymbolTable symbol_table(const KernelSpec& k, const GridSpec& g,
                         const QuadOptions& o) {
  if (k.x_dependent)
    throw std::invalid_argument("symbol_table: kernel is x-dependent");
  if (k.dim != g.dim)
    throw std::invalid_argument("symbol_table: kernel/grid dimension mismatch");
  validate(g);
  require_sigma_pairing(k);
  SymbolTable t{g, k.sigma, k.name, CArray::Zero(g.size())};
  const int n = g.n;
  const Real dxi = two_pi / g.period;
  if (g.dim == 1) {
    for (int i = 1; i <= n / 2; ++i) {
      const Complex m = symbol_eval_1d(k, dxi * i, o);
      if (i < n / 2) {
        t.m[i] = m;
        t.m[n - i] = std::conj(m);
      } else {
        t.m[i] = Complex(m.real(), 0.0);   // Nyquist pairs with itself
      }
    }
  } else {
    Plan2d plan;
    const bool use_plan = !k.truncated;
    if (use_plan) plan = make_plan_2d(k, o);
    for (int i0 = 0; i0 < n; ++i0) {
      const int k0 = freq_index(i0, n);
      for (int i1 = 0; i1 < n; ++i1) {
        const int k1 = freq_index(i1, n);
        if (!(k0 > 0 || (k0 == 0 && k1 > 0))) continue;   // canonical half
        const Complex m =
            use_plan ? eval_plan_2d(plan, dxi * k0, dxi * k1)
                     : symbol_eval_2d_truncated(k, dxi * k0, dxi * k1, o);
        const Eigen::Index a = flat(g, i0, i1);
        const int j0 = k0 == 0 ? 0 : n - i0;
        const int j1 = k1 == 0 ? 0 : n - i1;
        const Eigen::Index b = flat(g, j0, j1);
        if (b != a) {
          t.m[a] = m;
          t.m[b] = std::conj(m);
        } else {
          t.m[a] = Complex(m.real(), 0.0);
        }
      }
    }
  }
  // invariants: m(0) = 0 by construction; Re m <= 0 up to quadrature budget
  const Real slack = 10.0 * o.budget;
  for (Eigen::Index i = 0; i < t.m.size(); ++i) {
    const Real re = t.m[i].real();
    if (re > slack * (1.0 + std::abs(t.m[i])))
      throw InvalidKernel("symbol_table: Re m > 0 at entry " +
                          std::to_string(i) + " (" + std::to_string(re) + ")");
    if (re > 0.0) t.m[i] = Complex(0.0, t.m[i].imag());
  }
  return t;
}

namespace {
std::map<std::pair<Real, int>, Real>& fraclap_cache() {
  static std::map<std::pair<Real, int>, Real> cache;
  return cache;
}
std::mutex fraclap_mutex;
}  // namespace

Real calibrate_fraclap(Real sigma, int dim) {
  std::lock_guard<std::mutex> lock(fraclap_mutex);
  auto key = std::make_pair(sigma, dim);
  auto it = fraclap_cache().find(key);
  if (it != fraclap_cache().end()) return it->second;
  const KernelSpec unit = make_unit_kernel(sigma, dim);
  const Complex m = symbol_eval(unit, {1.0, 0.0});
  if (!(m.real() < 0.0) || std::abs(m.imag()) > 1e-10 * std::abs(m))
    throw InvalidKernel("calibrate_fraclap: unexpected unit symbol");
  // m is the unit-amplitude symbol, which carries the (2 - sigma) prefactor;
  // c is the bare kernel constant K = c / |y|^{d+sigma}.
  const Real c = -(2.0 - sigma) / m.real();
  fraclap_cache()[key] = c;
  return c;
}

KernelSpec make_fraclap(Real sigma, int dim) {
  const Real c = calibrate_fraclap(sigma, dim);
  KernelSpec k;
  k.sigma = sigma;
  k.dim = dim;
  const Real a = c / (2.0 - sigma);
  k.amplitude = [a](const Point&, const Point&) { return a; };
  k.nu = k.lambda_upper = a;
  k.name = "fraclap";
  validate_kernel(k);
  return k;
}

KernelSpec make_kernel(const std::string& name, Real sigma, int dim, Real eps,
                       Real period) {
  if (name == "fraclap") return make_fraclap(sigma, dim);
  if (name == "aniso2d") return make_aniso2d(sigma);
  if (name == "nonsym1d") return make_nonsym1d(sigma);
  if (name == "truncated") return make_truncated(sigma);
  if (name == "xdep") return make_xdep(sigma, eps, period);
  if (name == "unit") return make_unit_kernel(sigma, dim);
  throw std::invalid_argument("make_kernel: unknown kernel '" + name + "'");
}

}  // namespace nle
