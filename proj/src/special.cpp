#include "nle/special.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace nle {

namespace {

GaussRule compute_gauss_legendre(int order) {
  // Newton iteration on Legendre roots, symmetric about zero.
  GaussRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  for (int i = 0; i < (order + 1) / 2; ++i) {
    Real x = std::cos(pi * (i + 0.75) / (order + 0.5));
    Real dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      Real p0 = 1.0, p1 = x;
      for (int j = 2; j <= order; ++j) {
        const Real p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const Real dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[order - 1 - i] = x;
    const Real w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.weights[i] = w;
    rule.weights[order - 1 - i] = w;
  }
  return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int order) {
  if (order < 2 || order > 128)
    throw std::invalid_argument("gauss_legendre: order out of range");
  static std::map<int, GaussRule> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(order);
  if (it == cache.end())
    it = cache.emplace(order, compute_gauss_legendre(order)).first;
  return it->second;
}

Real hurwitz_zeta(Real s, Real q) {
  if (!(s > 1.0)) throw std::invalid_argument("hurwitz_zeta: s > 1 expected");
  if (!(q > 0.0)) throw std::invalid_argument("hurwitz_zeta: q > 0 expected");
  const int N = 12;
  Real acc = 0.0;
  for (int m = 0; m < N; ++m) acc += std::pow(q + m, -s);
  const Real Q = q + N;
  acc += std::pow(Q, 1.0 - s) / (s - 1.0);
  acc += 0.5 * std::pow(Q, -s);
  // Euler-Maclaurin correction: B_{2j}/(2j)! * (s)_{2j-1} * Q^{-s-2j+1}
  static const Real bern[] = {1.0 / 6, -1.0 / 30, 1.0 / 42,
                              -1.0 / 30, 5.0 / 66, -691.0 / 2730};
  Real rising = s;              // (s)_1
  Real fact = 2.0;              // (2j)!
  Real qpow = std::pow(Q, -s - 1.0);
  for (int j = 1; j <= 6; ++j) {
    acc += bern[j - 1] / fact * rising * qpow;
    // advance (s)_{2j-1} -> (s)_{2j+1}, (2j)! -> (2j+2)!, Q^{-s-2j+1} -> ...
    rising *= (s + 2 * j - 1) * (s + 2 * j);
    fact *= (2 * j + 1) * (2 * j + 2);
    qpow /= Q * Q;
  }
  return acc;
}

Complex osc_power_tail(Real nu, Real z0) {
  if (!(nu > 0.0)) throw std::invalid_argument("osc_power_tail: nu > 0");
  if (!(z0 > 0.0)) throw std::invalid_argument("osc_power_tail: z0 > 0");
  // integral_0^infty e^{-t} (z0 + it)^{-nu} dt over geometric panels; the
  // integrand decays like e^{-t} and |(z0+it)^{-nu}| <= z0^{-nu}.
  static const Real edges[] = {0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 48.0};
  const GaussRule& rule = gauss_legendre(24);
  Complex acc = 0.0;
  for (size_t p = 0; p + 1 < sizeof(edges) / sizeof(edges[0]); ++p) {
    const Real lo = edges[p], w = edges[p + 1] - edges[p];
    for (size_t i = 0; i < rule.nodes.size(); ++i) {
      const Real t = lo + 0.5 * w * (1.0 + rule.nodes[i]);
      acc += 0.5 * w * rule.weights[i] *
             std::exp(-t) * std::pow(Complex(z0, t), -nu);
    }
  }
  return Complex(0.0, 1.0) * std::exp(Complex(0.0, z0)) * acc;
}

}  // namespace nle
