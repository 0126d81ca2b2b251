#include "nle/norms.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace nle {

namespace {

constexpr int kDirs2d[8][2] = {{1, 0}, {0, 1},  {1, 1}, {1, -1},
                               {2, 1}, {1, 2}, {2, -1}, {1, -2}};

// max_i |v[i+j] - v[i]| for each offset j = 0..j_max (periodic)
std::vector<Real> offset_maxdiff(const Array& v, int n, int j_max) {
  std::vector<Real> out(j_max + 1, 0.0);
  for (int j = 1; j <= j_max; ++j) {
    Real m = 0.0;
    for (int i = 0; i < n; ++i) {
      const int l = i + j < n ? i + j : i + j - n;
      m = std::max(m, std::abs(v[l] - v[i]));
    }
    out[j] = m;
  }
  return out;
}

Real maxdiff_2d(const Array& v, int n, int o0, int o1) {
  const auto wrap = [n](int i) { return ((i % n) + n) % n; };
  Real m = 0.0;
  for (int i0 = 0; i0 < n; ++i0) {
    const int l0 = wrap(i0 + o0);
    for (int i1 = 0; i1 < n; ++i1) {
      const int l1 = wrap(i1 + o1);
      m = std::max(m, std::abs(v[Eigen::Index(l0) * n + l1] -
                               v[Eigen::Index(i0) * n + i1]));
    }
  }
  return m;
}

Real second_maxdiff_2d(const Array& v, int n, int o0, int o1) {
  const auto wrap = [n](int i) { return ((i % n) + n) % n; };
  Real m = 0.0;
  for (int i0 = 0; i0 < n; ++i0) {
    const int p0 = wrap(i0 + o0), q0 = wrap(i0 - o0);
    for (int i1 = 0; i1 < n; ++i1) {
      const int p1 = wrap(i1 + o1), q1 = wrap(i1 - o1);
      m = std::max(m, std::abs(v[Eigen::Index(p0) * n + p1] -
                               2.0 * v[Eigen::Index(i0) * n + i1] +
                               v[Eigen::Index(q0) * n + q1]));
    }
  }
  return m;
}

void require_field(const Field& u, const char* who) {
  validate(u.grid);
  if (u.values.size() != u.grid.size())
    throw std::invalid_argument(std::string(who) + ": field/grid mismatch");
}

}  // namespace

Real sup_norm(const Field& u) {
  require_field(u, "sup_norm");
  return u.values.abs().maxCoeff();
}

Real holder_seminorm(const Field& u, Real alpha) {
  require_field(u, "holder_seminorm");
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw std::invalid_argument("holder_seminorm: alpha in (0, 1]");
  const Real h = u.grid.spacing();
  Real best = 0.0;
  if (u.grid.dim == 1) {
    const int n = u.grid.n;
    const auto md = offset_maxdiff(u.values, n, n / 2);
    for (int j = 1; j <= n / 2; ++j)
      best = std::max(best, md[j] / std::pow(j * h, alpha));
  } else {
    const int n = u.grid.n;
    for (const auto& d : kDirs2d) {
      const Real step = h * std::hypot(Real(d[0]), Real(d[1]));
      for (int m = 1; m * step <= u.grid.period / 4.0; m *= 2) {
        const Real diff = maxdiff_2d(u.values, n, m * d[0], m * d[1]);
        best = std::max(best, diff / std::pow(m * step, alpha));
      }
    }
  }
  return best;
}

Real zygmund_seminorm(const Field& u) {
  require_field(u, "zygmund_seminorm");
  const Real h = u.grid.spacing();
  const int n = u.grid.n;
  Real best = 0.0;
  if (u.grid.dim == 1) {
    for (int j = 1; j * h <= u.grid.period / 4.0; j *= 2) {
      Real m = 0.0;
      for (int i = 0; i < n; ++i) {
        const int p = (i + j) % n, q = (i - j + n) % n;
        m = std::max(m, std::abs(u.values[p] - 2.0 * u.values[i] + u.values[q]));
      }
      best = std::max(best, m / (j * h));
    }
  } else {
    for (const auto& d : kDirs2d) {
      const Real step = h * std::hypot(Real(d[0]), Real(d[1]));
      for (int m = 1; m * step <= u.grid.period / 4.0; m *= 2)
        best = std::max(best, second_maxdiff_2d(u.values, n, m * d[0], m * d[1]) /
                                  (m * step));
    }
  }
  return best;
}

Real extension_norm(const Field& u, Real s) {
  require_field(u, "extension_norm");
  if (!(s > 0.0)) throw std::invalid_argument("extension_norm: s > 0");
  const int k = int(std::floor(s)) + 1;
  const Spectrum sp = transform(u);
  const Array mag = xi_magnitude(u.grid);
  const Real h = u.grid.spacing();
  Real best = 0.0;
  for (Real y = 0.25 * h; y <= u.grid.period; y *= std::sqrt(2.0)) {
    Spectrum sy{u.grid, CArray(sp.coeff.size())};
    for (Eigen::Index i = 0; i < sp.coeff.size(); ++i) {
      Real mult = std::exp(-mag[i] * y);
      for (int j = 0; j < k; ++j) mult *= -mag[i];
      sy.coeff[i] = sp.coeff[i] * mult;
    }
    const Field slice = inverse(sy);
    best = std::max(best,
                    std::pow(y, k - s) * slice.values.abs().maxCoeff());
  }
  return best;
}

Real campanato_seminorm(const Field& u, Real alpha) {
  require_field(u, "campanato_seminorm");
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw std::invalid_argument("campanato_seminorm: alpha in (0, 1]");
  const Real h = u.grid.spacing();
  const int n = u.grid.n;
  Real best = 0.0;
  if (u.grid.dim == 1) {
    // tripled prefix sums: windows centered on the middle copy reach up to
    // i + n + w with i < n, w <= n/4
    std::vector<Real> s1(3 * n + 1, 0.0), s2(3 * n + 1, 0.0);
    for (int i = 0; i < 3 * n; ++i) {
      const Real v = u.values[i % n];
      s1[i + 1] = s1[i] + v;
      s2[i + 1] = s2[i] + v * v;
    }
    for (int w = 1; w * h <= u.grid.period / 4.0; w *= 2) {
      const Real r = w * h;
      const int len = 2 * w + 1;
      for (int i = 0; i < n; ++i) {
        const int lo = i + n - w, hi = i + n + w + 1;
        const Real mean = (s1[hi] - s1[lo]) / len;
        const Real msq = (s2[hi] - s2[lo]) / len;
        const Real dev = std::sqrt(std::max(0.0, msq - mean * mean));
        best = std::max(best, dev / std::pow(r, alpha));
      }
    }
  } else {
    // tripled summed-area tables; square windows, subsampled centers
    const int N = 3 * n;
    std::vector<Real> s1((N + 1) * (N + 1), 0.0), s2((N + 1) * (N + 1), 0.0);
    auto at = [N](std::vector<Real>& s, int i, int j) -> Real& {
      return s[Eigen::Index(i) * (N + 1) + j];
    };
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        const Real v = u.values[Eigen::Index(i % n) * n + (j % n)];
        at(s1, i + 1, j + 1) = v + at(s1, i, j + 1) + at(s1, i + 1, j) -
                               at(s1, i, j);
        at(s2, i + 1, j + 1) = v * v + at(s2, i, j + 1) + at(s2, i + 1, j) -
                               at(s2, i, j);
      }
    auto window = [&](std::vector<Real>& s, int i, int j, int w) {
      const int lo0 = i + n - w, hi0 = i + n + w + 1;
      const int lo1 = j + n - w, hi1 = j + n + w + 1;
      return at(s, hi0, hi1) - at(s, lo0, hi1) - at(s, hi0, lo1) +
             at(s, lo0, lo1);
    };
    const int stride = std::max(1, n / 64);
    for (int w = 1; w * h <= u.grid.period / 4.0; w *= 2) {
      const Real r = w * h;
      const Real cnt = Real(2 * w + 1) * (2 * w + 1);
      for (int i = 0; i < n; i += stride)
        for (int j = 0; j < n; j += stride) {
          const Real mean = window(s1, i, j, w) / cnt;
          const Real msq = window(s2, i, j, w) / cnt;
          const Real dev = std::sqrt(std::max(0.0, msq - mean * mean));
          best = std::max(best, dev / std::pow(r, alpha));
        }
    }
  }
  return best;
}

Real log_lipschitz_seminorm(const Field& u) {
  require_field(u, "log_lipschitz_seminorm");
  const Real h = u.grid.spacing();
  const Real cap = std::min(0.5, u.grid.period / 4.0);
  Real best = 0.0;
  if (u.grid.dim == 1) {
    const int n = u.grid.n;
    const int j_max = std::max(1, int(cap / h));
    const auto md = offset_maxdiff(u.values, n, std::min(j_max, n / 2));
    for (size_t j = 1; j < md.size(); ++j) {
      const Real d = j * h;
      if (d > cap) break;
      best = std::max(best, md[j] / (d * (1.0 - std::log(d))));
    }
  } else {
    const int n = u.grid.n;
    for (const auto& d : kDirs2d) {
      const Real step = h * std::hypot(Real(d[0]), Real(d[1]));
      for (int m = 1; m * step <= cap; m *= 2) {
        const Real dist = m * step;
        best = std::max(best, maxdiff_2d(u.values, n, m * d[0], m * d[1]) /
                                  (dist * (1.0 - std::log(dist))));
      }
    }
  }
  return best;
}

ModulusData modulus_of_continuity(const Field& u) {
  require_field(u, "modulus_of_continuity");
  const Real h = u.grid.spacing();
  std::vector<Real> radii, omega;
  if (u.grid.dim == 1) {
    const int n = u.grid.n;
    const int j_max = n / 4;
    const auto md = offset_maxdiff(u.values, n, j_max);
    Real running = 0.0;
    int j = 1;
    for (int l = 0; (1 << l) <= j_max; ++l) {
      const int target = 1 << l;
      for (; j <= target; ++j) running = std::max(running, md[j]);
      radii.push_back(target * h);
      omega.push_back(running);
    }
  } else {
    const int n = u.grid.n;
    std::vector<std::pair<Real, Real>> samples;   // (distance, maxdiff)
    for (const auto& d : kDirs2d) {
      const Real step = h * std::hypot(Real(d[0]), Real(d[1]));
      for (int m = 1; m * step <= u.grid.period / 4.0; m *= 2)
        samples.emplace_back(m * step,
                             maxdiff_2d(u.values, n, m * d[0], m * d[1]));
    }
    for (int l = 0; (1 << l) * h <= u.grid.period / 4.0; ++l) {
      const Real r = (1 << l) * h;
      Real m = 0.0;
      for (const auto& s : samples)
        if (s.first <= r * (1.0 + 1e-12)) m = std::max(m, s.second);
      radii.push_back(r);
      omega.push_back(m);
    }
    for (size_t i = 1; i < omega.size(); ++i)
      omega[i] = std::max(omega[i], omega[i - 1]);
  }
  ModulusData out;
  out.radii = Eigen::Map<Array>(radii.data(), radii.size());
  out.omega = Eigen::Map<Array>(omega.data(), omega.size());
  return out;
}

DiniResult dini_integral(const ModulusData& m) {
  const Eigen::Index L = m.radii.size();
  if (L < 3 || m.omega.size() != L)
    throw std::invalid_argument("dini_integral: need at least 3 dyadic samples");
  DiniResult out;
  Real acc = 0.0;
  std::vector<Real> gammas;
  for (Eigen::Index l = 1; l < L; ++l) {
    const Real w0 = m.omega[l - 1], w1 = m.omega[l];
    if (w1 <= 0.0) continue;
    if (w0 <= 0.0) {
      acc += w1;   // crude cell bound; only reachable for degenerate data
      continue;
    }
    const Real gamma = std::log2(w1 / w0);
    if (l <= 3) gammas.push_back(gamma);
    acc += std::abs(gamma) < 1e-9 ? w1 * std::log(2.0)
                                  : w1 * (1.0 - std::pow(2.0, -gamma)) / gamma;
  }
  Real fitted = 1.0;
  if (!gammas.empty()) {
    fitted = 0.0;
    for (Real g : gammas) fitted += g;
    fitted /= gammas.size();
  }
  out.fitted_gamma = fitted;
  if (m.omega[0] <= 0.0) {
    out.convergent = true;
    out.integral = acc;
    return out;
  }
  if (fitted >= 0.05) {
    out.convergent = true;
    out.integral = acc + m.omega[0] / fitted;
  } else {
    out.convergent = false;
    out.integral = acc;
  }
  return out;
}

Real dini_sum(const std::function<Real(Real)>& omega, Real decay, Real scale,
              Real r) {
  if (!(decay > 0.0 && decay < 1.0) || !(scale > 0.0 && scale <= 1.0))
    throw std::invalid_argument("dini_sum: decay in (0,1), scale in (0,1]");
  Real acc = 0.0, factor = 1.0, prev = -1.0, ratio = decay;
  for (int j = 0; j < 400; ++j) {
    const Real term = factor * omega(std::pow(scale, j) * r);
    acc += term;
    if (prev > 0.0 && term > 0.0) ratio = term / prev;
    if (term <= 1e-15 * (std::abs(acc) + 1e-300)) {
      return acc;
    }
    if (j > 8 && ratio < 1.0 && term / (1.0 - ratio) <= 1e-14 * std::abs(acc))
      return acc + term * ratio / (1.0 - ratio);
    prev = term;
    factor *= decay;
  }
  if (ratio < 1.0) acc += prev * ratio / (1.0 - ratio);
  return acc;
}

Real dyadic_quotient_ratio(const Field& u, Real alpha) {
  require_field(u, "dyadic_quotient_ratio");
  if (u.grid.dim != 1)
    throw std::invalid_argument("dyadic_quotient_ratio: 1d fields");
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw std::invalid_argument("dyadic_quotient_ratio: alpha in (0, 1]");
  const int n = u.grid.n;
  const Real h = u.grid.spacing();
  const auto md = offset_maxdiff(u.values, n, n / 2);
  Real all = 0.0, dyadic = 0.0, running = 0.0;
  for (int j = 1; j <= n / 2; ++j) {
    running = std::max(running, md[j]);
    const Real q = running / std::pow(j * h, alpha);
    all = std::max(all, q);
    if ((j & (j - 1)) == 0) dyadic = std::max(dyadic, q);
  }
  return dyadic > 0.0 ? all / dyadic : 1.0;
}

NormReport norm_report(const Field& u, Real alpha) {
  NormReport r;
  r.alpha = alpha;
  r.sup_norm = sup_norm(u);
  r.holder = holder_seminorm(u, alpha);
  r.zygmund_secdiff = zygmund_seminorm(u);
  r.zygmund_ext = extension_norm(u, 1.0);
  r.campanato = campanato_seminorm(u, alpha);
  r.log_lip = log_lipschitz_seminorm(u);
  return r;
}

}  // namespace nle
