#include "nle/kernel.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace nle {

CompensatorKind compensator(Real sigma) {
  if (sigma < 1.0) return CompensatorKind::none;
  if (sigma == 1.0) return CompensatorKind::unit_ball;
  return CompensatorKind::full;
}

Real kernel_value(const KernelSpec& k, const Point& x, const Point& y) {
  const Real r = norm(y);
  if (r <= 0.0) throw std::invalid_argument("kernel_value: y = 0");
  return (2.0 - k.sigma) * k.amplitude(x, y) /
         std::pow(r, k.dim + k.sigma);
}

namespace {

Real frac(Real v) { return v - std::floor(v); }

std::string point_str(const Point& p, int dim) {
  std::ostringstream os;
  os << "(" << p[0];
  if (dim == 2) os << ", " << p[1];
  os << ")";
  return os.str();
}

}  // namespace

EllipticityReport ellipticity_check(const KernelSpec& k, int sample_count) {
  if (sample_count < 1) throw std::invalid_argument("ellipticity_check: count");
  // Kronecker sequence with independent irrational strides per coordinate.
  const Real s1 = 0.6180339887498949, s2 = 0.41421356237309515,
             s3 = 0.7320508075688772, s4 = 0.2360679774997897;
  const Real tol = 1e-12;
  EllipticityReport rep;
  Real lo = std::numeric_limits<Real>::infinity(), hi = 0.0;
  for (int i = 1; i <= sample_count; ++i) {
    Point x{two_pi * frac(i * s1), k.dim == 2 ? two_pi * frac(i * s4) : 0.0};
    const Real l = -10.0 + 13.0 * frac(i * s2);   // radii 2^-10 .. 2^3
    const Real r = std::pow(2.0, l);
    Point y;
    if (k.dim == 1) {
      y = {i % 2 == 0 ? r : -r, 0.0};
    } else {
      const Real th = two_pi * frac(i * s3);
      y = {r * std::cos(th), r * std::sin(th)};
    }
    const Real a = k.amplitude(x, y);
    if (!std::isfinite(a) || a < -tol)
      throw InvalidKernel("ellipticity_check: amplitude " +
                          std::to_string(a) + " at x=" + point_str(x, k.dim) +
                          " y=" + point_str(y, k.dim));
    if (k.truncated && r > 1.0) {
      if (std::abs(a) > tol)
        throw InvalidKernel("ellipticity_check: truncated amplitude nonzero at y=" +
                            point_str(y, k.dim));
      continue;
    }
    lo = std::min(lo, a);
    hi = std::max(hi, a);
  }
  rep.min_ratio = lo;
  rep.max_ratio = hi;
  rep.pass = lo >= k.nu - tol && hi <= k.lambda_upper + tol;
  return rep;
}

Point cancellation_defect(const KernelSpec& k, const Point& x, Real r,
                          int circle_nodes) {
  if (!(r > 0.0)) throw std::invalid_argument("cancellation_defect: r > 0");
  if (k.dim == 1) {
    const Real kp = kernel_value(k, x, {r, 0.0});
    const Real km = kernel_value(k, x, {-r, 0.0});
    return {r * kp - r * km, 0.0};
  }
  if (circle_nodes < 256)
    throw std::invalid_argument("cancellation_defect: need >= 256 nodes");
  // trapezoid on the circle of radius r; dS = r dtheta
  Point acc{0.0, 0.0};
  const Real dth = two_pi / circle_nodes;
  for (int i = 0; i < circle_nodes; ++i) {
    const Real th = i * dth;
    const Point y{r * std::cos(th), r * std::sin(th)};
    const Real kv = kernel_value(k, x, y);
    acc[0] += y[0] * kv * r * dth;
    acc[1] += y[1] * kv * r * dth;
  }
  return acc;
}

void validate_kernel(const KernelSpec& k) {
  if (!(k.sigma > 0.0) || !(k.sigma < 2.0))
    throw InvalidKernel("validate_kernel: sigma must lie in (0,2)");
  if (k.dim != 1 && k.dim != 2)
    throw InvalidKernel("validate_kernel: dim must be 1 or 2");
  if (!k.amplitude) throw InvalidKernel("validate_kernel: missing amplitude");
  if (!(k.nu >= 0.0) || !(k.lambda_upper >= k.nu))
    throw InvalidKernel("validate_kernel: need 0 <= nu <= Lambda");
  {
    // coarse positivity screen; the full bound check is ellipticity_check
    std::vector<Point> xs{{0.0, 0.0}};
    if (k.x_dependent) xs.push_back({2.7, 1.3});
    const int n_dir = k.dim == 1 ? 2 : 12;
    for (const Point& x : xs)
      for (int a = 0; a < n_dir; ++a) {
        const Real th = k.dim == 1 ? (a == 0 ? 0.0 : pi)
                                   : two_pi * (a + 0.5) / n_dir;
        const Point e = {std::cos(th), k.dim == 1 ? 0.0 : std::sin(th)};
        for (int l = -6; l <= 2; ++l) {
          const Real r = std::pow(2.0, l);
          const Real v = k.amplitude(x, {r * e[0], r * e[1]});
          if (!std::isfinite(v) || v < -1e-12)
            throw InvalidKernel("validate_kernel: negative amplitude " +
                                std::to_string(v) + " at r=" +
                                std::to_string(r));
        }
      }
  }
  if (k.sigma == 1.0) {
    // sigma = 1 requires the surface moments to vanish at every radius
    const Real scale = (2.0 - k.sigma) * std::max(k.lambda_upper, Real(1));
    std::vector<Point> xs{{0.0, 0.0}};
    if (k.x_dependent)
      xs = {{0.0, 0.0}, {1.1, 0.4}, {3.7, 2.9}, {5.3, 1.6}};
    for (const Point& x : xs) {
      for (int l = -8; l <= 3; ++l) {
        const Real r = std::pow(2.0, l);
        const Point d = cancellation_defect(k, x, r);
        const Real mag = std::hypot(d[0], d[1]);
        if (mag > cancellation_tol * scale * std::pow(r, 1.0 - k.sigma))
          throw InvalidKernel(
              "validate_kernel: sigma = 1 cancellation defect " +
              std::to_string(mag) + " at r=" + std::to_string(r) +
              " x=" + point_str(x, k.dim));
      }
    }
  }
}

KernelSpec make_unit_kernel(Real sigma, int dim) {
  KernelSpec k;
  k.sigma = sigma;
  k.dim = dim;
  k.amplitude = [](const Point&, const Point&) { return 1.0; };
  k.nu = k.lambda_upper = 1.0;
  k.name = "unit";
  validate_kernel(k);
  return k;
}

KernelSpec make_aniso2d(Real sigma) {
  KernelSpec k;
  k.sigma = sigma;
  k.dim = 2;
  k.amplitude = [](const Point&, const Point& y) {
    const Real r2 = y[0] * y[0] + y[1] * y[1];
    // cos(2 theta) = (y0^2 - y1^2)/r^2; even harmonic, so the sigma = 1
    // cancellation holds exactly
    return 1.0 + 0.5 * (y[0] * y[0] - y[1] * y[1]) / r2;
  };
  k.nu = 0.5;
  k.lambda_upper = 1.5;
  k.name = "aniso2d";
  validate_kernel(k);
  return k;
}

KernelSpec make_nonsym1d(Real sigma) {
  KernelSpec k;
  k.sigma = sigma;
  k.dim = 1;
  k.amplitude = [](const Point&, const Point& y) {
    return y[0] > 0.0 ? 1.5 : 0.5;
  };
  k.nu = 0.5;
  k.lambda_upper = 1.5;
  k.name = "nonsym1d";
  validate_kernel(k);   // rejects sigma = 1
  return k;
}

KernelSpec make_truncated(Real sigma) {
  KernelSpec k;
  k.sigma = sigma;
  k.dim = 1;
  k.amplitude = [](const Point&, const Point& y) {
    return norm(y) <= 1.0 ? 1.0 : 0.0;
  };
  k.nu = 1.0;
  k.lambda_upper = 1.0;
  k.truncated = true;
  k.name = "truncated";
  validate_kernel(k);
  return k;
}

KernelSpec make_xdep(Real sigma, Real eps, Real period) {
  if (!(eps >= 0.0) || !(eps < 1.0))
    throw InvalidKernel("make_xdep: need 0 <= eps < 1");
  KernelSpec k;
  k.sigma = sigma;
  k.dim = 1;
  k.amplitude = [eps, period](const Point& x, const Point&) {
    return 1.0 + eps * std::sin(two_pi * x[0] / period);
  };
  k.nu = 1.0 - eps;
  k.lambda_upper = 1.0 + eps;
  k.x_dependent = true;
  k.name = "xdep";
  validate_kernel(k);
  return k;
}

}  // namespace nle
