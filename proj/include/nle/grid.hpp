#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <cstdint>
#include <string>

// Periodic grids, fields and their trigonometric-interpolant spectra.
//
// A Field holds real samples of a function on the uniform grid x_j = j*h over
// [0, period)^dim.  Its Spectrum holds coefficients c_k of the interpolant
//   f(x) = sum_k c_k exp(i xi_k . x),   xi_k = 2*pi*k/period,
// normalized so that f == 1 has c_0 = 1.  All operations that move off the
// grid (shift, derivative, off-grid evaluation) act on this interpolant, so
// spectral and quadrature code paths see the same function.

namespace nle {

using Real = double;
using Complex = std::complex<Real>;
using Array = Eigen::ArrayXd;
using CArray = Eigen::ArrayXcd;

inline constexpr Real pi = 3.14159265358979323846264338327950288;
inline constexpr Real two_pi = 2.0 * pi;

struct GridSpec {
  int dim = 1;
  int n = 256;       // points per axis, power of two
  Real period = two_pi;

  Real spacing() const { return period / n; }
  Eigen::Index size() const {
    return dim == 1 ? Eigen::Index(n) : Eigen::Index(n) * n;
  }
  bool operator==(const GridSpec&) const = default;
};

// Throws std::invalid_argument unless dim in {1,2}, n a power of two in
// [64, 4096] (1d) or [64, 256] (2d), period > 0.
void validate(const GridSpec& g);
GridSpec make_grid(int dim, int n, Real period = two_pi);

struct Field {
  GridSpec grid;
  Array values;
};

struct Spectrum {
  GridSpec grid;
  CArray coeff;   // FFT layout: index i on each axis holds k = i <= n/2 ? i : i-n
};

// Signed integer frequency for axis index i on an n-point axis.
inline int freq_index(int i, int n) { return i <= n / 2 ? i : i - n; }

// Flat index helpers for 2d fields (axis-0 major).
inline Eigen::Index flat(const GridSpec& g, int i0, int i1) {
  return Eigen::Index(i0) * g.n + i1;
}

Spectrum transform(const Field& f);
Field inverse(const Spectrum& s);

// |xi_k| per mode in FFT layout.
Array xi_magnitude(const GridSpec& g);

// Enforces the conjugate symmetry c_{-k} = conj(c_k) exactly (pair averaging;
// Nyquist and zero modes made real).
void symmetrize(Spectrum& s);

// Translation f(. + h) through phase factors exp(i xi_k . h); exact for the
// interpolant, so shift(shift(f,a),b) == shift(f,a+b) to rounding.
Field shift(const Field& f, Real h);
Field shift(const Field& f, const std::array<Real, 2>& h);
Spectrum shift(const Spectrum& s, const std::array<Real, 2>& h);

// f(. + h) + f(. - h) - 2 f
Field second_difference(const Field& f, Real h);
Field second_difference(const Field& f, const std::array<Real, 2>& h);

// Spectral derivative d^order/dx^order (1d) or mixed partial (2d).
Spectrum derivative(const Spectrum& s, int order);
Spectrum derivative(const Spectrum& s, int order0, int order1);

// Mean-zero random field with |c_k| = |k|^{-(dim/2 + alpha + 0.01)} and
// seeded uniform phases.  Coefficients are assigned per wavenumber from a
// hash of (seed, k), so refining n -> 2n keeps every shared mode identical.
Field random_field(const GridSpec& g, Real alpha, std::uint64_t seed);

// W_J(x) = sum_{j=1..J} 2^{-j} cos(2^j x); requires dim 1, period 2*pi,
// 2^J <= n/4.
Field lacunary_field(const GridSpec& g, int J);

// Trigonometric interpolant evaluated off-grid (O(n^dim) per point; for
// tests and small point sets).
Real evaluate(const Spectrum& s, Real x);
Real evaluate(const Spectrum& s, Real x0, Real x1);

// Zero-padded spectrum on a grid refined by `factor` (a power of two).
Spectrum refine(const Spectrum& s, int factor);

// CSV serialization: comment header with grid metadata, then one row per
// grid point ("i,value" or "i,j,value") at 17 significant digits, so the
// decimal round-trip is bit-exact.
void write_csv(const Field& f, const std::string& path);
Field read_csv(const std::string& path);

std::string format_real(Real v);   // %.17g

// Non-periodic wide grid used by Green's-function and decay studies:
// x_i = -half_width + i*spacing, i = 0..n-1, n = 2*half_width/spacing.
struct WideGrid {
  Real half_width = 64.0;
  int n = 8192;
  Real spacing() const { return 2.0 * half_width / n; }
  Real x(int i) const { return -half_width + i * spacing(); }
};

// Smallest power-of-two wide grid with half_width >= min_half_width and
// spacing <= max_spacing.
WideGrid make_wide_grid(Real min_half_width = 40.0, Real max_spacing = 1.0 / 64.0);

std::uint64_t splitmix64(std::uint64_t z);

}  // namespace nle
