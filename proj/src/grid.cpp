#include "nle/grid.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace nle {

namespace {

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

Eigen::FFT<Real>& fft_engine() {
  static thread_local Eigen::FFT<Real> fft;
  return fft;
}

// Unnormalized DFT along a contiguous complex vector.
void dft(Eigen::VectorXcd& v, bool forward) {
  Eigen::VectorXcd out(v.size());
  if (forward) {
    fft_engine().fwd(out, v);
  } else {
    fft_engine().inv(out, v);   // includes the 1/n factor
  }
  v = out;
}

// In-place transform of the flat array, one axis at a time for dim 2.
void dft_nd(const GridSpec& g, CArray& a, bool forward) {
  const int n = g.n;
  if (g.dim == 1) {
    Eigen::VectorXcd v = a.matrix();
    dft(v, forward);
    a = v.array();
    return;
  }
  Eigen::VectorXcd scratch(n);
  for (int i0 = 0; i0 < n; ++i0) {          // axis 1 (contiguous rows)
    scratch = a.segment(Eigen::Index(i0) * n, n).matrix();
    dft(scratch, forward);
    a.segment(Eigen::Index(i0) * n, n) = scratch.array();
  }
  for (int i1 = 0; i1 < n; ++i1) {          // axis 0 (strided)
    for (int i0 = 0; i0 < n; ++i0) scratch[i0] = a[flat(g, i0, i1)];
    dft(scratch, forward);
    for (int i0 = 0; i0 < n; ++i0) a[flat(g, i0, i1)] = scratch[i0];
  }
}

}  // namespace

void validate(const GridSpec& g) {
  if (g.dim != 1 && g.dim != 2)
    throw std::invalid_argument("GridSpec: dim must be 1 or 2");
  if (!power_of_two(g.n))
    throw std::invalid_argument("GridSpec: n must be a power of two");
  const int n_max = g.dim == 1 ? 4096 : 256;
  if (g.n < 64 || g.n > n_max)
    throw std::invalid_argument("GridSpec: n out of range [64, " +
                                std::to_string(n_max) + "]");
  if (!(g.period > 0.0) || !std::isfinite(g.period))
    throw std::invalid_argument("GridSpec: period must be positive");
}

GridSpec make_grid(int dim, int n, Real period) {
  GridSpec g{dim, n, period};
  validate(g);
  return g;
}

Array xi_magnitude(const GridSpec& g) {
  const Real dxi = two_pi / g.period;
  Array out(g.size());
  if (g.dim == 1) {
    for (int i = 0; i < g.n; ++i) out[i] = std::abs(freq_index(i, g.n)) * dxi;
  } else {
    for (int i0 = 0; i0 < g.n; ++i0)
      for (int i1 = 0; i1 < g.n; ++i1)
        out[flat(g, i0, i1)] = dxi * std::hypot(Real(freq_index(i0, g.n)),
                                                Real(freq_index(i1, g.n)));
  }
  return out;
}

Spectrum transform(const Field& f) {
  if (f.values.size() != f.grid.size())
    throw std::invalid_argument("transform: field size does not match grid");
  CArray a = f.values.cast<Complex>();
  dft_nd(f.grid, a, true);
  a /= Real(f.grid.size());
  return {f.grid, std::move(a)};
}

Field inverse(const Spectrum& s) {
  if (s.coeff.size() != s.grid.size())
    throw std::invalid_argument("inverse: spectrum size does not match grid");
  CArray a = s.coeff;
  dft_nd(s.grid, a, false);
  a *= Real(s.grid.size());
  return {s.grid, a.real()};
}

void symmetrize(Spectrum& s) {
  const int n = s.grid.n;
  auto conj_index_1d = [n](int i) { return i == 0 ? 0 : n - i; };
  if (s.grid.dim == 1) {
    for (int i = 0; i <= n / 2; ++i) {
      const int j = conj_index_1d(i);
      if (j == i) {
        s.coeff[i] = Complex(s.coeff[i].real(), 0.0);
      } else {
        const Complex avg = 0.5 * (s.coeff[i] + std::conj(s.coeff[j]));
        s.coeff[i] = avg;
        s.coeff[j] = std::conj(avg);
      }
    }
    return;
  }
  for (int i0 = 0; i0 < n; ++i0) {
    for (int i1 = 0; i1 < n; ++i1) {
      const int j0 = conj_index_1d(i0), j1 = conj_index_1d(i1);
      const Eigen::Index a = flat(s.grid, i0, i1), b = flat(s.grid, j0, j1);
      if (a == b) {
        s.coeff[a] = Complex(s.coeff[a].real(), 0.0);
      } else if (a < b) {
        const Complex avg = 0.5 * (s.coeff[a] + std::conj(s.coeff[b]));
        s.coeff[a] = avg;
        s.coeff[b] = std::conj(avg);
      }
    }
  }
}

namespace {

// Phase factor for one axis: exp(i xi_k h), with the Nyquist mode mapped to
// cos(xi h) so that real fields stay real and shifts by grid multiples stay
// exact.
Complex axis_phase(int k, int n, Real period, Real h) {
  const Real xi = two_pi * k / period;
  if (k == n / 2) return Complex(std::cos(xi * h), 0.0);
  return std::exp(Complex(0.0, xi * h));
}

}  // namespace

Spectrum shift(const Spectrum& s, const std::array<Real, 2>& h) {
  const int n = s.grid.n;
  Spectrum out = s;
  if (s.grid.dim == 1) {
    for (int i = 0; i < n; ++i)
      out.coeff[i] *= axis_phase(freq_index(i, n), n, s.grid.period, h[0]);
    return out;
  }
  for (int i0 = 0; i0 < n; ++i0) {
    const Complex p0 = axis_phase(freq_index(i0, n), n, s.grid.period, h[0]);
    for (int i1 = 0; i1 < n; ++i1) {
      const Complex p1 = axis_phase(freq_index(i1, n), n, s.grid.period, h[1]);
      out.coeff[flat(s.grid, i0, i1)] *= p0 * p1;
    }
  }
  return out;
}

Field shift(const Field& f, Real h) { return shift(f, std::array<Real, 2>{h, 0.0}); }

Field shift(const Field& f, const std::array<Real, 2>& h) {
  return inverse(shift(transform(f), h));
}

Field second_difference(const Field& f, Real h) {
  return second_difference(f, std::array<Real, 2>{h, 0.0});
}

Field second_difference(const Field& f, const std::array<Real, 2>& h) {
  Spectrum s = transform(f);
  Spectrum plus = shift(s, h);
  Spectrum minus = shift(s, {-h[0], -h[1]});
  plus.coeff += minus.coeff - 2.0 * s.coeff;
  return inverse(plus);
}

namespace {

// (i xi)^order.  The Nyquist slot stands for cos(n/2 xi_0 x), matching
// axis_phase: even orders keep the (real) natural multiplier, odd-order
// derivatives are sines that sample to zero at the nodes.
Complex deriv_multiplier(int k, int n, Real period, int order) {
  if (order == 0) return Complex(1.0, 0.0);
  if (k == n / 2 && order % 2 == 1) return Complex(0.0, 0.0);
  return std::pow(Complex(0.0, two_pi * k / period), order);
}

}  // namespace

Spectrum derivative(const Spectrum& s, int order) {
  if (s.grid.dim != 1) throw std::invalid_argument("derivative: dim 1 expected");
  Spectrum out = s;
  for (int i = 0; i < s.grid.n; ++i)
    out.coeff[i] *= deriv_multiplier(freq_index(i, s.grid.n), s.grid.n,
                                     s.grid.period, order);
  return out;
}

Spectrum derivative(const Spectrum& s, int order0, int order1) {
  if (s.grid.dim != 2) throw std::invalid_argument("derivative: dim 2 expected");
  const int n = s.grid.n;
  Spectrum out = s;
  for (int i0 = 0; i0 < n; ++i0) {
    const Complex m0 =
        deriv_multiplier(freq_index(i0, n), n, s.grid.period, order0);
    for (int i1 = 0; i1 < n; ++i1) {
      const Complex m1 =
          deriv_multiplier(freq_index(i1, n), n, s.grid.period, order1);
      out.coeff[flat(s.grid, i0, i1)] *= m0 * m1;
    }
  }
  return out;
}

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

namespace {

Real hashed_phase(std::uint64_t seed, std::int64_t key) {
  std::uint64_t z = splitmix64(seed ^ splitmix64(std::uint64_t(key)));
  return two_pi * Real(z >> 11) / Real(1ull << 53);
}

}  // namespace

Field random_field(const GridSpec& g, Real alpha, std::uint64_t seed) {
  validate(g);
  const int n = g.n;
  const Real decay = g.dim / 2.0 + alpha + 0.01;
  Spectrum s{g, CArray::Zero(g.size())};
  if (g.dim == 1) {
    for (int k = 1; k < n / 2; ++k) {   // Nyquist left empty
      const Real mag = std::pow(Real(k), -decay);
      const Real phase = hashed_phase(seed, k);
      s.coeff[k] = std::polar(mag, phase);
      s.coeff[n - k] = std::conj(s.coeff[k]);
    }
  } else {
    for (int i0 = 0; i0 < n; ++i0) {
      const int k0 = freq_index(i0, n);
      if (std::abs(k0) == n / 2) continue;
      for (int i1 = 0; i1 < n; ++i1) {
        const int k1 = freq_index(i1, n);
        if (std::abs(k1) == n / 2) continue;
        if (k0 == 0 && k1 == 0) continue;
        // assign each conjugate pair once, from its lexicographically
        // positive member
        if (!(k0 > 0 || (k0 == 0 && k1 > 0))) continue;
        const Real mag = std::pow(std::hypot(Real(k0), Real(k1)), -decay);
        const std::int64_t key = (std::int64_t(k0) << 32) ^
                                 std::int64_t(std::uint32_t(k1));
        const Real phase = hashed_phase(seed, key);
        const Complex c = std::polar(mag, phase);
        s.coeff[flat(g, i0, i1)] = c;
        const int j0 = k0 == 0 ? 0 : n - i0;
        const int j1 = k1 == 0 ? 0 : n - i1;
        s.coeff[flat(g, j0, j1)] = std::conj(c);
      }
    }
  }
  return inverse(s);
}

Field lacunary_field(const GridSpec& g, int J) {
  validate(g);
  if (g.dim != 1 || std::abs(g.period - two_pi) > 1e-12)
    throw std::invalid_argument("lacunary_field: dim 1 with period 2*pi");
  if (J < 1 || (1 << J) > g.n / 4)
    throw std::invalid_argument("lacunary_field: need 2^J <= n/4");
  Field f{g, Array::Zero(g.n)};
  for (int j = 1; j <= J; ++j) {
    const Real a = std::pow(2.0, -j), w = Real(1 << j);
    for (int i = 0; i < g.n; ++i)
      f.values[i] += a * std::cos(w * (i * g.spacing()));
  }
  return f;
}

Real evaluate(const Spectrum& s, Real x) {
  if (s.grid.dim != 1) throw std::invalid_argument("evaluate: dim 1 expected");
  const int n = s.grid.n;
  Complex acc = s.coeff[0];
  const Real base = two_pi * x / s.grid.period;
  for (int k = 1; k < n / 2; ++k) {
    const Complex e = std::exp(Complex(0.0, base * k));
    acc += s.coeff[k] * e + s.coeff[n - k] * std::conj(e);
  }
  acc += s.coeff[n / 2] * std::cos(base * (n / 2));
  return acc.real();
}

Real evaluate(const Spectrum& s, Real x0, Real x1) {
  if (s.grid.dim != 2) throw std::invalid_argument("evaluate: dim 2 expected");
  const int n = s.grid.n;
  const Real b0 = two_pi * x0 / s.grid.period, b1 = two_pi * x1 / s.grid.period;
  Complex acc = 0.0;
  for (int i0 = 0; i0 < n; ++i0) {
    const int k0 = freq_index(i0, n);
    const Complex e0 = k0 == n / 2 ? Complex(std::cos(b0 * k0), 0.0)
                                   : std::exp(Complex(0.0, b0 * k0));
    for (int i1 = 0; i1 < n; ++i1) {
      const int k1 = freq_index(i1, n);
      const Complex e1 = k1 == n / 2 ? Complex(std::cos(b1 * k1), 0.0)
                                     : std::exp(Complex(0.0, b1 * k1));
      acc += s.coeff[flat(s.grid, i0, i1)] * e0 * e1;
    }
  }
  return acc.real();
}

Spectrum refine(const Spectrum& s, int factor) {
  if (factor < 1 || (factor & (factor - 1)) != 0)
    throw std::invalid_argument("refine: factor must be a power of two");
  if (factor == 1) return s;
  const int n = s.grid.n, m = n * factor;
  GridSpec fine{s.grid.dim, m, s.grid.period};
  Spectrum out{fine, CArray::Zero(fine.size())};
  if (s.grid.dim == 1) {
    for (int i = 0; i < n; ++i) {
      const int k = freq_index(i, n);
      out.coeff[k >= 0 ? k : m + k] = s.coeff[i];
    }
  } else {
    for (int i0 = 0; i0 < n; ++i0) {
      const int k0 = freq_index(i0, n);
      for (int i1 = 0; i1 < n; ++i1) {
        const int k1 = freq_index(i1, n);
        out.coeff[flat(fine, k0 >= 0 ? k0 : m + k0, k1 >= 0 ? k1 : m + k1)] =
            s.coeff[flat(s.grid, i0, i1)];
      }
    }
  }
  return out;
}

std::string format_real(Real v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(const Field& f, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_csv: cannot open " + path);
  out << "# dim=" << f.grid.dim << " n=" << f.grid.n
      << " period=" << format_real(f.grid.period) << "\n";
  if (f.grid.dim == 1) {
    out << "i,value\n";
    for (int i = 0; i < f.grid.n; ++i)
      out << i << "," << format_real(f.values[i]) << "\n";
  } else {
    out << "i,j,value\n";
    for (int i0 = 0; i0 < f.grid.n; ++i0)
      for (int i1 = 0; i1 < f.grid.n; ++i1)
        out << i0 << "," << i1 << ","
            << format_real(f.values[flat(f.grid, i0, i1)]) << "\n";
  }
  if (!out) throw std::runtime_error("write_csv: write failed for " + path);
}

Field read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_csv: cannot open " + path);
  std::string line;
  GridSpec g;
  bool have_meta = false;
  Field f;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      int dim = 0, n = 0;
      double period = 0.0;
      if (std::sscanf(line.c_str(), "# dim=%d n=%d period=%lf", &dim, &n,
                      &period) == 3) {
        g = GridSpec{dim, n, period};
        validate(g);
        f = Field{g, Array::Zero(g.size())};
        have_meta = true;
      }
      continue;
    }
    if (!have_meta) throw std::runtime_error("read_csv: missing metadata header");
    if (line.rfind("i,", 0) == 0) continue;   // column header
    std::istringstream row(line);
    char comma;
    if (g.dim == 1) {
      int i;
      double v;
      if (!(row >> i >> comma >> v))
        throw std::runtime_error("read_csv: malformed row: " + line);
      if (i < 0 || i >= g.n) throw std::runtime_error("read_csv: index range");
      f.values[i] = v;
    } else {
      int i0, i1;
      double v;
      char c2;
      if (!(row >> i0 >> comma >> i1 >> c2 >> v))
        throw std::runtime_error("read_csv: malformed row: " + line);
      if (i0 < 0 || i0 >= g.n || i1 < 0 || i1 >= g.n)
        throw std::runtime_error("read_csv: index range");
      f.values[flat(g, i0, i1)] = v;
    }
  }
  if (!have_meta) throw std::runtime_error("read_csv: empty file " + path);
  return f;
}

WideGrid make_wide_grid(Real min_half_width, Real max_spacing) {
  if (!(min_half_width > 0.0) || !(max_spacing > 0.0))
    throw std::invalid_argument("make_wide_grid: positive sizes expected");
  int n = 64;
  while (2.0 * min_half_width / n > max_spacing) n *= 2;
  return WideGrid{min_half_width, n};
}

}  // namespace nle
