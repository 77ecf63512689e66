#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <fftw3.h>

#include "salem/cantor.hpp"
#include "salem/rational.hpp"

namespace salem {

// Piecewise-constant probability density: value `weight` on a union of
// equal-width cells [l/D, (l+1)/D]. The int64 label form is the fast path for
// Fourier work; the rational intervals stay authoritative.
struct StepMeasure {
  std::vector<RationalInterval> intervals;
  Rat weight = 1;  // (M1...Mn)/(L1...Ln) for tree iterates
  std::int64_t D = 0;
  std::vector<std::int64_t> labels;

  double density_value() const { return to_double(weight); }
  std::int64_t cells() const { return static_cast<std::int64_t>(intervals.size()); }
};

inline StepMeasure density(const CantorTree& t, int n) {
  if (n < 0 || n > t.params.depth) throw std::invalid_argument("density: level out of range");
  StepMeasure m;
  m.intervals = intervals(t, n);
  const BigInt D = level_denominator(t.params, n);
  m.weight = Rat(D, t.count[static_cast<std::size_t>(n)]);
  if (D <= BigInt(std::int64_t(1) << 62)) {
    m.D = D.convert_to<std::int64_t>();
    m.labels = level_labels(t, n);
  }
  return m;
}

// uniform density on [start/D, (start+count)/D]
inline StepMeasure uniform_cells(std::int64_t D, std::int64_t count, std::int64_t start = 0) {
  if (D < 1 || count < 1 || start < 0 || start + count > D)
    throw std::invalid_argument("uniform_cells: bad cell range");
  StepMeasure m;
  m.D = D;
  m.weight = Rat(D, count);
  for (std::int64_t l = start; l < start + count; ++l) {
    m.labels.push_back(l);
    m.intervals.push_back({Rat(l, D), Rat(l + 1, D)});
  }
  return m;
}

// circle translation by shift/D
inline StepMeasure translate(const StepMeasure& m, std::int64_t shift) {
  if (m.D == 0) throw std::invalid_argument("translate: measure has no fast labels");
  StepMeasure out;
  out.D = m.D;
  out.weight = m.weight;
  out.labels = m.labels;
  for (auto& l : out.labels) l = ((l + shift) % m.D + m.D) % m.D;
  std::sort(out.labels.begin(), out.labels.end());
  for (std::int64_t l : out.labels) out.intervals.push_back({Rat(l, m.D), Rat(l + 1, m.D)});
  return out;
}

namespace detail {

inline std::int64_t mulmod63(std::int64_t a, std::int64_t b, std::int64_t mod) {
  return static_cast<std::int64_t>(static_cast<__int128>(a) * b % mod);
}

// (1 - e^{-2 pi i kr/D}) / (2 pi i k), with kr = k mod D already reduced.
// Written as 2 sin^2 to keep accuracy near kr/D -> 0.
inline std::complex<double> width_factor(std::int64_t kr, double D, double k) {
  const double half = M_PI * static_cast<double>(kr) / D;
  const double x = 2.0 * std::sin(half) * std::sin(half);  // 1 - cos
  const double y = std::sin(2.0 * half);
  return {y / (2.0 * M_PI * k), -x / (2.0 * M_PI * k)};
}

}  // namespace detail

inline std::complex<double> fourier_coefficient(const StepMeasure& m, std::int64_t k) {
  if (k == 0) return {1.0, 0.0};
  if (k < 0) return std::conj(fourier_coefficient(m, -k));  // real measure
  if (m.D > 0) {
    const std::int64_t D = m.D;
    const std::int64_t kr = k % D;
    if (kr == 0) return {0.0, 0.0};  // whole periods across every cell
    double sr = 0, si = 0;
    for (std::int64_t l : m.labels) {
      const double frac = static_cast<double>(detail::mulmod63(kr, l, D)) / static_cast<double>(D);
      sr += std::cos(2.0 * M_PI * frac);
      si -= std::sin(2.0 * M_PI * frac);
    }
    return m.density_value() * std::complex<double>(sr, si) *
           detail::width_factor(kr, static_cast<double>(D), static_cast<double>(k));
  }
  // exact-phase fallback for denominators beyond the int64 fast path
  const Rat width = m.intervals.at(0).right - m.intervals.at(0).left;
  const BigInt D = boost::multiprecision::denominator(width);
  BigInt kb = k % D;
  if (kb < 0) kb += D;
  if (kb == 0) return {0.0, 0.0};
  double sr = 0, si = 0;
  for (const auto& iv : m.intervals) {
    const BigInt l = boost::multiprecision::numerator(iv.left) *
                     (D / boost::multiprecision::denominator(iv.left));
    const double frac = (kb * l % D).convert_to<double>() / D.convert_to<double>();
    sr += std::cos(2.0 * M_PI * frac);
    si -= std::sin(2.0 * M_PI * frac);
  }
  const double theta = M_PI * kb.convert_to<double>() / D.convert_to<double>();
  const double x = 2.0 * std::sin(theta) * std::sin(theta);
  const double y = std::sin(2.0 * theta);
  const std::complex<double> w(y / (2.0 * M_PI * static_cast<double>(k)),
                               -x / (2.0 * M_PI * static_cast<double>(k)));
  return m.density_value() * std::complex<double>(sr, si) * w;
}

inline constexpr std::int64_t kFftGridCap = std::int64_t(1) << 27;

// DFT of the cell-occupancy indicator on a grid of G = r*D >= 8*kmax points,
// corrected per bin by the subcell width factor. Algebraically identical to
// the exact formula, so any discrepancy is pure floating-point noise.
inline std::vector<std::complex<double>> spectrum_fft(const StepMeasure& m, std::int64_t kmax) {
  if (kmax < 1) throw std::invalid_argument("spectrum_fft: kmax must be >= 1");
  if (m.D == 0) throw std::domain_error("spectrum_fft: measure lacks int64 labels");
  const std::int64_t r = std::max<std::int64_t>(1, (8 * kmax + m.D - 1) / m.D);
  const std::int64_t G = r * m.D;
  if (G > kFftGridCap) throw std::length_error("spectrum_fft: grid exceeds memory cap");
  double* in = fftw_alloc_real(static_cast<std::size_t>(G));
  fftw_complex* out = fftw_alloc_complex(static_cast<std::size_t>(G / 2 + 1));
  if (!in || !out) throw std::bad_alloc();
  std::fill(in, in + G, 0.0);
  for (std::int64_t l : m.labels)
    for (std::int64_t s = 0; s < r; ++s) in[l * r + s] = 1.0;
  fftw_plan plan = fftw_plan_dft_r2c_1d(static_cast<int>(G), in, out, FFTW_ESTIMATE);
  fftw_execute(plan);
  const double dens = m.density_value();
  std::vector<std::complex<double>> coeffs(static_cast<std::size_t>(kmax) + 1);
  coeffs[0] = {1.0, 0.0};
  for (std::int64_t k = 1; k <= kmax; ++k) {
    const std::complex<double> OUT(out[k][0], out[k][1]);
    coeffs[static_cast<std::size_t>(k)] =
        dens * OUT * detail::width_factor(k % G, static_cast<double>(G), static_cast<double>(k));
  }
  fftw_destroy_plan(plan);
  fftw_free(in);
  fftw_free(out);
  return coeffs;
}

struct SpectrumTable {
  std::int64_t kmax = 0;
  std::vector<std::complex<double>> coeffs;  // k = 0..kmax; negative k by conjugation
  double fft_discrepancy = std::numeric_limits<double>::quiet_NaN();

  std::complex<double> mu_hat(std::int64_t k) const {
    const std::int64_t a = k < 0 ? -k : k;
    if (a > kmax) throw std::out_of_range("SpectrumTable: |k| beyond kmax");
    const auto v = coeffs[static_cast<std::size_t>(a)];
    return k < 0 ? std::conj(v) : v;
  }
};

inline SpectrumTable spectrum(const StepMeasure& m, std::int64_t kmax) {
  if (kmax < 1) throw std::invalid_argument("spectrum: kmax must be >= 1");
  SpectrumTable t;
  t.kmax = kmax;
  t.coeffs.resize(static_cast<std::size_t>(kmax) + 1);
  t.coeffs[0] = {1.0, 0.0};
  for (std::int64_t k = 1; k <= kmax; ++k)
    t.coeffs[static_cast<std::size_t>(k)] = fourier_coefficient(m, k);
  const std::int64_t grid =
      m.D > 0 ? std::max<std::int64_t>(1, (8 * kmax + m.D - 1) / m.D) * m.D : kFftGridCap + 1;
  if (grid <= kFftGridCap) {
    const auto fft = spectrum_fft(m, kmax);
    double disc = 0;
    for (std::int64_t k = 1; k <= kmax; ++k)
      disc = std::max(disc, std::abs(fft[static_cast<std::size_t>(k)] -
                                     t.coeffs[static_cast<std::size_t>(k)]));
    t.fft_discrepancy = disc;
  }
  return t;
}

struct BandSup {
  int m = 0;
  std::int64_t k_begin = 0, k_end = 0;  // closed range [2^m, 2^{m+1}-1]
  std::int64_t argmax = 0;
  double sup = 0;
};

inline int full_band_count(std::int64_t kmax) {
  int b = 0;
  while (((std::int64_t(1) << (b + 1)) - 1) <= kmax) ++b;
  return b;
}

inline std::vector<BandSup> band_sups_exact(const SpectrumTable& t) {
  const int B = full_band_count(t.kmax);
  std::vector<BandSup> bands(static_cast<std::size_t>(B));
  for (int m = 0; m < B; ++m) {
    auto& b = bands[static_cast<std::size_t>(m)];
    b.m = m;
    b.k_begin = std::int64_t(1) << m;
    b.k_end = (std::int64_t(1) << (m + 1)) - 1;
    b.argmax = b.k_begin;
    for (std::int64_t k = b.k_begin; k <= b.k_end; ++k) {
      const double a = std::abs(t.coeffs[static_cast<std::size_t>(k)]);
      if (a > b.sup) {
        b.sup = a;
        b.argmax = k;
      }
    }
  }
  return bands;
}

// Streaming dyadic-band suprema up to large kmax: per-cell phase rotation in
// float with periodic exact resynchronization, so drift never accumulates past
// `resync` steps. Magnitudes carry the exact per-k width factor in double.
inline std::vector<BandSup> band_sups(const StepMeasure& m, std::int64_t kmax,
                                      std::int64_t resync = 4096) {
  if (m.D == 0) throw std::domain_error("band_sups: measure lacks int64 labels");
  if (kmax < 1) throw std::invalid_argument("band_sups: kmax must be >= 1");
  const int B = full_band_count(kmax);
  if (B == 0) return {};
  const std::int64_t klast = (std::int64_t(1) << B) - 1;
  const std::int64_t D = m.D;
  const std::size_t n = m.labels.size();
  const double dens = m.density_value();

  std::vector<float> pr(n), pi(n), sr(n), si(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double a = 2.0 * M_PI * static_cast<double>(m.labels[j]) / static_cast<double>(D);
    sr[j] = static_cast<float>(std::cos(a));
    si[j] = static_cast<float>(-std::sin(a));
  }
  const auto sync = [&](std::int64_t k) {
    const std::int64_t kr = k % D;
    for (std::size_t j = 0; j < n; ++j) {
      const double frac =
          static_cast<double>(detail::mulmod63(kr, m.labels[j], D)) / static_cast<double>(D);
      pr[j] = static_cast<float>(std::cos(2.0 * M_PI * frac));
      pi[j] = static_cast<float>(-std::sin(2.0 * M_PI * frac));
    }
  };

  std::vector<BandSup> bands(static_cast<std::size_t>(B));
  for (int b = 0; b < B; ++b) {
    bands[static_cast<std::size_t>(b)].m = b;
    bands[static_cast<std::size_t>(b)].k_begin = std::int64_t(1) << b;
    bands[static_cast<std::size_t>(b)].k_end = (std::int64_t(1) << (b + 1)) - 1;
    bands[static_cast<std::size_t>(b)].argmax = std::int64_t(1) << b;
  }

  std::int64_t kr = 1 % D;
  int band = 0;
  for (std::int64_t k = 1; k <= klast; ++k) {
    if ((k - 1) % resync == 0) sync(k);
    if (k == (std::int64_t(2) << band)) ++band;
    float sumr = 0.0f, sumi = 0.0f;
#pragma omp simd reduction(+ : sumr, sumi)
    for (std::size_t j = 0; j < n; ++j) {
      sumr += pr[j];
      sumi += pi[j];
      const float nr = pr[j] * sr[j] - pi[j] * si[j];
      const float ni = pr[j] * si[j] + pi[j] * sr[j];
      pr[j] = nr;
      pi[j] = ni;
    }
    if (kr != 0) {
      const double wmag = std::abs(std::sin(M_PI * static_cast<double>(kr) / static_cast<double>(D))) /
                          (M_PI * static_cast<double>(k));
      const double a = dens * wmag *
                       std::sqrt(static_cast<double>(sumr) * sumr + static_cast<double>(sumi) * sumi);
      auto& bb = bands[static_cast<std::size_t>(band)];
      if (a > bb.sup) {
        bb.sup = a;
        bb.argmax = k;
      }
    }
    if (++kr == D) kr = 0;
  }
  return bands;
}

struct DecayFit {
  std::vector<BandSup> bands;
  double slope = 0;
  double beta_hat = 0;
  double residual = 0;
  int used_bands = 0;
  int zero_bands = 0;
};

inline DecayFit decay_fit_bands(const std::vector<BandSup>& bands) {
  DecayFit f;
  f.bands = bands;
  std::vector<double> xs, ys;
  for (const auto& b : bands) {
    if (b.sup > 0) {
      xs.push_back(b.m * std::log(2.0));
      ys.push_back(std::log(b.sup));
    } else {
      ++f.zero_bands;
    }
  }
  f.used_bands = static_cast<int>(xs.size());
  if (f.used_bands < 4)
    throw std::invalid_argument("decay_fit: needs at least 4 nonzero dyadic bands");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= xs.size();
  my /= ys.size();
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  f.slope = sxy / sxx;
  f.beta_hat = std::clamp(-2.0 * f.slope, 0.0, 1.0);
  double ss = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (my + f.slope * (xs[i] - mx));
    ss += r * r;
  }
  f.residual = std::sqrt(ss / xs.size());
  return f;
}

inline DecayFit decay_fit(const SpectrumTable& t) { return decay_fit_bands(band_sups_exact(t)); }

struct ParsevalCheck {
  double partial = 0;  // sum over |k| <= kmax of |mu_hat|^2
  double total = 0;    // integral of the squared density = weight
  double tail = 0;
};

inline ParsevalCheck parseval_check(const StepMeasure& m, const SpectrumTable& t) {
  ParsevalCheck p;
  p.total = m.density_value();
  double s = 0;
  for (std::int64_t k = 1; k <= t.kmax; ++k) s += std::norm(t.coeffs[static_cast<std::size_t>(k)]);
  p.partial = 1.0 + 2.0 * s;
  p.tail = p.total - p.partial;
  return p;
}

inline void write_spectrum_csv(const SpectrumTable& t, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_spectrum_csv: cannot open " + path);
  out << "k,re,im,abs\n";
  char buf[128];
  for (std::int64_t k = -t.kmax; k <= t.kmax; ++k) {
    const auto v = t.mu_hat(k);
    std::snprintf(buf, sizeof buf, "%lld,%.17g,%.17g,%.17g\n", static_cast<long long>(k),
                  v.real(), v.imag(), std::abs(v));
    out << buf;
  }
}

inline SpectrumTable read_spectrum_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_spectrum_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("k,re,im", 0) != 0)
    throw std::runtime_error("read_spectrum_csv: missing header");
  std::vector<std::pair<std::int64_t, std::complex<double>>> rows;
  std::int64_t kmax = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string tok;
    std::getline(ls, tok, ',');
    const std::int64_t k = std::stoll(tok);
    std::getline(ls, tok, ',');
    const double re = std::stod(tok);
    std::getline(ls, tok, ',');
    const double im = std::stod(tok);
    rows.emplace_back(k, std::complex<double>(re, im));
    kmax = std::max(kmax, k < 0 ? -k : k);
  }
  if (rows.empty()) throw std::runtime_error("read_spectrum_csv: no rows");
  SpectrumTable t;
  t.kmax = kmax;
  t.coeffs.assign(static_cast<std::size_t>(kmax) + 1, {0.0, 0.0});
  for (const auto& [k, v] : rows)
    if (k >= 0) t.coeffs[static_cast<std::size_t>(k)] = v;
  return t;
}

}  // namespace salem
