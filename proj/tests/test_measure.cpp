#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>

#include "salem/measure.hpp"

using namespace salem;
using Catch::Matchers::WithinAbs;

namespace {
const Equation kSidon = Equation::make(1, 1, 1, 1);

// continuous-form transform of the uniform density q/p on [0, p/q]
std::complex<double> uniform_hat(std::int64_t p, std::int64_t q, std::int64_t k) {
  if (k == 0) return {1.0, 0.0};
  const double w = static_cast<double>(p) / static_cast<double>(q);
  const std::complex<double> i2pik(0.0, 2.0 * M_PI * static_cast<double>(k));
  return (1.0 - std::exp(-i2pik * w)) / (i2pik * w);
}
}  // namespace

TEST_CASE("density: level 0 is Lebesgue on [0,1]") {
  auto t = build(derive_parameters(3, 4, kSidon, 1));
  auto m = density(t, 0);
  REQUIRE(m.intervals.size() == 1);
  REQUIRE(m.intervals[0] == RationalInterval{Rat(0), Rat(1)});
  REQUIRE(m.weight == 1);
  REQUIRE(m.D == 1);
}

TEST_CASE("density: exact mass and per-cell mass") {
  auto t = build(derive_parameters(5, 4, kSidon, 99));
  for (int n = 0; n <= 5; ++n) {
    auto m = density(t, n);
    const Rat width = m.intervals[0].right - m.intervals[0].left;
    Rat mass = 0;
    for (const auto& iv : m.intervals) {
      REQUIRE(iv.right - iv.left == width);
      mass += m.weight * (iv.right - iv.left);
    }
    REQUIRE(mass == 1);
    REQUIRE(m.weight * width == Rat(1, m.cells()));  // mass of one basic interval
  }
}

TEST_CASE("fourier_coefficient: closed forms") {
  auto whole = uniform_cells(1, 1);   // Lebesgue on [0,1]
  auto half = uniform_cells(2, 1);    // density 2 on [0,1/2]
  auto third = uniform_cells(3, 1);   // density 3 on [0,1/3]

  REQUIRE(fourier_coefficient(whole, 0) == std::complex<double>(1.0, 0.0));
  REQUIRE(fourier_coefficient(whole, 5) == std::complex<double>(0.0, 0.0));
  REQUIRE(fourier_coefficient(whole, -12) == std::complex<double>(0.0, 0.0));

  const auto c1 = fourier_coefficient(half, 1);
  REQUIRE_THAT(std::abs(c1), WithinAbs(2.0 / M_PI, 1e-12));
  REQUIRE_THAT(c1.real(), WithinAbs(0.0, 1e-12));
  REQUIRE_THAT(c1.imag(), WithinAbs(-2.0 / M_PI, 1e-12));

  for (std::int64_t k : {1, 2, 3, 5, 8, 100, 4097}) {
    const auto got = fourier_coefficient(third, k);
    const auto want = uniform_hat(1, 3, k);
    REQUIRE_THAT(std::abs(got - want), WithinAbs(0.0, 1e-13));
  }
}

TEST_CASE("fourier_coefficient: conjugate symmetry and unit bound") {
  auto t = build(derive_parameters(4, 4, kSidon, 31));
  auto m = density(t, 4);
  for (std::int64_t k : {1, 2, 7, 64, 1000, 12345}) {
    const auto plus = fourier_coefficient(m, k);
    const auto minus = fourier_coefficient(m, -k);
    REQUIRE_THAT(std::abs(minus - std::conj(plus)), WithinAbs(0.0, 1e-15));
    REQUIRE(std::abs(plus) <= 1.0 + 1e-12);
  }
}

TEST_CASE("spectrum: FFT cross-check records fp-level discrepancy") {
  auto t = build(derive_parameters(4, 4, kSidon, 8));
  auto m = density(t, 4);
  auto tbl = spectrum(m, 1024);
  REQUIRE(std::isfinite(tbl.fft_discrepancy));
  REQUIRE(tbl.fft_discrepancy <= 1e-8);

  // wide-cell measure exercises the grid refinement branch (G = r*D, r > 1)
  auto half = uniform_cells(2, 1);
  auto tbl2 = spectrum(half, 512);
  REQUIRE(tbl2.fft_discrepancy <= 1e-10);

  const auto fft = spectrum_fft(m, 256);
  for (std::int64_t k = 0; k <= 256; ++k)
    REQUIRE_THAT(std::abs(fft[k] - tbl.coeffs[k]), WithinAbs(0.0, 1e-10));
}

TEST_CASE("spectrum table: accessor symmetry and bounds") {
  auto tbl = spectrum(uniform_cells(2, 1), 16);
  REQUIRE(tbl.mu_hat(0) == std::complex<double>(1.0, 0.0));
  REQUIRE(tbl.mu_hat(-3) == std::conj(tbl.mu_hat(3)));
  REQUIRE_THROWS_AS(tbl.mu_hat(17), std::out_of_range);
}

TEST_CASE("parseval: partial sums approach the density energy") {
  auto half = uniform_cells(2, 1);
  auto t1 = spectrum(half, 1024);
  auto t2 = spectrum(half, 4096);
  auto p1 = parseval_check(half, t1);
  auto p2 = parseval_check(half, t2);
  REQUIRE(p1.total == 2.0);
  REQUIRE(p2.partial >= p1.partial);  // nondecreasing in kmax
  REQUIRE(p2.tail >= -1e-12);
  REQUIRE_THAT(p2.partial, WithinAbs(2.0, 5e-4));

  auto tm = build(derive_parameters(4, 4, kSidon, 3));
  auto m = density(tm, 4);
  auto tbl = spectrum(m, 2048);
  auto pc = parseval_check(m, tbl);
  REQUIRE_THAT(pc.total, WithinAbs(1680.0 / 8.0, 1e-9));
  REQUIRE(pc.partial >= 1.0);
  REQUIRE(pc.tail >= 0.0);  // truncation can only miss energy
}

TEST_CASE("decay_fit: uniform on [0,1/3] clamps to beta_hat = 1") {
  auto tbl = spectrum(uniform_cells(3, 1), 1 << 14);
  auto fit = decay_fit(tbl);
  REQUIRE(fit.zero_bands == 0);
  REQUIRE(fit.used_bands >= 10);
  REQUIRE(fit.slope < -0.4);  // raw decay exponent ~1, i.e. slope ~ -1
  REQUIRE(fit.beta_hat == 1.0);
}

TEST_CASE("decay_fit: lattice-commensurate measure has no usable bands") {
  auto tbl = spectrum(uniform_cells(1, 1), 1 << 10);
  REQUIRE_THROWS_AS(decay_fit(tbl), std::invalid_argument);
}

TEST_CASE("decay_fit: near point mass is flat") {
  auto tbl = spectrum(uniform_cells(1000000, 1), 1 << 12);
  auto fit = decay_fit(tbl);
  REQUIRE(fit.beta_hat <= 0.05);
}

TEST_CASE("decay_fit: invariant under circle translation") {
  auto t = build(derive_parameters(5, 4, kSidon, 77));
  auto m = density(t, 5);
  auto shifted = translate(m, 1717);
  auto f1 = decay_fit(spectrum(m, 1 << 12));
  auto f2 = decay_fit(spectrum(shifted, 1 << 12));
  REQUIRE_THAT(f1.beta_hat, WithinAbs(f2.beta_hat, 1e-12));
  REQUIRE_THAT(f1.slope, WithinAbs(f2.slope, 1e-12));
}

TEST_CASE("band_sups: streaming scanner matches the exact table") {
  auto t = build(derive_parameters(5, 4, kSidon, 123));
  auto m = density(t, 5);
  const std::int64_t kmax = 1 << 13;
  auto fast = band_sups(m, kmax);
  auto exact = band_sups_exact(spectrum(m, kmax));
  REQUIRE(fast.size() == exact.size());
  for (std::size_t i = 0; i < fast.size(); ++i) {
    REQUIRE(fast[i].m == exact[i].m);
    REQUIRE(fast[i].k_begin == exact[i].k_begin);
    REQUIRE(fast[i].k_end == exact[i].k_end);
    REQUIRE_THAT(fast[i].sup, WithinAbs(exact[i].sup, 2e-3));
  }
  // and the decay fits agree to scanner precision
  auto ffit = decay_fit_bands(fast);
  auto efit = decay_fit_bands(exact);
  REQUIRE_THAT(ffit.beta_hat, WithinAbs(efit.beta_hat, 5e-3));
}

TEST_CASE("spectrum csv: lossless round trip, deterministic bytes") {
  auto tbl = spectrum(uniform_cells(3, 1), 64);
  const std::string f1 = "salem_test_spec1.csv", f2 = "salem_test_spec2.csv";
  write_spectrum_csv(tbl, f1);
  auto back = read_spectrum_csv(f1);
  REQUIRE(back.kmax == tbl.kmax);
  for (std::int64_t k = 0; k <= tbl.kmax; ++k)
    REQUIRE(back.coeffs[k] == tbl.coeffs[k]);
  write_spectrum_csv(back, f2);
  std::ifstream a(f1, std::ios::binary), b(f2, std::ios::binary);
  std::string sa((std::istreambuf_iterator<char>(a)), std::istreambuf_iterator<char>());
  std::string sb((std::istreambuf_iterator<char>(b)), std::istreambuf_iterator<char>());
  REQUIRE(sa == sb);
  std::remove(f1.c_str());
  std::remove(f2.c_str());
}
