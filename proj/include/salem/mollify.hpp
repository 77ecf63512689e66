#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include <fftw3.h>

#include "salem/measure.hpp"

namespace salem {

namespace detail {
inline double raw_bump(double x) {  // exp(-1/(1-x^2)) on (-1,1)
  if (std::abs(x) >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - x * x));
}
}  // namespace detail

// The standard C_c^infty bump psi(x) = c * exp(-1/(1-x^2)) with integral 1,
// plus precomputed tables for its CDF and its transform psi_hat(u) =
// integral psi(x) e^{-2 pi i u x} dx (real and even). The transform table is a
// length-N DFT of the sampled bump on a period-P torus; aliasing is below
// machine precision because |psi_hat| decays faster than any power.
class Bump {
 public:
  static const Bump& instance() {
    static const Bump b;
    return b;
  }

  double c() const { return c_; }
  double psi(double x) const { return c_ * detail::raw_bump(x); }

  double cdf(double u) const {  // integral of psi over (-1, u]
    if (u <= -1.0) return 0.0;
    if (u >= 1.0) return 1.0;
    const double s = (u + 1.0) / kCdfStep;
    std::size_t i = static_cast<std::size_t>(s);
    if (i >= kCdfPanels) i = kCdfPanels - 1;
    const double t = s - static_cast<double>(i);
    // cubic Hermite with exact slopes (the density itself)
    const double y0 = cdf_[i], y1 = cdf_[i + 1];
    const double m0 = slope_[i] * kCdfStep, m1 = slope_[i + 1] * kCdfStep;
    const double t2 = t * t, t3 = t2 * t;
    const double v = (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * m0 +
                     (-2 * t3 + 3 * t2) * y1 + (t3 - t2) * m1;
    // keep the interpolant inside its bracketing nodes so the result is a CDF
    return std::clamp(v, y0, y1);
  }

  double transform(double u) const {  // psi_hat, even in u
    u = std::abs(u);
    const double s = u / kHatStep;
    const std::size_t j = static_cast<std::size_t>(s);
    if (j + 2 >= hat_.size()) return 0.0;  // |psi_hat| < 1e-12 out there
    const double t = s - static_cast<double>(j);
    const double ym1 = j == 0 ? hat_[1] : hat_[j - 1];  // even extension at 0
    const double y0 = hat_[j], y1 = hat_[j + 1], y2 = hat_[j + 2];
    // Catmull-Rom
    return y0 + 0.5 * t * (y1 - ym1 +
                           t * (2 * ym1 - 5 * y0 + 4 * y1 - y2 +
                                t * (3 * (y0 - y1) + y2 - ym1)));
  }

  static constexpr double kHatStep = 1.0 / 128.0;
  static constexpr double kHatMax = 128.0;

 private:
  static constexpr std::size_t kCdfPanels = 8192;
  static constexpr double kCdfStep = 2.0 / kCdfPanels;

  Bump() {
    // transform table by DFT on a torus of period P = 128
    const std::size_t N = std::size_t(1) << 19;
    const double P = 128.0;
    const double h = P / static_cast<double>(N);
    double* in = fftw_alloc_real(N);
    fftw_complex* out = fftw_alloc_complex(N / 2 + 1);
    if (!in || !out) throw std::bad_alloc();
    for (std::size_t m = 0; m < N; ++m) {
      const double x = m * h;
      in[m] = detail::raw_bump(x <= P / 2 ? x : x - P);
    }
    fftw_plan plan = fftw_plan_dft_r2c_1d(static_cast<int>(N), in, out, FFTW_ESTIMATE);
    fftw_execute(plan);
    const std::size_t entries = static_cast<std::size_t>(kHatMax / kHatStep) + 1;
    hat_.resize(entries);
    const double mass = h * out[0][0];  // integral of the raw bump
    c_ = 1.0 / mass;
    for (std::size_t j = 0; j < entries; ++j) hat_[j] = h * out[j][0] * c_;
    fftw_destroy_plan(plan);
    fftw_free(in);
    fftw_free(out);

    // CDF by per-panel Simpson, end renormalized to exactly 1
    cdf_.assign(kCdfPanels + 1, 0.0);
    slope_.assign(kCdfPanels + 1, 0.0);
    for (std::size_t i = 0; i <= kCdfPanels; ++i)
      slope_[i] = c_ * detail::raw_bump(-1.0 + static_cast<double>(i) * kCdfStep);
    for (std::size_t i = 0; i < kCdfPanels; ++i) {
      const double x0 = -1.0 + static_cast<double>(i) * kCdfStep;
      const double mid = c_ * detail::raw_bump(x0 + 0.5 * kCdfStep);
      cdf_[i + 1] = cdf_[i] + kCdfStep / 6.0 * (slope_[i] + 4.0 * mid + slope_[i + 1]);
    }
    const double end = cdf_[kCdfPanels];
    for (auto& v : cdf_) v /= end;
    for (auto& v : slope_) v /= end;
  }

  double c_ = 0;
  std::vector<double> hat_, cdf_, slope_;
};

inline double psi(double x) { return Bump::instance().psi(x); }
inline double psi_cdf(double u) { return Bump::instance().cdf(u); }
inline double psi_hat(double u) { return Bump::instance().transform(u); }

// Pointwise evaluator of mu * psi_eps via the bump CDF: each cell [a,b] with
// density w contributes w * (Psi((x-a)/eps) - Psi((x-b)/eps)). Exact up to
// table interpolation, with no density grid in between.
class MollifiedMeasure {
 public:
  MollifiedMeasure(const StepMeasure& m, double eps) : eps_(eps), weight_(m.density_value()) {
    if (!(eps > 0)) throw std::invalid_argument("MollifiedMeasure: eps must be positive");
    left_.reserve(m.intervals.size());
    right_.reserve(m.intervals.size());
    for (const auto& iv : m.intervals) {
      left_.push_back(to_double(iv.left));
      right_.push_back(to_double(iv.right));
    }
  }

  double eps() const { return eps_; }

  double operator()(double x) const {
    // only cells meeting (x-eps, x+eps) contribute a value other than w*(1-1) or w*(0-0),
    // except cells containing x deep inside, which contribute exactly w
    const auto& B = Bump::instance();
    auto lo = std::upper_bound(right_.begin(), right_.end(), x - eps_);
    double acc = 0;
    for (std::size_t j = static_cast<std::size_t>(lo - right_.begin());
         j < left_.size() && left_[j] < x + eps_; ++j)
      acc += B.cdf((x - left_[j]) / eps_) - B.cdf((x - right_[j]) / eps_);
    return weight_ * acc;
  }

 private:
  double eps_, weight_;
  std::vector<double> left_, right_;
};

struct GridDensity {
  double h = 0;
  double eps = 0;
  double x0 = 0;  // first sample abscissa (-eps)
  std::vector<double> samples;

  double value(double x) const {
    const double s = (x - x0) / h;
    if (s <= 0 || s >= static_cast<double>(samples.size() - 1)) return 0.0;
    const std::size_t i = static_cast<std::size_t>(s);
    const double t = s - static_cast<double>(i);
    return samples[i] * (1.0 - t) + samples[i + 1] * t;
  }

  double trapezoid_mass() const {
    double s = 0.5 * (samples.front() + samples.back());
    for (std::size_t i = 1; i + 1 < samples.size(); ++i) s += samples[i];
    return s * h;
  }
};

inline GridDensity mollify(const StepMeasure& m, double eps, double h) {
  if (!(eps > 0)) throw std::invalid_argument("mollify: eps must be positive");
  if (!(h > 0) || h > eps / 8.0) throw std::invalid_argument("mollify: grid too coarse (need h <= eps/8)");
  MollifiedMeasure f(m, eps);
  GridDensity g;
  const std::size_t n = static_cast<std::size_t>(std::ceil((1.0 + 2.0 * eps) / h));
  g.h = (1.0 + 2.0 * eps) / static_cast<double>(n);
  g.eps = eps;
  g.x0 = -eps;
  g.samples.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i) g.samples[i] = f(g.x0 + static_cast<double>(i) * g.h);
  const double mass = g.trapezoid_mass();
  for (auto& v : g.samples) v /= mass;  // trapezoid mass becomes exactly 1
  return g;
}

}  // namespace salem
