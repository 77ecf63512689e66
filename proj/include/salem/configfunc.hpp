#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

#include <salem/mollify.hpp>
#include <salem/quadrature.hpp>

namespace salem {

// Fejer kernel profile of bandwidth R: peak value R, transform (1-|v|/R)+.
inline double fejer(double R, double x) {
  const double a = M_PI * R * x;
  if (std::abs(a) < 1e-7) return R * (1.0 - a * a / 3.0);
  const double q = std::sin(a) / a;
  return R * q * q;
}

inline double fejer_hat(double R, double v) { return std::max(0.0, 1.0 - std::abs(v) / R); }

enum class TestKind { BandLimited, Continuous };

struct TestFunction {
  TestKind kind = TestKind::Continuous;
  double bandwidth = 0;  // Fourier support radius per axis (BandLimited only)
  double scale = 1;      // linear factor, mirrored in the closed-form transform
  double sup_norm = 0;   // true upper bound for |f| on [0,1]^3
  std::function<double(double, double, double)> eval;
};

// f(x) = scale * prod_i F_R(x_i - 1/2); centering at 1/2 keeps the peak inside the
// domain, and shows up as a phase e^{-i pi v} on each transform factor.
inline TestFunction fejer_product(double R, double scale = 1.0) {
  if (R <= 0) throw std::invalid_argument("fejer_product: bandwidth must be positive");
  TestFunction f;
  f.kind = TestKind::BandLimited;
  f.bandwidth = R;
  f.scale = scale;
  f.sup_norm = std::abs(scale) * R * R * R;
  f.eval = [R, scale](double x1, double x2, double y1) {
    return scale * fejer(R, x1 - 0.5) * fejer(R, x2 - 0.5) * fejer(R, y1 - 0.5);
  };
  return f;
}

inline TestFunction constant_fn(double c = 1.0) {
  TestFunction f;
  f.sup_norm = std::abs(c);
  f.eval = [c](double, double, double) { return c; };
  return f;
}

inline TestFunction continuous_fn(std::function<double(double, double, double)> g, double sup_bound) {
  if (!g) throw std::invalid_argument("continuous_fn: missing evaluator");
  TestFunction f;
  f.sup_norm = sup_bound;
  f.eval = std::move(g);
  return f;
}

enum class LambdaMethod { Direct, FourierSide };

struct LambdaEstimate {
  double value = 0;
  LambdaMethod method = LambdaMethod::Direct;
  double eps = 0;
  double step = 0;    // spatial step (direct) or frequency step (fourier)
  double cutoff = 0;  // fourier only
  double error_estimate = 0;
};

namespace detail {

inline int normalize_panels(int panels) { return std::max(8, 4 * ((panels + 3) / 4)); }

inline void require_st(double s, double t) {
  if (!(s > 0 && s < 1 && t > 0 && t < 0.9))
    throw std::invalid_argument("lambda: inadmissible (s,t); need 0 < s < 1 and t in (0, 0.9)");
}

// One tensor Simpson pass over [-m h, 1 + m h]^3 with n h = 1; m = 0 is the
// defining [0,1]^3 domain and m > 0 covers the eps fringe where the mollified
// density still lives (the test functions extend off the cube by their formulas).
// No (s,t) validation here: the s-averaged mass check hits the closed endpoints.
inline double lambda_direct_pass(const GridDensity& g, const TestFunction& f, double s, double t,
                                 int n, int m, double h) {
  const int total = n + 2 * m;
  const double c1 = s / (1.0 - t), c2 = (1.0 - s) / (1.0 - t), c3 = t / (1.0 - t);
  std::vector<double> node(total + 1), wmu(total + 1);
  for (int i = 0; i <= total; ++i) {
    node[i] = (i - m) * h;
    const double w = (i == 0 || i == total) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    wmu[i] = w * g.value(node[i]);
  }
  double acc = 0;
  for (int i1 = 0; i1 <= total; ++i1) {
    if (wmu[i1] == 0) continue;
    const double u1 = c1 * node[i1];
    for (int i2 = 0; i2 <= total; ++i2) {
      if (wmu[i2] == 0) continue;
      const double u12 = u1 + c2 * node[i2];
      const double w12 = wmu[i1] * wmu[i2];
      for (int i3 = 0; i3 <= total; ++i3) {
        if (wmu[i3] == 0) continue;
        const double mw = g.value(u12 - c3 * node[i3]);
        if (mw == 0) continue;
        acc += w12 * wmu[i3] * mw * f.eval(node[i1], node[i2], node[i3]);
      }
    }
  }
  const double third = h / 3.0;
  return acc * third * third * third;
}

inline double lambda_direct_value(const GridDensity& g, const TestFunction& f, double s, double t,
                                  int panels) {
  const int n = normalize_panels(panels);
  return lambda_direct_pass(g, f, s, t, n, 0, 1.0 / n);
}

inline GridDensity coarsen(const GridDensity& g) {
  GridDensity out;
  out.h = 2 * g.h;
  out.eps = g.eps;
  out.x0 = g.x0;
  for (std::size_t i = 0; i < g.samples.size(); i += 2) out.samples.push_back(g.samples[i]);
  return out;
}

// Three error components, all measured rather than modeled: Simpson refinement,
// density-grid refinement (interpolation bias, steps h against 2h), and the gap
// to the eps-extended domain (the Fourier side of Lemma 2.1 lives on all of R^3,
// the defining integral on [0,1]^3).
inline LambdaEstimate lambda_direct_core(const GridDensity& g, const TestFunction& f, double s,
                                         double t, int panels) {
  const int n = normalize_panels(panels);
  const double h = 1.0 / n;
  const int m = static_cast<int>(std::ceil(g.eps / h)) + 1;
  const double fine = lambda_direct_pass(g, f, s, t, n, 0, h);
  const double coarse = lambda_direct_pass(g, f, s, t, n / 2, 0, 2.0 * h);
  const double extended = lambda_direct_pass(g, f, s, t, n, m, h);
  const double regrid = lambda_direct_pass(coarsen(g), f, s, t, n, 0, h);
  LambdaEstimate est;
  est.value = fine;
  est.method = LambdaMethod::Direct;
  est.eps = g.eps;
  est.step = h;
  est.error_estimate = std::abs(fine - coarse) / 15.0 + std::abs(regrid - fine) / 3.0 +
                       std::abs(extended - fine);
  return est;
}

}  // namespace detail

inline LambdaEstimate lambda_direct(const GridDensity& g, const TestFunction& f, double s, double t,
                                    int panels = 256) {
  detail::require_st(s, t);
  if (!f.eval) throw std::invalid_argument("lambda_direct: test function has no evaluator");
  if (g.h <= 0 || g.eps <= 0 || g.samples.size() < 2)
    throw std::invalid_argument("lambda_direct: empty density grid");
  if (1.0 / detail::normalize_panels(panels) > g.eps)
    throw std::invalid_argument("lambda_direct: quadrature grid too coarse relative to eps");
  return detail::lambda_direct_core(g, f, s, t, panels);
}

// eps -> 0 value via one extrapolation stage over the ladder {eps0, eps0/2, eps0/4}:
// with A(eps) = A + k*eps + q*eps^2, B = 2A(eps/2) - A(eps) drops the linear term
// and the second difference (4B2 - B1)/3 drops the quadratic one.
inline LambdaEstimate lambda_extrapolated(const StepMeasure& m, const TestFunction& f, double s,
                                          double t, double eps0 = 0.04, int panels = 256) {
  detail::require_st(s, t);
  if (eps0 <= 0) throw std::invalid_argument("lambda_extrapolated: eps0 must be positive");
  double A[3], E[3];
  for (int r = 0; r < 3; ++r) {
    const double e = eps0 / (1 << r);
    const GridDensity g = mollify(m, e, e / 16.0);
    const LambdaEstimate est = lambda_direct(g, f, s, t, panels);
    A[r] = est.value;
    E[r] = est.error_estimate;
  }
  const double b1 = 2.0 * A[1] - A[0];
  const double b2 = 2.0 * A[2] - A[1];
  LambdaEstimate out;
  out.value = (4.0 * b2 - b1) / 3.0;
  out.method = LambdaMethod::Direct;
  out.eps = eps0;
  out.step = 1.0 / detail::normalize_panels(panels);
  out.error_estimate = std::abs(out.value - b2) + (E[0] + 6.0 * E[1] + 8.0 * E[2]) / 3.0;
  return out;
}

// Continuous-argument transform of a step measure, cell by cell:
// mu_hat(u) = weight * sum_j w_j * sinc(pi u w_j) * e^{-2 pi i u (a_j + w_j/2)}.
class TransformEvaluator {
 public:
  explicit TransformEvaluator(const StepMeasure& m) : weight_(m.density_value()) {
    if (m.intervals.empty()) throw std::invalid_argument("TransformEvaluator: empty measure");
    for (const auto& iv : m.intervals) {
      const double a = to_double(iv.left), b = to_double(iv.right);
      mid_.push_back(0.5 * (a + b));
      width_.push_back(b - a);
    }
  }

  std::complex<double> operator()(double u) const {
    if (u == 0) return {1.0, 0.0};
    double re = 0, im = 0;
    for (std::size_t j = 0; j < mid_.size(); ++j) {
      const double arg = M_PI * u * width_[j];
      const double snc = std::abs(arg) < 1e-8 ? 1.0 - arg * arg / 6.0 : std::sin(arg) / arg;
      const double ph = -2.0 * M_PI * u * mid_[j];
      const double amp = width_[j] * snc;
      re += amp * std::cos(ph);
      im += amp * std::sin(ph);
    }
    return {weight_ * re, weight_ * im};
  }

 private:
  double weight_ = 0;
  std::vector<double> mid_, width_;
};

// Fourier-side quadrature of Lemma-2.1 shape: the eta integrals collapse to three
// 1-D integrals over the transform's R-box because f_hat factorizes, so the value
// is int mu_hat(xi) g1(xi) g2(xi) g3(xi) dxi with
//   g_i(xi) = int_{-R}^{R} (1-|v|/R) e^{-i pi v} mu_hat_eps(-v + shift_i(xi)) dv,
// shifts -c1 xi, -c2 xi, +c3 xi. Conjugate symmetry halves the xi range.
inline LambdaEstimate lambda_fourier(const TransformEvaluator& mu, double eps,
                                     const TestFunction& f, double s, double t, double cutoff = 0.0,
                                     int per_unit = 16) {
  detail::require_st(s, t);
  if (f.kind != TestKind::BandLimited)
    throw std::invalid_argument("lambda_fourier: need a band-limited test function");
  const double R = f.bandwidth;
  if (R <= 0) throw std::invalid_argument("lambda_fourier: bandwidth must be positive");
  if (eps < 0) throw std::invalid_argument("lambda_fourier: eps must be nonnegative");
  if (per_unit < 2) throw std::invalid_argument("lambda_fourier: per_unit too small");
  double xi_max = cutoff;
  if (xi_max <= 0) {
    if (eps == 0)
      throw std::invalid_argument("lambda_fourier: unmollified run needs an explicit cutoff");
    xi_max = 64.0 / eps;  // the numeric psi_hat is below 1e-11 past here
  }
  if (xi_max < 4.0 * R)
    throw std::invalid_argument("lambda_fourier: cutoff too small against the bandwidth");

  const double c1 = s / (1.0 - t), c2 = (1.0 - s) / (1.0 - t), c3 = t / (1.0 - t);
  auto muh = [&](double u) -> std::complex<double> {
    const std::complex<double> v = mu(u);
    return eps > 0 ? v * psi_hat(eps * u) : v;
  };

  const double hxi = 1.0 / per_unit;
  long long npan = std::llround(xi_max / hxi);
  npan = 4 * ((npan + 3) / 4);
  const double xi_eff = npan * hxi;
  const int nv0 = std::max(8, 4 * static_cast<int>(std::lround(R * per_unit / 2.0)));

  // one full quadrature at a given resolution in both the outer xi grid and the
  // inner v grids; halving both exposes every discretization bias to Richardson
  auto run = [&](long long np, int nv) -> double {
    const double hx = xi_eff / np;
    const double hv = 2.0 * R / nv;
    std::vector<double> vnode(nv + 1), vcoef(nv + 1);
    std::vector<std::complex<double>> vph(nv + 1);
    for (int i = 0; i <= nv; ++i) {
      vnode[i] = -R + i * hv;
      const double w = (i == 0 || i == nv) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      vcoef[i] = w * (hv / 3.0) * fejer_hat(R, vnode[i]);
      vph[i] = std::polar(1.0, -M_PI * vnode[i]);
    }
    auto g_at = [&](double shift) {
      std::complex<double> acc = 0;
      for (int i = 0; i <= nv; ++i)
        if (vcoef[i] != 0) acc += vcoef[i] * vph[i] * muh(-vnode[i] + shift);
      return acc;
    };
    double acc = 0;
    for (long long k = 0; k <= np; ++k) {
      const double xi = k * hx;
      const double w = (k == 0 || k == np) ? 1.0 : (k % 2 ? 4.0 : 2.0);
      const std::complex<double> big =
          (muh(xi) * g_at(-c1 * xi)) * (g_at(-c2 * xi) * g_at(c3 * xi));
      acc += w * big.real();
    }
    return 2.0 * acc * hx / 3.0;  // conjugate symmetry doubles the xi >= 0 half
  };
  const double fine = run(npan, nv0);
  const double coarse = run(npan / 2, nv0 / 2);

  double tail = 0;
  if (eps > 0) {
    // |g_i| <= R and |mu_hat_eps(xi)| <= psi_hat(eps |xi|), integrated past the cutoff
    const double du = 1.0 / 128.0;
    double hat_tail = 0;
    for (double u = eps * xi_eff; u < 128.0; u += du) hat_tail += std::abs(psi_hat(u)) * du;
    tail = std::abs(f.scale) * R * R * R * (2.0 / eps) * hat_tail;
  }

  LambdaEstimate est;
  est.value = fine * f.scale;
  est.method = LambdaMethod::FourierSide;
  est.eps = eps;
  est.step = hxi;
  est.cutoff = xi_eff;
  est.error_estimate = std::abs(fine - coarse) / 15.0 * std::abs(f.scale) + tail;
  return est;
}

inline LambdaEstimate lambda_fourier(const StepMeasure& m, double eps, const TestFunction& f,
                                     double s, double t, double cutoff = 0.0, int per_unit = 16) {
  return lambda_fourier(TransformEvaluator(m), eps, f, s, t, cutoff, per_unit);
}

// C'(s,t): 2 C^4 int_0^inf (1+xi)^-b (1+c1 xi)^-b (1+c2 xi)^-b (1+c3 xi)^-b dxi.
// Doubling panels run until every factor is in its power regime, then a two-term
// power tail. The factor pairing keeps the value bit-identical under s <-> 1-s.
inline double cprime(double s, double t, double beta, double C = 1.0) {
  if (!(s > 0 && s < 1 && t > 0 && t < 1))
    throw std::invalid_argument("cprime: need (s,t) in (0,1)^2");
  if (!(4.0 * beta > 1.0))
    throw std::domain_error("cprime: 4*beta > 1 is required for convergence of the integral");
  const double c1 = s / (1.0 - t), c2 = (1.0 - s) / (1.0 - t), c3 = t / (1.0 - t);
  auto integrand = [&](double xi) {
    const double p03 = std::pow(1.0 + xi, -beta) * std::pow(1.0 + c3 * xi, -beta);
    const double p12 = std::pow(1.0 + c1 * xi, -beta) * std::pow(1.0 + c2 * xi, -beta);
    return p03 * p12;
  };
  double head = simpson(integrand, 0.0, 1.0, 64);
  const double cmin = std::min(std::min(c1, c2), std::min(1.0, c3));
  double X = 1.0;
  while (X < 1048576.0 || cmin * X < 256.0) {
    head += simpson(integrand, X, 2.0 * X, 64);
    X *= 2.0;
    if (X > 1e300) throw std::domain_error("cprime: coefficient underflow in the tail split");
  }
  const double pc = std::pow(c3, -beta) * (std::pow(c1, -beta) * std::pow(c2, -beta));
  const double inv_sum = (1.0 + 1.0 / c3) + (1.0 / c1 + 1.0 / c2);
  const double tail = pc * (std::pow(X, 1.0 - 4.0 * beta) / (4.0 * beta - 1.0) -
                            beta * inv_sum * std::pow(X, -4.0 * beta) / (4.0 * beta));
  const double C4 = (C * C) * (C * C);
  return 2.0 * C4 * (head + tail);
}

struct RegionDecomposition {
  double s = 0, t = 0, beta = 0;
  double b1 = 0, b2 = 0;                     // (1-t)/(1-s) and (1-t)/s
  double pref1 = 0, pref2 = 0, pref3 = 0;    // accumulated region prefactors

  int region_of(double xi) const {
    const double a = std::abs(xi);
    return a < b1 ? 1 : (a < b2 ? 2 : 3);
  }

  double approximant(double xi) const {
    const double a = std::abs(xi);
    switch (region_of(a)) {
      case 1: return pref1 * std::pow(a, -2.0 * beta);
      case 2: return pref2 * std::pow(a, -3.0 * beta);
      default: return pref3 * std::pow(a, -4.0 * beta);
    }
  }

  double exact_integrand(double xi) const {
    const double a = std::abs(xi);
    const double c1 = s / (1.0 - t), c2 = (1.0 - s) / (1.0 - t), c3 = t / (1.0 - t);
    return std::pow(1.0 + a, -beta) * std::pow(1.0 + c1 * a, -beta) *
           std::pow(1.0 + c2 * a, -beta) * std::pow(1.0 + c3 * a, -beta);
  }
};

inline RegionDecomposition region_decomposition(double s, double t, double beta) {
  if (!(s > 0 && s <= 0.5 && t > 0 && t <= 0.5))
    throw std::invalid_argument("region_decomposition: canonical range is (0,1/2] x (0,1/2]");
  if (beta <= 0) throw std::invalid_argument("region_decomposition: beta must be positive");
  RegionDecomposition r;
  r.s = s;
  r.t = t;
  r.beta = beta;
  r.b1 = (1.0 - t) / (1.0 - s);
  r.b2 = (1.0 - t) / s;
  const double q1 = std::pow((1.0 - t) / t, -beta);
  const double q2 = std::pow((1.0 - s) / t, -beta);
  const double q3 = std::pow(s / t, -beta);
  r.pref1 = q1;
  r.pref2 = q1 * q2;
  r.pref3 = q1 * q2 * q3;
  return r;
}

// Closed-form upper bounds for the three region pieces of int_0^{1/2} C'(s,t) ds.
// The middle piece changes form at beta = 1/3 (logarithmic branch) and the first
// at beta = 1/2.
struct SIntegralBounds {
  double r1 = 0, r2 = 0, r3 = 0;
  double sum() const { return r1 + r2 + r3; }
};

inline SIntegralBounds cprime_s_bounds(double t, double beta) {
  if (!(t > 0 && t < 0.5)) throw std::invalid_argument("cprime_s_bounds: need 0 < t < 1/2");
  if (!(beta > 0.25 && beta <= 0.5))
    throw std::invalid_argument("cprime_s_bounds: beta outside (1/4, 1/2]");
  SIntegralBounds b;
  const double omt = 1.0 - t;
  if (std::abs(beta - 0.5) < 1e-12) {
    const double rt = std::sqrt(t / omt);
    b.r1 = rt * t * std::log(t / omt + 2.0 * t) + 0.5 * rt * std::log(omt / t);
  } else {
    b.r1 = std::pow(t, 1.0 - beta) * std::pow(2.0, -2.0 * beta) /
           (std::pow(omt, beta) * (1.0 - 2.0 * beta));
  }
  if (std::abs(3.0 * beta - 1.0) < 1e-9) {
    b.r2 = std::pow(t, 2.0 * beta) * std::pow(2.0, beta) * std::log(2.0) / std::pow(omt, beta);
  } else if (beta < 1.0 / 3.0) {
    b.r2 = std::pow(2.0, beta) * std::pow(t, 2.0 * beta) * std::pow(omt, 1.0 - 3.0 * beta) /
           ((1.0 - 3.0 * beta) * std::pow(omt, beta) * 3.0 * beta);
  } else {
    b.r2 = std::pow(t, 2.0 * beta) * std::pow(2.0, beta) * (1.0 - std::pow(2.0, 1.0 - 3.0 * beta)) /
           (3.0 * beta * (3.0 * beta - 1.0) * std::pow(omt, beta));
  }
  b.r3 = std::pow(t, 3.0 * beta) / (3.0 * beta * std::pow(2.0, 3.0 * beta) * (1.0 + 4.0 * beta) *
                                    std::pow(omt, 5.0 * beta - 1.0));
  return b;
}

struct SIntegralResult {
  double value = 0;
  double refinement = 0;  // change under doubling the s-grid
  double bound_sum = 0;   // closed-form region bounds at (t, beta)
};

// int_0^1 C'(s,t) ds by s-symmetry, flattening the s = 0 endpoint with s = u^4/2;
// the substituted integrand behaves like u^{12 beta - 1} there, so plain Simpson
// converges even where C' itself blows up.
inline SIntegralResult cprime_s_integral(double t, double beta, int panels = 64) {
  if (!(t > 0 && t < 0.5)) throw std::invalid_argument("cprime_s_integral: need 0 < t < 1/2");
  if (!(beta > 0.25 && beta <= 0.5))
    throw std::invalid_argument("cprime_s_integral: beta outside (1/4, 1/2]");
  if (panels < 4) throw std::invalid_argument("cprime_s_integral: too few panels");
  auto g = [&](double u) {
    if (u <= 0) return 0.0;
    const double u3 = u * u * u;
    return cprime(0.5 * u3 * u, t, beta) * 2.0 * u3;
  };
  const double coarse = 2.0 * simpson(g, 0.0, 1.0, panels);
  const double fine = 2.0 * simpson(g, 0.0, 1.0, 2 * panels);
  SIntegralResult r;
  r.value = fine;
  r.refinement = std::abs(fine - coarse);
  r.bound_sum = cprime_s_bounds(t, beta).sum();
  if (!(r.value <= 1000.0 * r.bound_sum))
    throw std::runtime_error("cprime_s_integral: value escaped the closed-form bound envelope");
  return r;
}

// (4!/(1-t)) * int_0^1 Lambda[|x1-x2|](s,t) ds; the paper's chain bounds this below
// by 1 for probability densities.
inline double mass_inequality_check(const GridDensity& g, double t, int s_panels = 16,
                                    int panels = 256) {
  if (!(t > 0 && t <= 0.5))
    throw std::invalid_argument("mass_inequality_check: canonical range is 0 < t <= 1/2");
  if (s_panels < 2) throw std::invalid_argument("mass_inequality_check: too few s panels");
  if (std::abs(g.trapezoid_mass() - 1.0) > 1e-6)
    throw std::invalid_argument("mass_inequality_check: density is not a probability density");
  TestFunction f0;
  f0.sup_norm = 1.0;
  f0.eval = [](double x1, double x2, double) { return std::abs(x1 - x2); };
  auto lam = [&](double s) { return detail::lambda_direct_value(g, f0, s, t, panels); };
  return 24.0 / (1.0 - t) * simpson(lam, 0.0, 1.0, s_panels);
}

struct ContinuityReport {
  std::vector<int> sizes;                   // grid points per axis, level by level
  std::vector<double> moduli;               // max adjacent difference per level
  std::vector<std::vector<double>> tables;  // row-major (s rows, t columns) values
};

// Discrete modulus of continuity of (s,t) -> Lambda[f](s,t) on [lo,hi]^2 under
// dyadic refinement.
inline ContinuityReport continuity_probe(const StepMeasure& m, double eps, const TestFunction& f,
                                         double lo, double hi, int n0 = 8, int levels = 3,
                                         double cutoff = 0.0, int per_unit = 8) {
  if (!(0 < lo && lo < hi && hi < 1))
    throw std::invalid_argument("continuity_probe: grid box must sit inside (0,1)^2");
  if (n0 < 2 || levels < 1) throw std::invalid_argument("continuity_probe: bad grid request");
  const TransformEvaluator mu(m);
  ContinuityReport rep;
  for (int lev = 0; lev < levels; ++lev) {
    const int n = n0 << lev;
    const double h = (hi - lo) / n;
    std::vector<double> tab(static_cast<std::size_t>(n + 1) * (n + 1));
    for (int i = 0; i <= n; ++i)
      for (int j = 0; j <= n; ++j)
        tab[static_cast<std::size_t>(i) * (n + 1) + j] =
            lambda_fourier(mu, eps, f, lo + i * h, lo + j * h, cutoff, per_unit).value;
    double mod = 0;
    for (int i = 0; i <= n; ++i)
      for (int j = 0; j < n; ++j) {
        const std::size_t row = static_cast<std::size_t>(i) * (n + 1);
        const std::size_t col = static_cast<std::size_t>(j) * (n + 1) + i;
        mod = std::max(mod, std::abs(tab[row + j + 1] - tab[row + j]));
        mod = std::max(mod, std::abs(tab[col + n + 1] - tab[col]));
      }
    rep.sizes.push_back(n + 1);
    rep.moduli.push_back(mod);
    rep.tables.push_back(std::move(tab));
  }
  return rep;
}

// Fejer-type cutoff: smooth, >= 1 on [-1,1] (equality at the endpoints), Fourier
// support in [-1/2, 1/2].
inline double chi_fejer(double x) {
  const double a = 0.5 * M_PI * x;
  if (std::abs(a) < 1e-7) return (M_PI * M_PI / 4.0) * (1.0 - a * a / 3.0);
  const double q = std::sin(a) / a;
  return (M_PI * M_PI / 4.0) * q * q;
}

// <Lambda, chi(delta^-1 (x1 - y1))> for each delta; for measures with genuine
// Fourier decay the sequence falls toward 0 as the diagonal slab narrows.
inline std::vector<double> diagonal_vanishing_probe(const GridDensity& g, double s, double t,
                                                    const std::vector<double>& deltas,
                                                    int panels = 512) {
  detail::require_st(s, t);
  std::vector<double> out;
  out.reserve(deltas.size());
  for (const double d : deltas) {
    if (d <= 0) throw std::invalid_argument("diagonal_vanishing_probe: delta must be positive");
    TestFunction f;
    f.sup_norm = M_PI * M_PI / 4.0;
    f.eval = [d](double x1, double, double y1) { return chi_fejer((x1 - y1) / d); };
    out.push_back(detail::lambda_direct_value(g, f, s, t, panels));
  }
  return out;
}

}  // namespace salem
