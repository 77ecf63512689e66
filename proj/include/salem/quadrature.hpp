#pragma once

#include <cmath>
#include <stdexcept>

namespace salem {

struct QuadResult {
  double value = 0;
  double error = 0;  // Richardson-style estimate from the half-resolution rule
};

template <class F>
double simpson(F&& f, double a, double b, int panels) {
  if (panels < 1) throw std::invalid_argument("simpson: need at least 1 panel");
  const double h = (b - a) / panels;
  double s = f(a) + f(b);
  for (int i = 1; i < panels; ++i) s += 2.0 * f(a + i * h);
  for (int i = 0; i < panels; ++i) s += 4.0 * f(a + (i + 0.5) * h);
  return s * h / 6.0;
}

// Composite Simpson with error estimated against half resolution:
// |I_n - I_{n/2}| / 15 (the rule's own Richardson constant).
template <class F>
QuadResult simpson_refined(F&& f, double a, double b, int panels) {
  if (panels < 2 || panels % 2 != 0)
    throw std::invalid_argument("simpson_refined: need an even panel count >= 2");
  const double fine = simpson(f, a, b, panels);
  const double coarse = simpson(f, a, b, panels / 2);
  return {fine, std::abs(fine - coarse) / 15.0};
}

template <class F>
double trapezoid(F&& f, double a, double b, int n) {
  if (n < 1) throw std::invalid_argument("trapezoid: need at least 1 panel");
  const double h = (b - a) / n;
  double s = 0.5 * (f(a) + f(b));
  for (int i = 1; i < n; ++i) s += f(a + i * h);
  return s * h;
}

}  // namespace salem
