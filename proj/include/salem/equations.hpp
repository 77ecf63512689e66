#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "salem/rational.hpp"

namespace salem {

enum class Genus { One, Two };
enum class SolutionClass { Trivial, Nontrivial };

// a*x1 + b*x2 = c*y1 + d*y2, coefficients positive, a+b = c+d.
// Genus two iff some proper nonempty subset of {a, b, -c, -d} sums to zero.
inline Genus classify_genus(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
  if (a < 1 || b < 1 || c < 1 || d < 1)
    throw std::invalid_argument("equation coefficients must be positive");
  if (a + b != c + d) throw std::invalid_argument("invalid equation: a+b != c+d");
  const std::array<std::int64_t, 4> signed_coeffs{a, b, -c, -d};
  for (unsigned mask = 1; mask < 15; ++mask) {
    std::int64_t sum = 0;
    for (int i = 0; i < 4; ++i)
      if (mask & (1u << i)) sum += signed_coeffs[i];
    if (sum == 0) return Genus::Two;
  }
  return Genus::One;
}

struct Equation {
  std::int64_t a = 1, b = 1, c = 1, d = 1;
  std::int64_t S = 2;
  Genus genus = Genus::Two;
  // genus-two value pairings permitted as trivial: (x1,x2)=(y1,y2) and/or (x1,x2)=(y2,y1)
  bool pair_direct = true, pair_swapped = true;

  static Equation make(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
    Equation eq;
    eq.a = a; eq.b = b; eq.c = c; eq.d = d;
    eq.S = a + b;
    eq.genus = classify_genus(a, b, c, d);
    eq.pair_direct = (a == c && b == d);
    eq.pair_swapped = (a == d && b == c);
    if (eq.genus == Genus::Two && !(eq.pair_direct || eq.pair_swapped))
      throw std::logic_error("genus two without {a,b}={c,d}");
    return eq;
  }

  bool operator==(const Equation& o) const {
    return a == o.a && b == o.b && c == o.c && d == o.d;
  }
};

struct NormalizedEquation {
  Rat s, t;
  bool swapped;  // (c,d) were exchanged to force t <= 1/2
};

inline NormalizedEquation normalize(const Equation& eq) {
  NormalizedEquation n{Rat(eq.a, eq.S), Rat(eq.c, eq.S), false};
  if (2 * eq.c > eq.S) {
    n.t = Rat(eq.d, eq.S);
    n.swapped = true;
  }
  return n;
}

inline Rat residual(const Equation& eq, const Rat& x1, const Rat& x2, const Rat& y1,
                    const Rat& y2) {
  return (x1 * eq.a + x2 * eq.b - y1 * eq.c - y2 * eq.d) / eq.S;
}

template <class T>
struct Quadruple {
  T x1, x2, y1, y2;
  bool operator==(const Quadruple& o) const {
    return x1 == o.x1 && x2 == o.x2 && y1 == o.y1 && y2 == o.y2;
  }
  bool operator<(const Quadruple& o) const {
    if (x1 != o.x1) return x1 < o.x1;
    if (x2 != o.x2) return x2 < o.x2;
    if (y1 != o.y1) return y1 < o.y1;
    return y2 < o.y2;
  }
};
using QuadI = Quadruple<std::int64_t>;
using QuadR = Quadruple<Rat>;

template <class T>
bool is_trivial_values(const Equation& eq, const T& x1, const T& x2, const T& y1, const T& y2) {
  if (eq.genus == Genus::One) return x1 == x2 && x2 == y1 && y1 == y2;
  if (eq.pair_direct && x1 == y1 && x2 == y2) return true;
  if (eq.pair_swapped && x1 == y2 && x2 == y1) return true;
  return false;
}

template <class T>
bool is_trivial(const Equation& eq, const Quadruple<T>& q) {
  return is_trivial_values(eq, q.x1, q.x2, q.y1, q.y2);
}

inline SolutionClass classify_solution(const Equation& eq, const Rat& x1, const Rat& x2,
                                       const Rat& y1, const Rat& y2) {
  if (residual(eq, x1, x2, y1, y2) != 0)
    throw std::invalid_argument("classify_solution: quadruple does not solve the equation");
  return is_trivial_values(eq, x1, x2, y1, y2) ? SolutionClass::Trivial
                                               : SolutionClass::Nontrivial;
}

inline constexpr std::size_t kScanCapDefault = 320;

// All nontrivial solution quadruples with coordinates in pts.
// Solves for y2 = (a*x1 + b*x2 - c*y1)/d and looks it up, so near-cubic
// instead of quartic. T is int64 or Rat.
template <class T>
std::vector<Quadruple<T>> scan_set(const Equation& eq, std::vector<T> pts,
                                   std::size_t cap = kScanCapDefault) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() > cap) throw std::length_error("scan_set: point cap exceeded");
  std::vector<Quadruple<T>> out;
  for (const T& x1 : pts)
    for (const T& x2 : pts) {
      const T lhs = x1 * eq.a + x2 * eq.b;
      for (const T& y1 : pts) {
        const T num = lhs - y1 * eq.c;
        T y2;
        if constexpr (std::is_integral_v<T>) {
          if (num % eq.d != 0) continue;
          y2 = num / eq.d;
        } else {
          y2 = num / eq.d;
        }
        if (!std::binary_search(pts.begin(), pts.end(), y2)) continue;
        if (!is_trivial_values(eq, x1, x2, y1, y2)) out.push_back({x1, x2, y1, y2});
      }
    }
  return out;
}

}  // namespace salem
