#pragma once

// Brute-force reference implementations. Deliberately naive: these are the
// ground truth the fast library paths are tested against.

#include <cstdint>
#include <optional>
#include <vector>

#include "salem/equations.hpp"

namespace oracles {

// Exhaustive subset-sum genus check over all 14 proper nonempty subsets.
inline salem::Genus genus_oracle(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
  const std::int64_t v[4] = {a, b, -c, -d};
  for (int pick0 = 0; pick0 < 2; ++pick0)
    for (int pick1 = 0; pick1 < 2; ++pick1)
      for (int pick2 = 0; pick2 < 2; ++pick2)
        for (int pick3 = 0; pick3 < 2; ++pick3) {
          const int count = pick0 + pick1 + pick2 + pick3;
          if (count == 0 || count == 4) continue;
          if (pick0 * v[0] + pick1 * v[1] + pick2 * v[2] + pick3 * v[3] == 0)
            return salem::Genus::Two;
        }
  return salem::Genus::One;
}

// Quartic scan: every ordered quadruple, direct solution + triviality test.
template <class T>
std::vector<salem::Quadruple<T>> quartic_scan_oracle(const salem::Equation& eq,
                                                     const std::vector<T>& pts) {
  std::vector<salem::Quadruple<T>> out;
  for (const T& x1 : pts)
    for (const T& x2 : pts)
      for (const T& y1 : pts)
        for (const T& y2 : pts) {
          if (x1 * eq.a + x2 * eq.b != y1 * eq.c + y2 * eq.d) continue;
          bool trivial;
          if (eq.genus == salem::Genus::One) {
            trivial = (x1 == x2 && x2 == y1 && y1 == y2);
          } else {
            trivial = (eq.pair_direct && x1 == y1 && x2 == y2) ||
                      (eq.pair_swapped && x1 == y2 && x2 == y1);
          }
          if (!trivial) out.push_back({x1, x2, y1, y2});
        }
  return out;
}

template <class T>
bool avoiding_oracle(const salem::Equation& eq, const std::vector<T>& pts) {
  return quartic_scan_oracle(eq, pts).empty();
}

// Largest subset of [1..range] with no nontrivial solutions, by full 2^range search.
inline std::size_t max_avoiding_subset_oracle(const salem::Equation& eq, int range) {
  std::size_t best = 0;
  for (unsigned mask = 1; mask < (1u << range); ++mask) {
    std::vector<std::int64_t> pts;
    for (int i = 0; i < range; ++i)
      if (mask & (1u << i)) pts.push_back(i + 1);
    if (pts.size() > best && avoiding_oracle(eq, pts)) best = pts.size();
  }
  return best;
}

// Quartic candidate-box scan over interval indices: |a jx + b jy - c ju - d jv| <= S
// is the exact closed-interval solvability test for boxes [j/N,(j+1)/N]^4.
struct BoxCounts {
  std::int64_t candidates = 0, trivial_pattern = 0, violations = 0;
  std::vector<std::array<std::int64_t, 4>> violation_list;
};

inline BoxCounts quartic_box_oracle(const salem::Equation& eq,
                                    const std::vector<std::int64_t>& idx) {
  BoxCounts out;
  for (auto jx : idx)
    for (auto jy : idx)
      for (auto ju : idx)
        for (auto jv : idx) {
          const std::int64_t T = eq.a * jx + eq.b * jy - eq.c * ju - eq.d * jv;
          if (T < -eq.S || T > eq.S) continue;
          ++out.candidates;
          bool trivial;
          if (eq.genus == salem::Genus::One) {
            trivial = (jx == jy && jy == ju && ju == jv);
          } else {
            trivial = (eq.pair_direct && jx == ju && jy == jv) ||
                      (eq.pair_swapped && jx == jv && jy == ju);
          }
          if (trivial) {
            ++out.trivial_pattern;
          } else {
            ++out.violations;
            out.violation_list.push_back({jx, jy, ju, jv});
          }
        }
  return out;
}

}  // namespace oracles
