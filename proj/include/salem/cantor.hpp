#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "salem/avoidsets.hpp"
#include "salem/equations.hpp"
#include "salem/rational.hpp"
#include "salem/rng.hpp"

namespace salem {

// Level-n cells have width 1/(M_1 ... M_n) with M_n = base + n. Each level uses
// the scaled avoiding set U = (S+1) * V(ceil(M_n / K)), K = S^2 + abcd, so that
// every digit set placed inside a cell inherits the avoidance property under
// the admissible affine maps.
struct CantorParameters {
  Equation eq;
  int depth = 1;
  std::int64_t base = 4;
  std::uint64_t seed = 0;
  std::vector<std::int64_t> M;          // M_n, n = 1..depth
  std::vector<std::int64_t> M_reduced;  // ceil(M_n / K)
  std::vector<std::int64_t> L;          // #U at each level
  std::vector<std::vector<std::int64_t>> U;

  bool operator==(const CantorParameters& o) const {
    return eq.a == o.eq.a && eq.b == o.eq.b && eq.c == o.eq.c && eq.d == o.eq.d &&
           depth == o.depth && base == o.base && seed == o.seed;
  }
};

inline CantorParameters derive_parameters(int depth, std::int64_t base, const Equation& eq,
                                          std::uint64_t seed = 0) {
  if (depth < 1) throw std::invalid_argument("derive_parameters: depth must be >= 1");
  if (base < 4) throw std::invalid_argument("derive_parameters: base must be >= 4");
  CantorParameters p;
  p.eq = eq;
  p.depth = depth;
  p.base = base;
  p.seed = seed;
  const std::int64_t K = scale_modulus(eq);
  std::map<std::int64_t, std::vector<std::int64_t>> cache;  // reduced modulus -> V
  for (int n = 1; n <= depth; ++n) {
    const std::int64_t Mn = base + n;
    const std::int64_t Mr = (Mn + K - 1) / K;
    auto it = cache.find(Mr);
    if (it == cache.end()) it = cache.emplace(Mr, construct(Mr, eq).V).first;
    std::vector<std::int64_t> Un;
    Un.reserve(it->second.size());
    for (std::int64_t v : it->second) Un.push_back((eq.S + 1) * v);
    if (Un.empty() || Un.back() > Mn)
      throw std::domain_error("derive_parameters: base " + std::to_string(base) +
                              " too small for this equation at level " + std::to_string(n) +
                              " (scaled digit set exceeds the modulus)");
    p.M.push_back(Mn);
    p.M_reduced.push_back(Mr);
    p.L.push_back(static_cast<std::int64_t>(Un.size()));
    p.U.push_back(std::move(Un));
  }
  return p;
}

// Nodes at level n are stored in lexicographic path order. digits[n-1] holds the
// child digit of every level-n node (parent-major), shifts[n] the random shift
// drawn at every level-n node (n = 0..depth-1).
struct CantorTree {
  CantorParameters params;
  std::vector<std::vector<std::int64_t>> shifts;
  std::vector<std::vector<std::int32_t>> digits;
  std::vector<std::int64_t> count;  // nodes per level, count[0] = 1

  bool operator==(const CantorTree& o) const {
    return params == o.params && shifts == o.shifts && digits == o.digits;
  }
};

inline CantorTree build(const CantorParameters& p) {
  CantorTree t;
  t.params = p;
  t.count.assign(static_cast<std::size_t>(p.depth) + 1, 0);
  t.count[0] = 1;
  std::vector<std::uint64_t> keys{p.seed};
  for (int n = 0; n < p.depth; ++n) {
    const std::int64_t Mn = p.M[n];
    const auto& Un = p.U[n];
    auto& sh = t.shifts.emplace_back();
    auto& dg = t.digits.emplace_back();
    sh.reserve(keys.size());
    dg.reserve(keys.size() * Un.size());
    std::vector<std::uint64_t> child_keys;
    child_keys.reserve(keys.size() * Un.size());
    std::vector<std::int32_t> kids(Un.size());
    for (std::uint64_t key : keys) {
      SplitMix64 stream(draw_seed(key));
      const std::int64_t l = static_cast<std::int64_t>(stream.below(static_cast<std::uint64_t>(Mn)));
      sh.push_back(l);
      for (std::size_t i = 0; i < Un.size(); ++i)
        kids[i] = static_cast<std::int32_t>((Un[i] + l) % Mn);
      std::sort(kids.begin(), kids.end());
      for (std::int32_t j : kids) {
        dg.push_back(j);
        child_keys.push_back(derive_child_key(key, static_cast<std::uint64_t>(j)));
      }
    }
    keys = std::move(child_keys);
    t.count[static_cast<std::size_t>(n) + 1] = static_cast<std::int64_t>(dg.size());
  }
  return t;
}

inline BigInt level_denominator(const CantorParameters& p, int n) {
  BigInt D = 1;
  for (int k = 0; k < n; ++k) D *= p.M[k];
  return D;
}

// Exact labels: the level-n cell of a node with digits (j_1..j_n) is
// [l / D_n, (l+1) / D_n] with l = sum j_k * M_{k+1} ... M_n. Labels come out
// strictly increasing in node order. Throws if D_n overflows the fast path.
inline std::vector<std::int64_t> level_labels(const CantorTree& t, int n) {
  if (n < 0 || n > t.params.depth) throw std::invalid_argument("level_labels: level out of range");
  __int128 D = 1;
  for (int k = 0; k < n; ++k) {
    D *= t.params.M[k];
    if (D > (__int128(1) << 62)) throw std::domain_error("level_labels: denominator exceeds 2^62");
  }
  std::vector<std::int64_t> labels{0};
  for (int k = 0; k < n; ++k) {
    std::vector<std::int64_t> next;
    next.reserve(labels.size() * static_cast<std::size_t>(t.params.L[k]));
    std::size_t idx = 0;
    for (std::int64_t p : labels)
      for (std::int64_t r = 0; r < t.params.L[k]; ++r)
        next.push_back(p * t.params.M[k] + t.digits[k][idx++]);
    labels = std::move(next);
  }
  return labels;
}

struct RationalInterval {
  Rat left, right;
  bool operator==(const RationalInterval& o) const { return left == o.left && right == o.right; }
};

inline std::vector<RationalInterval> intervals(const CantorTree& t, int n) {
  if (n < 0 || n > t.params.depth) throw std::invalid_argument("intervals: level out of range");
  std::vector<BigInt> labels{0};
  for (int k = 0; k < n; ++k) {
    std::vector<BigInt> next;
    next.reserve(labels.size() * static_cast<std::size_t>(t.params.L[k]));
    std::size_t idx = 0;
    for (const BigInt& p : labels)
      for (std::int64_t r = 0; r < t.params.L[k]; ++r)
        next.push_back(p * t.params.M[k] + t.digits[k][idx++]);
    labels = std::move(next);
  }
  const BigInt D = level_denominator(t.params, n);
  std::vector<RationalInterval> out;
  out.reserve(labels.size());
  for (const BigInt& l : labels) out.push_back({Rat(l, D), Rat(l + 1, D)});
  return out;
}

struct ScanReport {
  int level = 0;
  std::int64_t candidate_boxes = 0;
  std::int64_t diagonal_boxes = 0;
  std::int64_t trivial_pattern_boxes = 0;  // non-diagonal, reducible by pattern
  std::int64_t violation_count = 0;
  std::vector<std::array<std::int64_t, 4>> violations;  // cell labels, capped
};

// Scans all quadruples of level-n cells whose closed interval image under
// a x1 + b x2 - c y1 - d y2 contains a point of absolute value <= S / D_n,
// i.e. could host a solution. A candidate reduces if, at the first level where
// the four digit paths separate, the digit quadruple matches a permitted
// pairing; anything else is a violation.
inline ScanReport solution_scan(const CantorTree& t, int n, std::size_t cap = 64) {
  ScanReport rep;
  rep.level = n;
  if (n < 0 || n > t.params.depth) throw std::invalid_argument("solution_scan: level out of range");
  if (n == 0) {  // single cell [0,1]; the diagonal box is the whole cube
    rep.candidate_boxes = 1;
    rep.diagonal_boxes = 1;
    return rep;
  }
  const auto labels = level_labels(t, n);
  // suffix products of L to climb from a level-n node index to its ancestors
  std::vector<std::int64_t> suffix(static_cast<std::size_t>(n) + 1, 1);
  for (int k = n - 1; k >= 0; --k) suffix[static_cast<std::size_t>(k)] = suffix[static_cast<std::size_t>(k) + 1] * t.params.L[k];
  const auto digit_at = [&](std::int64_t node, int k) {  // k = 1..n
    const std::int64_t anc = node / suffix[static_cast<std::size_t>(k)];
    return t.digits[static_cast<std::size_t>(k) - 1][static_cast<std::size_t>(anc)];
  };
  const auto node_of = [&](std::int64_t label) {
    return static_cast<std::int64_t>(std::lower_bound(labels.begin(), labels.end(), label) - labels.begin());
  };
  const Equation& eq = t.params.eq;
  for_each_candidate_box(eq, labels, [&](std::int64_t lx1, std::int64_t lx2, std::int64_t ly1, std::int64_t ly2) {
    ++rep.candidate_boxes;
    if (lx1 == lx2 && lx1 == ly1 && lx1 == ly2) {
      ++rep.diagonal_boxes;
      return;
    }
    const std::int64_t nx1 = node_of(lx1), nx2 = node_of(lx2), ny1 = node_of(ly1), ny2 = node_of(ly2);
    bool resolved = false;
    for (int k = 1; k <= n && !resolved; ++k) {
      const std::int32_t d1 = digit_at(nx1, k), d2 = digit_at(nx2, k), d3 = digit_at(ny1, k), d4 = digit_at(ny2, k);
      if (d1 == d2 && d1 == d3 && d1 == d4) continue;
      resolved = true;
      if (trivial_index_pattern(eq, d1, d2, d3, d4)) {
        ++rep.trivial_pattern_boxes;
      } else {
        ++rep.violation_count;
        if (rep.violations.size() < cap) rep.violations.push_back({lx1, lx2, ly1, ly2});
      }
    }
  });
  return rep;
}

}  // namespace salem
