#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "salem/equations.hpp"

namespace salem {

enum class BuildMethod { SidonErdosTuran, BehrendDigit, Greedy, Auto };

inline const char* method_name(BuildMethod m) {
  switch (m) {
    case BuildMethod::SidonErdosTuran: return "sidon";
    case BuildMethod::BehrendDigit: return "behrend";
    case BuildMethod::Greedy: return "greedy";
    default: return "auto";
  }
}

struct AvoidingSet {
  std::int64_t M = 1;
  std::vector<std::int64_t> V;  // sorted, subset of [1, M]
  Equation eq;
  BuildMethod method = BuildMethod::Greedy;  // constructor that actually produced V
};

struct VerifyResult {
  bool pass = true;
  std::optional<QuadI> witness;
};

inline VerifyResult verify(const Equation& eq, const std::vector<std::int64_t>& V) {
  auto bad = scan_set(eq, V, std::max<std::size_t>(kScanCapDefault, V.size()));
  if (bad.empty()) return {};
  return {false, bad.front()};
}

namespace detail {

inline bool is_prime(std::int64_t p) {
  if (p < 2) return false;
  for (std::int64_t q = 2; q * q <= p; ++q)
    if (p % q == 0) return false;
  return true;
}

// Would inserting m into sorted V create a nontrivial solution? Checks every
// slot m can occupy, enumerating two free coordinates and solving for the
// fourth, so one insertion probe is O(|V|^2 log |V|).
inline bool insertion_creates_solution(const Equation& eq, const std::vector<std::int64_t>& V,
                                       std::int64_t m) {
  std::vector<std::int64_t> W(V);
  W.insert(std::lower_bound(W.begin(), W.end(), m), m);
  auto in_W = [&](std::int64_t v) { return std::binary_search(W.begin(), W.end(), v); };
  auto nontrivial = [&](std::int64_t x1, std::int64_t x2, std::int64_t y1, std::int64_t y2) {
    return !is_trivial_values(eq, x1, x2, y1, y2);
  };
  for (std::int64_t u : W)
    for (std::int64_t v : W) {
      // x1 = m: solve a m + b u = c v + d y2
      std::int64_t num = eq.a * m + eq.b * u - eq.c * v;
      if (num % eq.d == 0 && in_W(num / eq.d) && nontrivial(m, u, v, num / eq.d)) return true;
      // x2 = m
      num = eq.a * u + eq.b * m - eq.c * v;
      if (num % eq.d == 0 && in_W(num / eq.d) && nontrivial(u, m, v, num / eq.d)) return true;
      // y1 = m
      num = eq.a * u + eq.b * v - eq.c * m;
      if (num % eq.d == 0 && in_W(num / eq.d) && nontrivial(u, v, m, num / eq.d)) return true;
      // y2 = m
      num = eq.a * u + eq.b * v - eq.d * m;
      if (num % eq.c == 0 && in_W(num / eq.c) && nontrivial(u, v, num / eq.c, m)) return true;
    }
  return false;
}

}  // namespace detail

// Erdos-Turan Sidon set {2pk + (k^2 mod p) + 1 : k = 0..p-1} for the largest
// prime p keeping max element 2p^2-2p+2 within M. Empty when no prime fits.
inline std::vector<std::int64_t> et_sidon(std::int64_t M) {
  std::int64_t p = 0;
  for (std::int64_t q = 2; 2 * q * q - 2 * q + 2 <= M; ++q)
    if (detail::is_prime(q)) p = q;
  std::vector<std::int64_t> V;
  for (std::int64_t k = 0; k < p; ++k) V.push_back(2 * p * k + (k * k) % p + 1);
  std::sort(V.begin(), V.end());
  return V;
}

// Behrend-style digit set: base 2S, digits < S, restricted to the l2 sphere
// sum(d_i^2) = rho holding the most elements of [0, M-1]; shifted by +1.
inline std::vector<std::int64_t> behrend_digit(const Equation& eq, std::int64_t M) {
  const std::int64_t base = 2 * eq.S;
  std::map<std::int64_t, std::vector<std::int64_t>> spheres;
  for (std::int64_t x = 0; x < M; ++x) {
    std::int64_t norm = 0, rest = x;
    bool small_digits = true;
    while (rest > 0) {
      const std::int64_t digit = rest % base;
      if (digit >= eq.S) { small_digits = false; break; }
      norm += digit * digit;
      rest /= base;
    }
    if (small_digits) spheres[norm].push_back(x);
  }
  std::vector<std::int64_t> best;
  for (auto& [rho, elems] : spheres)
    if (elems.size() > best.size()) best = elems;
  for (auto& v : best) ++v;
  std::sort(best.begin(), best.end());
  return best;
}

// Ascending greedy insertion: take m iff it creates no nontrivial solution.
inline std::vector<std::int64_t> greedy_avoiding(const Equation& eq, std::int64_t M) {
  std::vector<std::int64_t> V;
  for (std::int64_t m = 1; m <= M; ++m)
    if (!detail::insertion_creates_solution(eq, V, m))
      V.insert(std::upper_bound(V.begin(), V.end(), m), m);
  return V;
}

inline AvoidingSet construct(std::int64_t M, const Equation& eq,
                             BuildMethod method = BuildMethod::Auto) {
  if (M < 1) throw std::invalid_argument("construct: M must be positive");
  AvoidingSet out;
  out.M = M;
  out.eq = eq;

  std::vector<std::int64_t> heuristic;
  BuildMethod tag = BuildMethod::Greedy;
  if (method == BuildMethod::SidonErdosTuran ||
      (method == BuildMethod::Auto && eq.genus == Genus::Two)) {
    heuristic = et_sidon(M);
    tag = BuildMethod::SidonErdosTuran;
  } else if (method == BuildMethod::BehrendDigit ||
             (method == BuildMethod::Auto && eq.genus == Genus::One)) {
    heuristic = behrend_digit(eq, M);
    tag = BuildMethod::BehrendDigit;
  }

  auto greedy = greedy_avoiding(eq, M);  // always valid, never empty for M >= 1
  if (!heuristic.empty() && heuristic.size() > greedy.size() && verify(eq, heuristic).pass) {
    out.V = heuristic;
    out.method = tag;
  } else {
    out.V = greedy;
    out.method = BuildMethod::Greedy;
  }
  if (!verify(eq, out.V).pass) throw std::logic_error("construct produced an invalid set");
  return out;
}

struct AdmissibilityError : std::runtime_error {
  std::int64_t min_N;
  AdmissibilityError(const std::string& what, std::int64_t n)
      : std::runtime_error(what), min_N(n) {}
};

struct ScaledSet {
  std::int64_t N = 0, K = 0, M = 0;
  Equation eq;
  AvoidingSet base;               // V at the reduced modulus M
  std::vector<std::int64_t> U;    // (S+1) * V
};

inline std::int64_t scale_modulus(const Equation& eq) {
  return eq.S * eq.S + eq.a * eq.b * eq.c * eq.d;
}

inline std::int64_t min_admissible_N(const Equation& eq) {
  const std::int64_t K = scale_modulus(eq);
  for (std::int64_t N = 4 * K + 1;; ++N) {
    const std::int64_t M = (N + K - 1) / K;
    if (M > 4 && (eq.S + 1) * M <= N) return N;
  }
}

inline ScaledSet scale(std::int64_t N, const Equation& eq,
                       BuildMethod method = BuildMethod::Auto) {
  const std::int64_t K = scale_modulus(eq);
  const std::int64_t M = (N + K - 1) / K;
  if (M <= 4 || (eq.S + 1) * M > N)
    throw AdmissibilityError("scale: N=" + std::to_string(N) +
                                 " inadmissible (need reduced modulus > 4); minimal admissible N is " +
                                 std::to_string(min_admissible_N(eq)),
                             min_admissible_N(eq));
  ScaledSet out;
  out.N = N;
  out.K = K;
  out.M = M;
  out.eq = eq;
  out.base = construct(M, eq, method);
  for (auto v : out.base.V) out.U.push_back((eq.S + 1) * v);
  return out;
}

struct IntervalSystem {
  std::int64_t N = 1;
  std::int64_t shift = 0;
  std::vector<std::int64_t> indices;  // sorted residues (u + shift) mod N
};

inline IntervalSystem interval_system(const ScaledSet& s, std::int64_t l) {
  IntervalSystem sys;
  sys.N = s.N;
  sys.shift = ((l % s.N) + s.N) % s.N;
  for (auto u : s.U) sys.indices.push_back((u + sys.shift) % s.N);
  std::sort(sys.indices.begin(), sys.indices.end());
  sys.indices.erase(std::unique(sys.indices.begin(), sys.indices.end()), sys.indices.end());
  return sys;
}

struct BoxReport {
  std::int64_t candidate_boxes = 0;
  std::int64_t trivial_pattern_boxes = 0;
  std::int64_t violation_count = 0;
  std::vector<std::array<std::int64_t, 4>> violations;  // capped sample
};

inline constexpr std::size_t kPairTableCap = std::size_t(1) << 26;

// Exact box solvability over closed intervals [j/N, (j+1)/N]: the box indexed
// (jx, jy, ju, jv) can host a solution iff |a jx + b jy - c ju - d jv| <= S.
// Meet-in-the-middle over sorted pair-sum tables instead of the quartic scan.
template <class OnCandidate>
void for_each_candidate_box(const Equation& eq, const std::vector<std::int64_t>& idx,
                            OnCandidate&& on_candidate) {
  const std::size_t n = idx.size();
  if (n * n > kPairTableCap)
    throw std::length_error("candidate box scan: pair table exceeds memory cap, lower the level");
  struct Pair { std::int64_t value; std::int64_t i, j; };
  std::vector<Pair> lhs, rhs;
  lhs.reserve(n * n);
  rhs.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      lhs.push_back({eq.a * idx[i] + eq.b * idx[j], idx[i], idx[j]});
      rhs.push_back({eq.c * idx[i] + eq.d * idx[j], idx[i], idx[j]});
    }
  auto by_value = [](const Pair& p, const Pair& q) { return p.value < q.value; };
  std::sort(lhs.begin(), lhs.end(), by_value);
  std::sort(rhs.begin(), rhs.end(), by_value);
  std::size_t lo = 0, hi = 0;
  for (const Pair& L : lhs) {
    while (lo < rhs.size() && rhs[lo].value < L.value - eq.S) ++lo;
    if (hi < lo) hi = lo;
    while (hi < rhs.size() && rhs[hi].value <= L.value + eq.S) ++hi;
    for (std::size_t r = lo; r < hi; ++r)
      on_candidate(L.i, L.j, rhs[r].i, rhs[r].j);
  }
}

inline bool trivial_index_pattern(const Equation& eq, std::int64_t jx, std::int64_t jy,
                                  std::int64_t ju, std::int64_t jv) {
  if (eq.genus == Genus::One) return jx == jy && jy == ju && ju == jv;
  if (eq.pair_direct && jx == ju && jy == jv) return true;
  if (eq.pair_swapped && jx == jv && jy == ju) return true;
  return false;
}

inline BoxReport transference_check(const ScaledSet& s, std::int64_t l, std::size_t cap = 64) {
  auto sys = interval_system(s, l);
  BoxReport rep;
  for_each_candidate_box(s.eq, sys.indices,
                         [&](std::int64_t jx, std::int64_t jy, std::int64_t ju, std::int64_t jv) {
                           ++rep.candidate_boxes;
                           if (trivial_index_pattern(s.eq, jx, jy, ju, jv)) {
                             ++rep.trivial_pattern_boxes;
                           } else {
                             ++rep.violation_count;
                             if (rep.violations.size() < cap)
                               rep.violations.push_back({jx, jy, ju, jv});
                           }
                         });
  return rep;
}

struct SurveyRow {
  std::int64_t N = 0, M = 0;
  std::int64_t size_U = 0;
};

struct SizeFit {
  bool defined = false;
  double kappa = 0, alpha = 0;
  double max_rel_residual = 0;
};

struct Survey {
  std::vector<SurveyRow> rows;
  SizeFit fit;
};

// Least squares for #U = kappa sqrt(N) exp(-alpha sqrt(log N)):
// log #U - log(N)/2 = log kappa - alpha sqrt(log N), linear in (log kappa, alpha).
inline SizeFit fit_size_law(const std::vector<SurveyRow>& rows) {
  SizeFit fit;
  if (rows.size() < 2) return fit;
  double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto& r : rows) {
    const double x = std::sqrt(std::log(double(r.N)));
    const double y = std::log(double(r.size_U)) - 0.5 * std::log(double(r.N));
    sw += 1; sx += x; sy += y; sxx += x * x; sxy += x * y;
  }
  const double det = sw * sxx - sx * sx;
  if (std::abs(det) < 1e-12) return fit;
  const double intercept = (sxx * sy - sx * sxy) / det;
  const double slope = (sw * sxy - sx * sy) / det;
  fit.defined = true;
  fit.kappa = std::exp(intercept);
  fit.alpha = -slope;
  for (auto& r : rows) {
    const double pred =
        fit.kappa * std::sqrt(double(r.N)) * std::exp(-fit.alpha * std::sqrt(std::log(double(r.N))));
    fit.max_rel_residual =
        std::max(fit.max_rel_residual, std::abs(pred - double(r.size_U)) / double(r.size_U));
  }
  return fit;
}

inline Survey size_survey(const Equation& eq, std::vector<std::int64_t> Ns,
                          BuildMethod method = BuildMethod::Auto) {
  std::sort(Ns.begin(), Ns.end());
  Survey survey;
  std::vector<std::int64_t> carried;  // best V so far; stays valid at larger M
  for (auto N : Ns) {
    ScaledSet s = scale(N, eq, method);
    if (s.base.V.size() < carried.size()) {
      s.base.V = carried;
      s.U.clear();
      for (auto v : carried) s.U.push_back((eq.S + 1) * v);
    } else {
      carried = s.base.V;
    }
    survey.rows.push_back({N, s.M, std::int64_t(s.U.size())});
  }
  survey.fit = fit_size_law(survey.rows);
  return survey;
}

}  // namespace salem
