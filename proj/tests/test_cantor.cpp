#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>

#include <json.hpp>

#include "salem/cantor.hpp"
#include "salem/cantor_io.hpp"

using namespace salem;

namespace {
const Equation kSidon = Equation::make(1, 1, 1, 1);
const Equation kGenusOne = Equation::make(2, 2, 3, 1);

std::string temp_path(const std::string& name) {
  return std::string("salem_test_") + name + ".json";
}
}  // namespace

TEST_CASE("derive_parameters: schedule for x1+x2=y1+y2, base 4") {
  auto p = derive_parameters(8, 4, kSidon, 7);
  REQUIRE(p.M == std::vector<std::int64_t>{5, 6, 7, 8, 9, 10, 11, 12});
  REQUIRE(p.M_reduced == std::vector<std::int64_t>{1, 2, 2, 2, 2, 2, 3, 3});
  REQUIRE(p.L == std::vector<std::int64_t>{1, 2, 2, 2, 2, 2, 2, 2});
  REQUIRE(p.U[0] == std::vector<std::int64_t>{3});
  REQUIRE(p.U[1] == std::vector<std::int64_t>{3, 6});
  for (std::size_t n = 0; n < p.U.size(); ++n) {
    REQUIRE(p.L[n] >= 1);
    REQUIRE(p.L[n] <= p.M[n]);
    REQUIRE(p.U[n].back() <= p.M[n]);
    for (std::int64_t u : p.U[n]) REQUIRE(u % (kSidon.S + 1) == 0);
  }
}

TEST_CASE("derive_parameters: base 10 digit sets grow at level 6") {
  auto p = derive_parameters(8, 10, kSidon, 0);
  REQUIRE(p.L == std::vector<std::int64_t>{2, 2, 2, 2, 2, 3, 3, 3});
  REQUIRE(p.U[5] == std::vector<std::int64_t>{3, 6, 12});
}

TEST_CASE("derive_parameters: rejects bad input") {
  REQUIRE_THROWS_AS(derive_parameters(0, 4, kSidon), std::invalid_argument);
  REQUIRE_THROWS_AS(derive_parameters(3, 3, kSidon), std::invalid_argument);
  // S = 6 forces the smallest scaled digit to 7 > M_1 = 5
  REQUIRE_THROWS_AS(derive_parameters(2, 4, Equation::make(3, 3, 3, 3)), std::domain_error);
}

TEST_CASE("build: counts, digit sets, and determinism") {
  auto p = derive_parameters(4, 4, kSidon, 42);
  auto t = build(p);
  REQUIRE(t.count == std::vector<std::int64_t>{1, 1, 2, 4, 8});
  for (int n = 0; n < p.depth; ++n) {
    REQUIRE(static_cast<std::int64_t>(t.shifts[n].size()) == t.count[n]);
    REQUIRE(static_cast<std::int64_t>(t.digits[n].size()) == t.count[n + 1]);
    // every node's children are exactly (U + l) mod M, sorted
    for (std::int64_t i = 0; i < t.count[n]; ++i) {
      const std::int64_t l = t.shifts[n][i];
      REQUIRE(l >= 0);
      REQUIRE(l < p.M[n]);
      std::vector<std::int32_t> want;
      for (std::int64_t u : p.U[n]) want.push_back(static_cast<std::int32_t>((u + l) % p.M[n]));
      std::sort(want.begin(), want.end());
      std::vector<std::int32_t> got(t.digits[n].begin() + i * p.L[n],
                                    t.digits[n].begin() + (i + 1) * p.L[n]);
      REQUIRE(got == want);
    }
  }
  REQUIRE(build(p) == t);
  auto p2 = p;
  p2.seed = 43;
  REQUIRE_FALSE(build(p2) == t);
}

TEST_CASE("intervals: exact endpoints and worked example") {
  auto p = derive_parameters(2, 4, kSidon, 0);
  auto t = build(p);
  // overwrite digits to pin the example: path (1, 2) over moduli (5, 6)
  t.digits[0] = {1};
  t.digits[1] = {2, 4};
  auto iv = intervals(t, 2);
  REQUIRE(iv.size() == 2);
  REQUIRE(iv[0] == RationalInterval{Rat(8, 30), Rat(9, 30)});
  REQUIRE(iv[1] == RationalInterval{Rat(10, 30), Rat(11, 30)});

  auto labels = level_labels(t, 2);
  REQUIRE(labels == std::vector<std::int64_t>{8, 10});
  REQUIRE(level_denominator(t.params, 2) == 30);
}

TEST_CASE("intervals: nesting, disjointness, total length") {
  auto p = derive_parameters(5, 4, kSidon, 2024);
  auto t = build(p);
  Rat total_len_prev = 1;
  for (int n = 1; n <= p.depth; ++n) {
    auto iv = intervals(t, n);
    auto parent = intervals(t, n - 1);
    REQUIRE(static_cast<std::int64_t>(iv.size()) == t.count[n]);
    Rat total = 0;
    for (std::size_t i = 0; i < iv.size(); ++i) {
      REQUIRE(iv[i].left < iv[i].right);
      if (i + 1 < iv.size()) REQUIRE(iv[i].right <= iv[i + 1].left);  // disjoint, ordered
      const auto& par = parent[i / static_cast<std::size_t>(p.L[n - 1])];
      REQUIRE(par.left <= iv[i].left);
      REQUIRE(iv[i].right <= par.right);
      total += iv[i].right - iv[i].left;
    }
    REQUIRE(total == Rat(t.count[n], level_denominator(p, n)));
    REQUIRE(total < total_len_prev);
    total_len_prev = total;
  }
}

TEST_CASE("build: shift marginals are uniform across seeds") {
  auto p = derive_parameters(2, 4, kSidon, 0);
  const int rounds = 2000;
  std::vector<int> root_digit_count(5, 0);
  std::vector<int> level2_present(6, 0);
  for (int s = 1; s <= rounds; ++s) {
    p.seed = static_cast<std::uint64_t>(s);
    auto t = build(p);
    root_digit_count[t.digits[0][0]] += 1;
    for (std::int32_t d : t.digits[1]) level2_present[d] += 1;
  }
  // root digit uniform on [0,5): mean 400, 3 sigma ~ 54
  for (int v = 0; v < 5; ++v) REQUIRE(std::abs(root_digit_count[v] - 400) <= 54);
  // level-2 digit set {(3+l)%6, l%6} hits each value with prob 1/3: 3 sigma ~ 64
  for (int v = 0; v < 6; ++v)
    REQUIRE(std::abs(level2_present[v] - rounds / 3) <= 64);
}

TEST_CASE("solution_scan: level 0 convention") {
  auto t = build(derive_parameters(3, 4, kSidon, 5));
  auto rep = solution_scan(t, 0);
  REQUIRE(rep.candidate_boxes == 1);
  REQUIRE(rep.diagonal_boxes == 1);
  REQUIRE(rep.violation_count == 0);
}

TEST_CASE("solution_scan: genus one trees carry no violations") {
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    auto t = build(derive_parameters(4, 40, kGenusOne, seed));
    REQUIRE(t.count[4] == 16);
    for (int n = 1; n <= 4; ++n) {
      auto rep = solution_scan(t, n);
      INFO("seed " << seed << " level " << n);
      REQUIRE(rep.violation_count == 0);
      REQUIRE(rep.violations.empty());
      REQUIRE(rep.diagonal_boxes == t.count[n]);
      REQUIRE(rep.candidate_boxes == rep.diagonal_boxes + rep.trivial_pattern_boxes);
    }
  }
}

TEST_CASE("solution_scan: genus two reports trivial-pattern boxes") {
  auto t = build(derive_parameters(3, 10, kSidon, 11));
  REQUIRE(t.count[3] == 8);
  auto rep = solution_scan(t, 3);
  REQUIRE(rep.diagonal_boxes == 8);
  // every (A,B,A,B) with A != B is a candidate with a permitted pairing
  REQUIRE(rep.trivial_pattern_boxes >= 2 * 8 * 7);
  REQUIRE(rep.candidate_boxes ==
          rep.diagonal_boxes + rep.trivial_pattern_boxes + rep.violation_count);
  REQUIRE(static_cast<std::int64_t>(rep.violations.size()) <=
          std::min<std::int64_t>(rep.violation_count, 64));
}

TEST_CASE("tree artifact: save/load round trip is exact") {
  auto t = build(derive_parameters(4, 4, kSidon, 90210));
  const auto file = temp_path("roundtrip");
  save_tree(t, file);
  auto back = load_tree(file);
  REQUIRE(back == t);

  // re-saving the loaded tree reproduces the bytes
  const auto file2 = temp_path("roundtrip2");
  save_tree(back, file2);
  std::ifstream a(file, std::ios::binary), b(file2, std::ios::binary);
  std::string sa((std::istreambuf_iterator<char>(a)), std::istreambuf_iterator<char>());
  std::string sb((std::istreambuf_iterator<char>(b)), std::istreambuf_iterator<char>());
  REQUIRE(sa == sb);
  REQUIRE(!sa.empty());
  std::remove(file.c_str());
  std::remove(file2.c_str());
}

TEST_CASE("tree artifact: tampering is detected") {
  auto t = build(derive_parameters(4, 4, kSidon, 7777));
  auto j = to_json(t);

  SECTION("edited deep shift fails the checksum") {
    for (auto& [key, value] : j["shifts"].items()) {
      if (std::count(key.begin(), key.end(), '.') == 2) {  // a level-3 node
        value = (value.get<std::int64_t>() + 1) % 8;
        break;
      }
    }
    REQUIRE_THROWS_WITH(from_json(j), Catch::Matchers::ContainsSubstring("checksum"));
  }
  SECTION("edited root shift breaks the shift table") {
    j["shifts"][""] = (j["shifts"][""].get<std::int64_t>() + 1) % 5;
    REQUIRE_THROWS_AS(from_json(j), std::runtime_error);
  }
  SECTION("unsupported version") {
    j["version"] = 2;
    REQUIRE_THROWS_WITH(from_json(j), Catch::Matchers::ContainsSubstring("version"));
  }
  SECTION("extra shift entry") {
    j["shifts"]["0.0.0.0.0"] = 1;
    REQUIRE_THROWS_AS(from_json(j), std::runtime_error);
  }
}

TEST_CASE("path keys: sibling subtrees are independent of enumeration") {
  // same node key must yield the same subtree regardless of sibling order;
  // derive_child_key depends only on (key, digit)
  const std::uint64_t k = 0xDEADBEEFCAFEull;
  REQUIRE(derive_child_key(k, 3) == derive_child_key(k, 3));
  REQUIRE(derive_child_key(k, 3) != derive_child_key(k, 4));
  std::set<std::uint64_t> keys;
  for (std::uint64_t d = 0; d < 64; ++d) keys.insert(derive_child_key(k, d));
  REQUIRE(keys.size() == 64);
}

TEST_CASE("rng: bounded draws are in range and roughly uniform") {
  SplitMix64 g(123);
  std::vector<int> hits(7, 0);
  for (int i = 0; i < 70000; ++i) hits[g.below(7)] += 1;
  for (int v = 0; v < 7; ++v) {
    REQUIRE(hits[v] > 9000);
    REQUIRE(hits[v] < 11000);
  }
}
