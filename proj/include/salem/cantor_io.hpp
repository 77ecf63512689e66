#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "salem/cantor.hpp"

namespace salem {

inline constexpr int kTreeFormatVersion = 1;

inline std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

namespace detail {

// dotted digit paths for the shift-carrying levels 0..depth-1, root is ""
inline std::vector<std::vector<std::string>> shift_paths(const CantorTree& t) {
  std::vector<std::vector<std::string>> paths(static_cast<std::size_t>(t.params.depth));
  paths[0] = {""};
  for (int n = 1; n < t.params.depth; ++n) {
    const auto& parent = paths[static_cast<std::size_t>(n) - 1];
    auto& cur = paths[static_cast<std::size_t>(n)];
    cur.reserve(static_cast<std::size_t>(t.count[static_cast<std::size_t>(n)]));
    const std::int64_t Ln = t.params.L[static_cast<std::size_t>(n) - 1];
    for (std::int64_t i = 0; i < t.count[static_cast<std::size_t>(n)]; ++i) {
      const std::string& pp = parent[static_cast<std::size_t>(i / Ln)];
      const std::int32_t d = t.digits[static_cast<std::size_t>(n) - 1][static_cast<std::size_t>(i)];
      cur.push_back(pp.empty() ? std::to_string(d) : pp + "." + std::to_string(d));
    }
  }
  return paths;
}

inline std::string canonical_string(const CantorTree& t,
                                    const std::vector<std::vector<std::string>>& paths) {
  std::ostringstream os;
  os << "salem-tree-v" << kTreeFormatVersion << "|" << t.params.eq.a << "," << t.params.eq.b << ","
     << t.params.eq.c << "," << t.params.eq.d << "|" << t.params.depth << "|" << t.params.base
     << "|" << t.params.seed << "|";
  for (int n = 0; n < t.params.depth; ++n)
    for (std::int64_t i = 0; i < t.count[static_cast<std::size_t>(n)]; ++i)
      os << paths[static_cast<std::size_t>(n)][static_cast<std::size_t>(i)] << "="
         << t.shifts[static_cast<std::size_t>(n)][static_cast<std::size_t>(i)] << ";";
  return os.str();
}

inline std::string hex16(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[static_cast<std::size_t>(i)] = digits[v & 0xF];
    v >>= 4;
  }
  return s;
}

}  // namespace detail

inline nlohmann::json to_json(const CantorTree& t) {
  const auto paths = detail::shift_paths(t);
  nlohmann::json j;
  j["version"] = kTreeFormatVersion;
  j["params"] = {{"equation", {t.params.eq.a, t.params.eq.b, t.params.eq.c, t.params.eq.d}},
                 {"depth", t.params.depth},
                 {"base", t.params.base},
                 {"seed", t.params.seed}};
  nlohmann::json shifts = nlohmann::json::object();
  for (int n = 0; n < t.params.depth; ++n)
    for (std::int64_t i = 0; i < t.count[static_cast<std::size_t>(n)]; ++i)
      shifts[paths[static_cast<std::size_t>(n)][static_cast<std::size_t>(i)]] =
          t.shifts[static_cast<std::size_t>(n)][static_cast<std::size_t>(i)];
  j["shifts"] = std::move(shifts);
  j["checksum"] = "fnv1a64:" + detail::hex16(fnv1a64(detail::canonical_string(t, paths)));
  return j;
}

inline void save_tree(const CantorTree& t, const std::string& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("save_tree: cannot open " + file);
  out << to_json(t).dump(2) << "\n";
}

// Rebuilds the tree from the recorded shifts (the digit sets are re-derived
// from the parameters), then verifies the checksum and that the shift table is
// exactly the set of reachable nodes.
inline CantorTree from_json(const nlohmann::json& j) {
  if (!j.contains("version") || !j["version"].is_number_integer() ||
      j["version"].get<int>() != kTreeFormatVersion)
    throw std::runtime_error("tree artifact: unsupported version");
  if (!j.contains("params") || !j.contains("shifts") || !j.contains("checksum"))
    throw std::runtime_error("tree artifact: missing fields");
  const auto& pj = j["params"];
  const auto eqv = pj.at("equation").get<std::vector<std::int64_t>>();
  if (eqv.size() != 4) throw std::runtime_error("tree artifact: equation needs 4 coefficients");
  const Equation eq = Equation::make(eqv[0], eqv[1], eqv[2], eqv[3]);
  const int depth = pj.at("depth").get<int>();
  const std::int64_t base = pj.at("base").get<std::int64_t>();
  const std::uint64_t seed = pj.at("seed").get<std::uint64_t>();
  const CantorParameters params = derive_parameters(depth, base, eq, seed);

  const auto& sj = j["shifts"];
  if (!sj.is_object()) throw std::runtime_error("tree artifact: shifts must be an object");

  CantorTree t;
  t.params = params;
  t.count.assign(static_cast<std::size_t>(depth) + 1, 0);
  t.count[0] = 1;
  std::vector<std::string> paths{""};
  std::size_t consumed = 0;
  for (int n = 0; n < depth; ++n) {
    const std::int64_t Mn = params.M[static_cast<std::size_t>(n)];
    const auto& Un = params.U[static_cast<std::size_t>(n)];
    auto& sh = t.shifts.emplace_back();
    auto& dg = t.digits.emplace_back();
    std::vector<std::string> child_paths;
    for (const std::string& p : paths) {
      auto it = sj.find(p);
      if (it == sj.end())
        throw std::runtime_error("tree artifact: missing shift for node '" + p + "'");
      const std::int64_t l = it->get<std::int64_t>();
      if (l < 0 || l >= Mn)
        throw std::runtime_error("tree artifact: shift out of range at node '" + p + "'");
      ++consumed;
      sh.push_back(l);
      std::vector<std::int32_t> kids;
      kids.reserve(Un.size());
      for (std::int64_t u : Un) kids.push_back(static_cast<std::int32_t>((u + l) % Mn));
      std::sort(kids.begin(), kids.end());
      for (std::int32_t d : kids) {
        dg.push_back(d);
        child_paths.push_back(p.empty() ? std::to_string(d) : p + "." + std::to_string(d));
      }
    }
    paths = std::move(child_paths);
    t.count[static_cast<std::size_t>(n) + 1] = static_cast<std::int64_t>(dg.size());
  }
  if (consumed != sj.size())
    throw std::runtime_error("tree artifact: shift table has entries for unreachable nodes");

  const std::string want =
      "fnv1a64:" + detail::hex16(fnv1a64(detail::canonical_string(t, detail::shift_paths(t))));
  if (j["checksum"].get<std::string>() != want)
    throw std::runtime_error("tree artifact: checksum mismatch");
  return t;
}

inline CantorTree load_tree(const std::string& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw std::runtime_error("load_tree: cannot open " + file);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("load_tree: invalid JSON: ") + e.what());
  }
  return from_json(j);
}

}  // namespace salem
