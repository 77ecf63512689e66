#pragma once

#include <cstdint>

namespace salem {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

// splitmix64 finalizer
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

struct SplitMix64 {
  std::uint64_t state = 0;
  explicit SplitMix64(std::uint64_t s) : state(s) {}
  std::uint64_t next() { return mix64(state += kGolden); }

  // uniform on [0, n) by rejection
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t skip = (0 - n) % n;  // 2^64 mod n
    std::uint64_t x = next();
    while (x < skip) x = next();
    return x % n;
  }
};

// Splittable per-node keys: child key depends only on (parent key, child digit),
// so sibling subtrees can be generated independently and in any order.
inline std::uint64_t derive_child_key(std::uint64_t key, std::uint64_t digit) {
  return mix64(key + kGolden * (digit + 1));
}

// decouples a node's draw stream from its child-key chain
inline std::uint64_t draw_seed(std::uint64_t key) {
  return mix64(key ^ 0xD1B54A32D192ED03ull);
}

}  // namespace salem
