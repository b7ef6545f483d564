#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "qcext/groups/group_context.hpp"

namespace qcext {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

// A labelled substream of the experiment seed. Streams with different labels
// are independent of each other and of the order in which they are created.
class Rng {
 public:
  Rng(std::uint64_t seed, std::string_view label) : engine_(splitmix64(seed ^ splitmix64(fnv1a(label)))) {}

  std::uint64_t next() { return engine_(); }
  // Uniform in [0, n).
  std::size_t below(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_); }
  std::int64_t between(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(engine_);
  }

  // Product of `length` random generators or inverses (not necessarily reduced).
  groups::Element random_word(const groups::GroupContext& G, std::span<const groups::Element> gens, std::size_t length) {
    groups::Element g = G.identity();
    for (std::size_t i = 0; i < length; ++i) {
      const groups::Element& s = gens[below(gens.size())];
      g = G.product(g, below(2) ? s : G.inverse(s));
    }
    return g;
  }

 private:
  std::mt19937_64 engine_;
};

// Worker count from QCEXT_THREADS, defaulting to the hardware concurrency.
std::size_t thread_count();

}  // namespace qcext
