#pragma once

// Shared fixtures, hand-rolled generators and independent oracles for the test suites.

#include <gtest/gtest.h>

#include <set>
#include <string>
#include <vector>

#include "qcext/embedding.hpp"
#include "qcext/groups/group_context.hpp"
#include "qcext/random.hpp"

namespace qcext::testing {

using embedding::Budget;
using embedding::EmbeddingSpec;
using groups::Element;
using groups::FreeWord;
using groups::GroupContext;

inline GroupContext::Ptr free_xy() { return GroupContext::free_group(std::vector<std::string>{"x", "y"}); }

// Z * Z with generators a, b.
inline EmbeddingSpec z_star_z(Rational C = 1) {
  auto a = GroupContext::free_group(std::vector<std::string>{"a"});
  auto b = GroupContext::free_group(std::vector<std::string>{"b"});
  return EmbeddingSpec::free_product(GroupContext::free_product(a, b), C);
}

// F(x,y) * <t>.
inline EmbeddingSpec fxy_star_t(Rational C = 1) {
  auto t = GroupContext::free_group(std::vector<std::string>{"t"});
  return EmbeddingSpec::free_product(GroupContext::free_product(free_xy(), t), C);
}

// F(x,y) rel <w>; the oracle cap lets short geodesic sets certify as exhaustive.
inline EmbeddingSpec rel_cyclic(const std::string& w, Rational C, std::size_t oracle_cap = 8) {
  auto F = free_xy();
  Budget b;
  b.oracle_length_cap = oracle_cap;
  return EmbeddingSpec::free_rel_cyclic(F, std::get<FreeWord>(F->parse(w)), C, b);
}

inline Element el(const EmbeddingSpec& spec, const std::string& text) { return spec.parse(text); }

// Random element given by a word of length at most max_len in the group generators.
inline Element random_element(const GroupContext& G, Rng& rng, std::size_t max_len) {
  return rng.random_word(G, G.generators(), rng.below(max_len + 1));
}

// Oracle: all reduced words of length <= r in a free group of the given rank,
// enumerated by brute force over every unreduced letter string.
inline std::size_t brute_ball_size(std::size_t rank, std::size_t r) {
  std::set<FreeWord> seen;
  std::vector<std::vector<groups::Letter>> layer{{}};
  for (std::size_t len = 0; len <= r; ++len) {
    std::vector<std::vector<groups::Letter>> next;
    for (const auto& s : layer) {
      seen.insert(FreeWord::reduce(s));
      if (len == r) continue;
      for (std::size_t g = 0; g < rank; ++g)
        for (int sign : {1, -1}) {
          auto t = s;
          t.push_back(groups::make_letter(g, sign));
          next.push_back(std::move(t));
        }
    }
    layer = std::move(next);
  }
  return seen.size();
}

// Oracle: occurrences of w as a contiguous subword of u (no overlap check; fine for
// words such as x y that cannot overlap themselves).
inline std::int64_t subword_count(const FreeWord& u, const FreeWord& w) {
  std::int64_t c = 0;
  if (w.length() == 0 || u.length() < w.length()) return 0;
  for (std::size_t i = 0; i + w.length() <= u.length(); ++i) {
    bool match = true;
    for (std::size_t j = 0; j < w.length() && match; ++j) match = u[i + j] == w[j];
    c += match;
  }
  return c;
}

// Oracle: exponent sums of a free-product element over the factor letters.
inline std::int64_t total_exponent(const GroupContext& G, const Element& g) {
  std::int64_t total = 0;
  for (const auto& s : std::get<groups::FreeProductElement>(g).syllables())
    for (groups::Letter l : std::get<FreeWord>(s.element).letters()) total += l > 0 ? 1 : -1;
  (void)G;
  return total;
}

}  // namespace qcext::testing
