#pragma once

#include <compare>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace qcext::groups {

// Generator i is encoded as +(i+1), its inverse as -(i+1).
using Letter = std::int32_t;

constexpr Letter make_letter(std::size_t generator, int sign) {
  Letter l = static_cast<Letter>(generator + 1);
  return sign < 0 ? -l : l;
}
constexpr std::size_t generator_of(Letter l) { return static_cast<std::size_t>(l < 0 ? -l : l) - 1; }
constexpr Letter invert(Letter l) { return -l; }

// Order used for "lexicographic" tie-breaks: x < x^-1 < y < y^-1 < ...
constexpr int letter_rank(Letter l) { return 2 * static_cast<int>(generator_of(l)) + (l < 0 ? 1 : 0); }

bool is_generator_name(std::string_view name);

class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> names);

  std::size_t size() const { return names_.size(); }
  const std::string& name(std::size_t i) const { return names_.at(i); }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<std::size_t> find(std::string_view name) const;

  friend bool operator==(const Alphabet& a, const Alphabet& b) { return a.names_ == b.names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::size_t> index_;
};

class FreeWord {
 public:
  FreeWord() = default;

  static FreeWord reduce(std::span<const Letter> raw);
  static FreeWord generator(std::size_t index, std::int64_t exponent = 1);

  std::span<const Letter> letters() const { return letters_; }
  std::size_t length() const { return letters_.size(); }
  bool is_identity() const { return letters_.empty(); }
  Letter operator[](std::size_t i) const { return letters_[i]; }
  Letter front() const { return letters_.front(); }
  Letter back() const { return letters_.back(); }

  FreeWord inverse() const;
  FreeWord pow(std::int64_t n) const;
  FreeWord operator*(const FreeWord& rhs) const;
  FreeWord& operator*=(const FreeWord& rhs);
  FreeWord prefix(std::size_t n) const;
  FreeWord suffix_from(std::size_t n) const;

  bool is_cyclically_reduced() const;
  // Largest generator index used plus one; 0 for the identity.
  std::size_t rank_used() const;
  std::size_t hash() const noexcept;

  friend auto operator<=>(const FreeWord&, const FreeWord&) = default;
  friend bool operator==(const FreeWord&, const FreeWord&) = default;

 private:
  explicit FreeWord(std::vector<Letter> reduced) : letters_(std::move(reduced)) {}
  std::vector<Letter> letters_;
};

// Shortlex order with letters ranked by letter_rank.
std::strong_ordering shortlex_compare(const FreeWord& a, const FreeWord& b);

// [u,v] = u^-1 v^-1 u v and u^v = v^-1 u v.
FreeWord commutator(const FreeWord& u, const FreeWord& v);
FreeWord conjugate(const FreeWord& u, const FreeWord& v);

// Signed letter counts per generator of the basis.
std::vector<std::int64_t> exponent_vector(const FreeWord& w, std::size_t basis_size);

// Parsing accepts whitespace-separated tokens gen, gen^k and 1, plus
// parentheses, (expr)^k, u^v conjugation and nested commutators [u,v].
FreeWord parse_word(const Alphabet& alphabet, std::string_view text);
std::string format_word(const Alphabet& alphabet, const FreeWord& w);

struct FreeWordHash {
  std::size_t operator()(const FreeWord& w) const noexcept { return w.hash(); }
};

}  // namespace qcext::groups
