#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qcext/groups/finite_group.hpp"
#include "qcext/groups/free_word.hpp"

namespace qcext::groups {

enum class FactorId : std::uint8_t { A = 0, B = 1 };

inline FactorId other(FactorId f) { return f == FactorId::A ? FactorId::B : FactorId::A; }
inline const char* factor_name(FactorId f) { return f == FactorId::A ? "A" : "B"; }

using FactorElement = std::variant<FreeWord, FiniteElement>;

struct Syllable {
  FactorId factor;
  FactorElement element;
  friend auto operator<=>(const Syllable&, const Syllable&) = default;
  friend bool operator==(const Syllable&, const Syllable&) = default;
};

class FreeProductElement {
 public:
  FreeProductElement() = default;

  std::span<const Syllable> syllables() const { return syllables_; }
  std::size_t syllable_count() const { return syllables_.size(); }
  bool is_identity() const { return syllables_.empty(); }

  friend auto operator<=>(const FreeProductElement&, const FreeProductElement&) = default;
  friend bool operator==(const FreeProductElement&, const FreeProductElement&) = default;

 private:
  friend class GroupContext;
  explicit FreeProductElement(std::vector<Syllable> s) : syllables_(std::move(s)) {}
  std::vector<Syllable> syllables_;
};

using Element = std::variant<FreeWord, FiniteElement, FreeProductElement>;

std::size_t hash_value(const Element& g) noexcept;

struct ElementHash {
  std::size_t operator()(const Element& g) const noexcept { return hash_value(g); }
};

// A decidable group with canonical forms: a free group, a finite table group,
// or a free product of two such groups.
class GroupContext {
 public:
  enum class Kind { FreeGroup, FiniteTable, FreeProduct };
  using Ptr = std::shared_ptr<const GroupContext>;

  static Ptr free_group(Alphabet alphabet);
  static Ptr free_group(std::vector<std::string> names);
  static Ptr finite(FiniteGroup table);
  static Ptr free_product(Ptr a, Ptr b);

  Kind kind() const { return kind_; }
  const Alphabet& alphabet() const;
  const FiniteGroup& table() const;
  const GroupContext& factor(FactorId f) const;
  const Ptr& factor_ptr(FactorId f) const;

  Element identity() const;
  bool is_identity(const Element& g) const;
  bool contains(const Element& g) const;

  Element product(const Element& g, const Element& h) const;
  Element inverse(const Element& g) const;
  Element power(const Element& g, std::int64_t n) const;

  // Generators of the group; for a free product, the factor generators in order A then B.
  std::vector<Element> generators() const;

  // Free products only.
  Element embed(FactorId f, const Element& factor_element) const;
  Element from_syllables(std::vector<Syllable> syllables) const;

  Element parse(std::string_view text) const;
  std::string format(const Element& g) const;

 private:
  GroupContext() = default;
  void require(const Element& g) const;
  std::vector<Syllable> multiply_syllables(std::span<const Syllable> g, std::span<const Syllable> h) const;

  Kind kind_ = Kind::FreeGroup;
  Alphabet alphabet_;
  std::shared_ptr<FiniteGroup> table_;
  Ptr factors_[2];
};

// All products of at most radius factors from gens and their inverses, in
// breadth-first order, deduplicated by canonical form.
std::vector<Element> enumerate_ball(const GroupContext& ctx, std::span<const Element> gens, std::size_t radius,
                                    std::size_t radius_cap = 12, std::size_t max_elements = 5'000'000);

}  // namespace qcext::groups
