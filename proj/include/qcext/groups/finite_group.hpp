#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace qcext::groups {

struct FiniteElement {
  std::uint32_t index = 0;
  friend auto operator<=>(const FiniteElement&, const FiniteElement&) = default;
};

// A group given by its multiplication table; index 0 is the identity.
class FiniteGroup {
 public:
  FiniteGroup(std::vector<std::string> names, std::vector<std::vector<std::uint32_t>> table);

  // Z/n with elements named e, s, s2, ..., s{n-1} for a generator named s.
  static FiniteGroup cyclic(std::uint32_t n, const std::string& generator);

  std::uint32_t order() const { return static_cast<std::uint32_t>(names_.size()); }
  std::uint32_t multiply(std::uint32_t a, std::uint32_t b) const { return table_[a][b]; }
  std::uint32_t inverse(std::uint32_t a) const { return inverses_[a]; }
  const std::string& name(std::uint32_t a) const { return names_.at(a); }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<std::uint32_t> find(std::string_view name) const;
  const std::vector<std::vector<std::uint32_t>>& table() const { return table_; }

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<std::uint32_t>> table_;
  std::vector<std::uint32_t> inverses_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

}  // namespace qcext::groups
