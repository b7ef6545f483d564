#include "qcext/groups/finite_group.hpp"

#include "qcext/errors.hpp"
#include "qcext/groups/free_word.hpp"

namespace qcext::groups {

FiniteGroup::FiniteGroup(std::vector<std::string> names, std::vector<std::vector<std::uint32_t>> table)
    : names_(std::move(names)), table_(std::move(table)) {
  const std::size_t n = names_.size();
  if (n == 0) throw SchemaError("finite group table is empty");
  if (table_.size() != n) throw SchemaError("finite group table has wrong number of rows");
  for (const auto& row : table_) {
    if (row.size() != n) throw SchemaError("finite group table row has wrong length");
    for (auto v : row)
      if (v >= n) throw SchemaError("finite group table entry out of range");
  }
  for (std::uint32_t a = 0; a < n; ++a)
    if (table_[0][a] != a || table_[a][0] != a) throw SchemaError("index 0 is not the identity");
  inverses_.assign(n, n);
  for (std::uint32_t a = 0; a < n; ++a)
    for (std::uint32_t b = 0; b < n; ++b)
      if (table_[a][b] == 0 && table_[b][a] == 0) inverses_[a] = b;
  for (std::uint32_t a = 0; a < n; ++a)
    if (inverses_[a] == n) throw SchemaError("element '" + names_[a] + "' has no inverse");
  for (std::uint32_t a = 0; a < n; ++a)
    for (std::uint32_t b = 0; b < n; ++b)
      for (std::uint32_t c = 0; c < n; ++c)
        if (table_[table_[a][b]][c] != table_[a][table_[b][c]]) throw SchemaError("finite group table is not associative");
  for (std::uint32_t a = 0; a < n; ++a) {
    if (!is_generator_name(names_[a])) throw SchemaError("invalid element name '" + names_[a] + "'");
    if (!index_.emplace(names_[a], a).second) throw SchemaError("duplicate element name '" + names_[a] + "'");
  }
}

FiniteGroup FiniteGroup::cyclic(std::uint32_t n, const std::string& generator) {
  std::vector<std::string> names(n);
  std::vector<std::vector<std::uint32_t>> table(n, std::vector<std::uint32_t>(n));
  for (std::uint32_t i = 0; i < n; ++i) {
    names[i] = i == 0 ? "e" : i == 1 ? generator : generator + std::to_string(i);
    for (std::uint32_t j = 0; j < n; ++j) table[i][j] = (i + j) % n;
  }
  return FiniteGroup(std::move(names), std::move(table));
}

std::optional<std::uint32_t> FiniteGroup::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

}  // namespace qcext::groups
