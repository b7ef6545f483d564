#include "qcext/groups/free_word.hpp"

#include <algorithm>
#include <cctype>

#include "expression_parser.hpp"
#include "qcext/errors.hpp"

namespace qcext::groups {

bool is_generator_name(std::string_view name) {
  if (name.empty() || !std::islower(static_cast<unsigned char>(name[0]))) return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    return std::islower(static_cast<unsigned char>(c)) || std::isdigit(static_cast<unsigned char>(c)) || c == '_';
  });
}

Alphabet::Alphabet(std::vector<std::string> names) : names_(std::move(names)) {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (!is_generator_name(names_[i])) throw ParseError("invalid generator name '" + names_[i] + "'");
    if (!index_.emplace(names_[i], i).second) throw ParseError("duplicate generator name '" + names_[i] + "'");
  }
}

std::optional<std::size_t> Alphabet::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

FreeWord FreeWord::reduce(std::span<const Letter> raw) {
  std::vector<Letter> out;
  out.reserve(raw.size());
  for (Letter l : raw) {
    if (l == 0) throw ParseError("letter 0 is not a generator");
    if (!out.empty() && out.back() == -l)
      out.pop_back();
    else
      out.push_back(l);
  }
  return FreeWord(std::move(out));
}

FreeWord FreeWord::generator(std::size_t index, std::int64_t exponent) {
  Letter l = make_letter(index, exponent < 0 ? -1 : 1);
  std::vector<Letter> out(static_cast<std::size_t>(exponent < 0 ? -exponent : exponent), l);
  return FreeWord(std::move(out));
}

FreeWord FreeWord::inverse() const {
  std::vector<Letter> out(letters_.rbegin(), letters_.rend());
  for (Letter& l : out) l = -l;
  return FreeWord(std::move(out));
}

FreeWord FreeWord::pow(std::int64_t n) const {
  if (n == 0 || is_identity()) return {};
  FreeWord base = n < 0 ? inverse() : *this;
  std::uint64_t m = static_cast<std::uint64_t>(n < 0 ? -n : n);
  // w = c u c^-1 with u cyclically reduced, so w^m = c u^m c^-1 without cancellation.
  std::size_t k = 0;
  const auto& b = base.letters_;
  while (2 * k + 1 < b.size() && b[k] == -b[b.size() - 1 - k]) ++k;
  std::vector<Letter> out;
  out.reserve(2 * k + (b.size() - 2 * k) * m);
  out.insert(out.end(), b.begin(), b.begin() + static_cast<std::ptrdiff_t>(k));
  for (std::uint64_t i = 0; i < m; ++i)
    out.insert(out.end(), b.begin() + static_cast<std::ptrdiff_t>(k), b.end() - static_cast<std::ptrdiff_t>(k));
  out.insert(out.end(), b.end() - static_cast<std::ptrdiff_t>(k), b.end());
  return FreeWord(std::move(out));
}

FreeWord FreeWord::operator*(const FreeWord& rhs) const {
  std::size_t cancel = 0;
  std::size_t n = letters_.size(), m = rhs.letters_.size();
  while (cancel < n && cancel < m && letters_[n - 1 - cancel] == -rhs.letters_[cancel]) ++cancel;
  std::vector<Letter> out;
  out.reserve(n + m - 2 * cancel);
  out.insert(out.end(), letters_.begin(), letters_.end() - static_cast<std::ptrdiff_t>(cancel));
  out.insert(out.end(), rhs.letters_.begin() + static_cast<std::ptrdiff_t>(cancel), rhs.letters_.end());
  return FreeWord(std::move(out));
}

FreeWord& FreeWord::operator*=(const FreeWord& rhs) {
  for (Letter l : rhs.letters_) {
    if (!letters_.empty() && letters_.back() == -l)
      letters_.pop_back();
    else
      letters_.push_back(l);
  }
  return *this;
}

FreeWord FreeWord::prefix(std::size_t n) const {
  n = std::min(n, letters_.size());
  return FreeWord(std::vector<Letter>(letters_.begin(), letters_.begin() + static_cast<std::ptrdiff_t>(n)));
}

FreeWord FreeWord::suffix_from(std::size_t n) const {
  n = std::min(n, letters_.size());
  return FreeWord(std::vector<Letter>(letters_.begin() + static_cast<std::ptrdiff_t>(n), letters_.end()));
}

bool FreeWord::is_cyclically_reduced() const {
  return letters_.size() < 2 || letters_.front() != -letters_.back();
}

std::size_t FreeWord::rank_used() const {
  std::size_t r = 0;
  for (Letter l : letters_) r = std::max(r, generator_of(l) + 1);
  return r;
}

std::size_t FreeWord::hash() const noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL ^ letters_.size();
  for (Letter l : letters_) {
    h ^= static_cast<std::uint32_t>(l);
    h *= 0x100000001b3ULL;
  }
  return static_cast<std::size_t>(h ^ (h >> 29));
}

std::strong_ordering shortlex_compare(const FreeWord& a, const FreeWord& b) {
  if (a.length() != b.length()) return a.length() <=> b.length();
  for (std::size_t i = 0; i < a.length(); ++i)
    if (a[i] != b[i]) return letter_rank(a[i]) <=> letter_rank(b[i]);
  return std::strong_ordering::equal;
}

FreeWord commutator(const FreeWord& u, const FreeWord& v) { return u.inverse() * v.inverse() * u * v; }

FreeWord conjugate(const FreeWord& u, const FreeWord& v) { return v.inverse() * u * v; }

std::vector<std::int64_t> exponent_vector(const FreeWord& w, std::size_t basis_size) {
  std::vector<std::int64_t> v(basis_size, 0);
  for (Letter l : w.letters()) {
    std::size_t g = generator_of(l);
    if (g >= basis_size) throw MixedContextError("word uses a generator outside the basis");
    v[g] += l > 0 ? 1 : -1;
  }
  return v;
}

namespace {

struct FreeOps {
  using Value = FreeWord;
  const Alphabet& alphabet;
  Value identity() const { return {}; }
  Value resolve(const std::string& prefix, const std::string& name) const {
    if (!prefix.empty()) throw ParseError("factor prefix '" + prefix + ":' in a free group word");
    auto idx = alphabet.find(name);
    if (!idx) throw ParseError("unknown generator symbol '" + name + "'");
    return FreeWord::generator(*idx);
  }
  Value mul(const Value& a, const Value& b) const { return a * b; }
  Value inv(const Value& a) const { return a.inverse(); }
  Value pow(const Value& a, std::int64_t n) const { return a.pow(n); }
};

}  // namespace

FreeWord parse_word(const Alphabet& alphabet, std::string_view text) {
  FreeOps ops{alphabet};
  return detail::ExpressionParser<FreeOps>(text, ops).parse();
}

std::string format_word(const Alphabet& alphabet, const FreeWord& w) {
  if (w.is_identity()) return "1";
  std::string out;
  std::size_t i = 0;
  while (i < w.length()) {
    std::size_t j = i;
    while (j < w.length() && w[j] == w[i]) ++j;
    std::size_t g = generator_of(w[i]);
    if (g >= alphabet.size()) throw MixedContextError("word uses a generator outside the alphabet");
    if (!out.empty()) out += ' ';
    out += alphabet.name(g);
    long run = static_cast<long>(j - i) * (w[i] < 0 ? -1 : 1);
    if (run != 1) out += "^" + std::to_string(run);
    i = j;
  }
  return out;
}

}  // namespace qcext::groups
