#pragma once

#include <cctype>
#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qcext/errors.hpp"

namespace qcext::groups::detail {

// Recursive-descent parser for group expressions:
//   product  := factor*
//   factor   := atom ('^' exponent)*
//   exponent := ['-'] integer | identifier | '(' product ')'
//   atom     := identifier | '1' | '(' product ')' | '[' product ',' product ']'
// Identifiers may carry a factor prefix "A:" or "B:".
// Ops supplies Value, identity(), resolve(prefix, name), mul, inv, pow.
template <class Ops>
class ExpressionParser {
 public:
  using Value = typename Ops::Value;

  ExpressionParser(std::string_view text, const Ops& ops) : text_(text), ops_(ops) { tokenize(); }

  Value parse() {
    Value v = product();
    if (pos_ != tokens_.size()) fail("unexpected '" + tokens_[pos_].text + "'");
    return v;
  }

 private:
  enum class Kind { Ident, Int, Symbol };
  struct Token {
    Kind kind;
    std::string text;
    std::string prefix;
  };

  [[noreturn]] void fail(const std::string& why) const {
    throw ParseError("cannot parse '" + std::string(text_) + "': " + why);
  }

  void tokenize() {
    std::size_t i = 0;
    while (i < text_.size()) {
      char c = text_[i];
      if (std::isspace(static_cast<unsigned char>(c)) || c == '*') {
        ++i;
      } else if ((c == 'A' || c == 'B') && i + 1 < text_.size() && text_[i + 1] == ':') {
        std::size_t j = i + 2;
        if (j >= text_.size() || !std::islower(static_cast<unsigned char>(text_[j])))
          fail("factor prefix must be followed by a generator");
        std::size_t k = j;
        while (k < text_.size() && is_ident_char(text_[k])) ++k;
        tokens_.push_back({Kind::Ident, std::string(text_.substr(j, k - j)), std::string(1, c)});
        i = k;
      } else if (std::islower(static_cast<unsigned char>(c))) {
        std::size_t k = i;
        while (k < text_.size() && is_ident_char(text_[k])) ++k;
        tokens_.push_back({Kind::Ident, std::string(text_.substr(i, k - i)), {}});
        i = k;
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        std::size_t k = i;
        while (k < text_.size() && std::isdigit(static_cast<unsigned char>(text_[k]))) ++k;
        tokens_.push_back({Kind::Int, std::string(text_.substr(i, k - i)), {}});
        i = k;
      } else if (c == '^' || c == '-' || c == '(' || c == ')' || c == '[' || c == ']' || c == ',') {
        tokens_.push_back({Kind::Symbol, std::string(1, c), {}});
        ++i;
      } else {
        fail(std::string("unexpected character '") + c + "'");
      }
    }
  }

  static bool is_ident_char(char c) {
    return std::islower(static_cast<unsigned char>(c)) || std::isdigit(static_cast<unsigned char>(c)) || c == '_';
  }

  bool at_symbol(char c) const {
    return pos_ < tokens_.size() && tokens_[pos_].kind == Kind::Symbol && tokens_[pos_].text[0] == c;
  }

  void expect(char c) {
    if (!at_symbol(c)) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  bool at_product_end() const {
    return pos_ >= tokens_.size() || at_symbol(')') || at_symbol(']') || at_symbol(',');
  }

  Value product() {
    Value v = ops_.identity();
    while (!at_product_end()) v = ops_.mul(v, factor());
    return v;
  }

  Value factor() {
    Value v = atom();
    while (at_symbol('^')) {
      ++pos_;
      if (pos_ >= tokens_.size()) fail("missing exponent");
      const Token& t = tokens_[pos_];
      if (t.kind == Kind::Int || (t.kind == Kind::Symbol && t.text == "-")) {
        bool negative = false;
        if (t.kind == Kind::Symbol) {
          negative = true;
          ++pos_;
          if (pos_ >= tokens_.size() || tokens_[pos_].kind != Kind::Int) fail("malformed exponent");
        }
        std::int64_t n = 0;
        const std::string& digits = tokens_[pos_].text;
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
        if (ec != std::errc()) fail("exponent out of range");
        ++pos_;
        if (n == 0) fail("exponent must be nonzero");
        v = ops_.pow(v, negative ? -n : n);
      } else if (t.kind == Kind::Ident || at_symbol('(')) {
        Value by = atom();
        v = ops_.mul(ops_.mul(ops_.inv(by), v), by);
      } else {
        fail("malformed exponent");
      }
    }
    return v;
  }

  Value atom() {
    if (pos_ >= tokens_.size()) fail("unexpected end of input");
    const Token& t = tokens_[pos_];
    if (t.kind == Kind::Ident) {
      ++pos_;
      return ops_.resolve(t.prefix, t.text);
    }
    if (t.kind == Kind::Int) {
      if (t.text != "1") fail("integer '" + t.text + "' is not a group element");
      ++pos_;
      return ops_.identity();
    }
    if (at_symbol('(')) {
      ++pos_;
      Value v = product();
      expect(')');
      return v;
    }
    if (at_symbol('[')) {
      ++pos_;
      Value u = product();
      expect(',');
      Value w = product();
      expect(']');
      return ops_.mul(ops_.mul(ops_.inv(u), ops_.inv(w)), ops_.mul(u, w));
    }
    fail("unexpected '" + t.text + "'");
  }

  std::string_view text_;
  const Ops& ops_;
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace qcext::groups::detail
