#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qcext/groups/group_context.hpp"
#include "qcext/rational.hpp"

namespace qcext::coeffs {

using groups::Element;
using groups::GroupContext;

// Trivial reals, or finitely supported l^p(G x tags) with G acting on the first coordinate.
class ModuleSpec {
 public:
  static ModuleSpec trivial_reals() { return ModuleSpec(); }
  static ModuleSpec indexed_lp(Rational p, std::vector<std::string> tags);
  static ModuleSpec from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  bool is_trivial() const { return trivial_; }
  const Rational& p() const { return p_; }
  bool p_is_integral() const { return p_.get_den() == 1; }
  const std::vector<std::string>& tags() const { return tags_; }
  std::uint32_t tag_index(const std::string& tag) const;

  friend bool operator==(const ModuleSpec& a, const ModuleSpec& b) {
    return a.trivial_ == b.trivial_ && a.p_ == b.p_ && a.tags_ == b.tags_;
  }

 private:
  ModuleSpec() = default;
  bool trivial_ = true;
  Rational p_ = 1;
  std::vector<std::string> tags_;
};

struct Index {
  Element element;
  std::uint32_t tag;
  friend auto operator<=>(const Index&, const Index&) = default;
  friend bool operator==(const Index&, const Index&) = default;
};

// A vector of either module kind. The default value is the zero vector,
// which is compatible with both kinds. Zero coefficients are never stored.
class ModuleVector {
 public:
  ModuleVector() = default;
  static ModuleVector scalar(Rational value);
  static ModuleVector basis(Element element, std::uint32_t tag, Rational coef = 1);

  bool is_zero() const { return scalar_ == 0 && support_.empty(); }
  bool is_indexed() const { return !support_.empty(); }
  const Rational& scalar_value() const;
  const std::map<Index, Rational>& support() const { return support_; }

  ModuleVector& operator+=(const ModuleVector& rhs);
  ModuleVector& operator-=(const ModuleVector& rhs);
  ModuleVector operator+(const ModuleVector& rhs) const;
  ModuleVector operator-(const ModuleVector& rhs) const;
  ModuleVector operator-() const;
  ModuleVector scaled(const Rational& c) const;

  friend bool operator==(const ModuleVector& a, const ModuleVector& b) {
    return a.scalar_ == b.scalar_ && a.support_ == b.support_;
  }

 private:
  void add_scaled(const ModuleVector& rhs, int sign);
  Rational scalar_ = 0;
  std::map<Index, Rational> support_;
};

// (g.v)(x,t) = v(g^-1 x, t); the trivial module is fixed.
ModuleVector act(const ModuleSpec& spec, const GroupContext& G, const Element& g, const ModuleVector& v);

double norm(const ModuleSpec& spec, const ModuleVector& v);
// sum |c|^p, exactly; requires integral p. The trivial module uses p = 1.
Rational norm_exact_pth_power(const ModuleSpec& spec, const ModuleVector& v);
// ||v|| <= bound, exact when p is integral, otherwise within tolerance.
bool norm_at_most(const ModuleSpec& spec, const ModuleVector& v, const Rational& bound, double tolerance = 1e-9);
// Whether ||v|| is rational (integral p with a perfect p-th power, or the trivial module).
bool norm_is_rational(const ModuleSpec& spec, const ModuleVector& v);
// A rational upper bound for ||v||: exact when the norm is rational, otherwise
// the floating value rounded up.
Rational norm_upper(const ModuleSpec& spec, const ModuleVector& v);

ModuleVector project_to_submodule(const ModuleSpec& spec, const std::function<bool(const Element&)>& in_subgroup,
                                  const ModuleVector& v);

nlohmann::json to_json(const ModuleSpec& spec, const GroupContext& G, const ModuleVector& v);

}  // namespace qcext::coeffs
