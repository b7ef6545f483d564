#include "qcext/coeffs.hpp"

#include <cmath>

#include "qcext/errors.hpp"

namespace qcext::coeffs {

ModuleSpec ModuleSpec::indexed_lp(Rational p, std::vector<std::string> tags) {
  if (p < 1) throw SchemaError("l^p needs p >= 1");
  if (tags.empty()) throw SchemaError("l^p module needs at least one tag");
  ModuleSpec s;
  s.trivial_ = false;
  s.p_ = std::move(p);
  s.tags_ = std::move(tags);
  return s;
}

ModuleSpec ModuleSpec::from_json(const nlohmann::json& j) {
  if (j.is_string() && j.get<std::string>() == "trivial_reals") return trivial_reals();
  if (!j.is_object() || !j.contains("kind")) throw SchemaError("module spec needs a 'kind'");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "trivial_reals") return trivial_reals();
  if (kind == "indexed_lp") {
    try {
      return indexed_lp(parse_rational(j.at("p").get<std::string>()), j.at("tags").get<std::vector<std::string>>());
    } catch (const nlohmann::json::exception& e) {
      throw SchemaError(std::string("indexed_lp: ") + e.what());
    } catch (const ParseError& e) {
      throw SchemaError(e.what());
    }
  }
  throw SchemaError("unknown module kind '" + kind + "'");
}

nlohmann::json ModuleSpec::to_json() const {
  if (trivial_) return {{"kind", "trivial_reals"}};
  return {{"kind", "indexed_lp"}, {"p", qcext::to_string(p_)}, {"tags", tags_}};
}

std::uint32_t ModuleSpec::tag_index(const std::string& tag) const {
  for (std::uint32_t i = 0; i < tags_.size(); ++i)
    if (tags_[i] == tag) return i;
  throw SchemaError("unknown tag '" + tag + "'");
}

ModuleVector ModuleVector::scalar(Rational value) {
  ModuleVector v;
  v.scalar_ = std::move(value);
  return v;
}

ModuleVector ModuleVector::basis(Element element, std::uint32_t tag, Rational coef) {
  ModuleVector v;
  if (coef != 0) v.support_.emplace(Index{std::move(element), tag}, std::move(coef));
  return v;
}

const Rational& ModuleVector::scalar_value() const {
  if (!support_.empty()) throw MixedContextError("indexed vector used as a scalar");
  return scalar_;
}

void ModuleVector::add_scaled(const ModuleVector& rhs, int sign) {
  if ((scalar_ != 0 && !rhs.support_.empty()) || (!support_.empty() && rhs.scalar_ != 0))
    throw MixedContextError("adding vectors from different modules");
  if (sign > 0)
    scalar_ += rhs.scalar_;
  else
    scalar_ -= rhs.scalar_;
  for (const auto& [idx, c] : rhs.support_) {
    auto [it, fresh] = support_.try_emplace(idx, 0);
    if (sign > 0)
      it->second += c;
    else
      it->second -= c;
    if (it->second == 0) support_.erase(it);
  }
}

ModuleVector& ModuleVector::operator+=(const ModuleVector& rhs) {
  add_scaled(rhs, 1);
  return *this;
}

ModuleVector& ModuleVector::operator-=(const ModuleVector& rhs) {
  add_scaled(rhs, -1);
  return *this;
}

ModuleVector ModuleVector::operator+(const ModuleVector& rhs) const {
  ModuleVector out = *this;
  out += rhs;
  return out;
}

ModuleVector ModuleVector::operator-(const ModuleVector& rhs) const {
  ModuleVector out = *this;
  out -= rhs;
  return out;
}

ModuleVector ModuleVector::operator-() const { return scaled(-1); }

ModuleVector ModuleVector::scaled(const Rational& c) const {
  ModuleVector out;
  if (c == 0) return out;
  out.scalar_ = scalar_ * c;
  for (const auto& [idx, v] : support_) out.support_.emplace(idx, v * c);
  return out;
}

ModuleVector act(const ModuleSpec& spec, const GroupContext& G, const Element& g, const ModuleVector& v) {
  if (spec.is_trivial() || v.support().empty()) return v;
  ModuleVector out;
  for (const auto& [idx, c] : v.support()) out += ModuleVector::basis(G.product(g, idx.element), idx.tag, c);
  return out;
}

Rational norm_exact_pth_power(const ModuleSpec& spec, const ModuleVector& v) {
  if (spec.is_trivial()) return abs_value(v.scalar_value());
  if (!spec.p_is_integral()) throw CheckFailure("exact p-th power needs integral p");
  const unsigned long p = spec.p().get_num().get_ui();
  Rational total = 0;
  for (const auto& [idx, c] : v.support()) {
    Rational a = abs_value(c);
    mpz_class num, den;
    mpz_pow_ui(num.get_mpz_t(), a.get_num_mpz_t(), p);
    mpz_pow_ui(den.get_mpz_t(), a.get_den_mpz_t(), p);
    total += Rational(num, den);
  }
  total.canonicalize();
  return total;
}

double norm(const ModuleSpec& spec, const ModuleVector& v) {
  if (spec.is_trivial()) return std::fabs(to_double(v.scalar_value()));
  const double p = to_double(spec.p());
  if (spec.p_is_integral()) return std::pow(to_double(norm_exact_pth_power(spec, v)), 1.0 / p);
  double total = 0;
  for (const auto& [idx, c] : v.support()) total += std::pow(std::fabs(to_double(c)), p);
  return std::pow(total, 1.0 / p);
}

bool norm_at_most(const ModuleSpec& spec, const ModuleVector& v, const Rational& bound, double tolerance) {
  if (spec.is_trivial()) return abs_value(v.scalar_value()) <= bound;
  if (bound < 0) return false;
  if (spec.p_is_integral()) {
    const unsigned long p = spec.p().get_num().get_ui();
    mpz_class num, den;
    mpz_pow_ui(num.get_mpz_t(), bound.get_num_mpz_t(), p);
    mpz_pow_ui(den.get_mpz_t(), bound.get_den_mpz_t(), p);
    return norm_exact_pth_power(spec, v) <= Rational(num, den);
  }
  return norm(spec, v) <= to_double(bound) + tolerance;
}

namespace {

std::optional<Rational> exact_root(const ModuleSpec& spec, const ModuleVector& v) {
  if (spec.is_trivial()) return abs_value(v.scalar_value());
  if (!spec.p_is_integral()) {
    if (v.is_zero()) return Rational(0);
    return std::nullopt;
  }
  const unsigned long p = spec.p().get_num().get_ui();
  const Rational s = norm_exact_pth_power(spec, v);
  mpz_class num, den;
  if (!mpz_root(num.get_mpz_t(), s.get_num_mpz_t(), p)) return std::nullopt;
  if (!mpz_root(den.get_mpz_t(), s.get_den_mpz_t(), p)) return std::nullopt;
  return Rational(num, den);
}

}  // namespace

bool norm_is_rational(const ModuleSpec& spec, const ModuleVector& v) { return exact_root(spec, v).has_value(); }

Rational norm_upper(const ModuleSpec& spec, const ModuleVector& v) {
  if (auto r = exact_root(spec, v)) return *r;
  return round_up(norm(spec, v));
}

ModuleVector project_to_submodule(const ModuleSpec& spec, const std::function<bool(const Element&)>& in_subgroup,
                                  const ModuleVector& v) {
  if (spec.is_trivial()) throw MixedContextError("projection needs an l^p module");
  ModuleVector out;
  for (const auto& [idx, c] : v.support())
    if (in_subgroup(idx.element)) out += ModuleVector::basis(idx.element, idx.tag, c);
  return out;
}

nlohmann::json to_json(const ModuleSpec& spec, const GroupContext& G, const ModuleVector& v) {
  if (spec.is_trivial()) return qcext::to_string(v.scalar_value());
  auto arr = nlohmann::json::array();
  for (const auto& [idx, c] : v.support())
    arr.push_back({{"elem", G.format(idx.element)}, {"tag", spec.tags().at(idx.tag)}, {"coef", qcext::to_string(c)}});
  return arr;
}

}  // namespace qcext::coeffs
