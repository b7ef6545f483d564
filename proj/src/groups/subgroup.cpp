#include "qcext/groups/subgroup.hpp"

#include "qcext/errors.hpp"

namespace qcext::groups {

bool is_proper_power(const FreeWord& w) {
  if (!w.is_cyclically_reduced()) {
    std::size_t k = 0;
    while (2 * k + 1 < w.length() && w[k] == -w[w.length() - 1 - k]) ++k;
    return is_proper_power(w.prefix(w.length() - k).suffix_from(k));
  }
  const std::size_t n = w.length();
  for (std::size_t d = 1; d < n; ++d) {
    if (n % d != 0) continue;
    bool periodic = true;
    for (std::size_t i = 0; i + d < n && periodic; ++i) periodic = w[i] == w[i + d];
    if (periodic) return true;
  }
  return false;
}

Subgroup Subgroup::whole(GroupContext::Ptr ambient) {
  Subgroup s;
  s.kind_ = Kind::Whole;
  s.intrinsic_ = ambient;
  s.generators_ = ambient->generators();
  s.ambient_ = std::move(ambient);
  s.name_ = "G";
  return s;
}

Subgroup Subgroup::factor(GroupContext::Ptr product, FactorId f) {
  Subgroup s;
  s.kind_ = Kind::Factor;
  s.factor_ = f;
  s.intrinsic_ = product->factor_ptr(f);
  for (const Element& g : s.intrinsic_->generators()) s.generators_.push_back(product->embed(f, g));
  s.ambient_ = std::move(product);
  s.name_ = factor_name(f);
  return s;
}

Subgroup Subgroup::cyclic(GroupContext::Ptr free_group, FreeWord w) {
  if (free_group->kind() != GroupContext::Kind::FreeGroup) throw MixedContextError("cyclic subgroup needs a free group");
  if (w.is_identity()) throw SchemaError("cyclic subgroup generator must be nontrivial");
  if (!free_group->contains(w)) throw MixedContextError("cyclic generator outside the free group");
  if (is_proper_power(w)) throw SchemaError("cyclic subgroup generator must not be a proper power");
  Subgroup s;
  s.kind_ = Kind::Cyclic;
  s.w_ = std::move(w);
  s.intrinsic_ = GroupContext::free_group(std::vector<std::string>{"w"});
  s.generators_ = {s.w_};
  s.ambient_ = std::move(free_group);
  s.name_ = "H";
  return s;
}

std::optional<std::int64_t> Subgroup::cyclic_exponent(const FreeWord& g) const {
  if (kind_ != Kind::Cyclic) throw MixedContextError("not a cyclic subgroup");
  if (g.is_identity()) return 0;
  // w = c u c^-1 with u cyclically reduced, so |w^k| = 2|c| + |k||u| for k != 0.
  std::size_t c = 0;
  while (2 * c + 1 < w_.length() && w_[c] == -w_[w_.length() - 1 - c]) ++c;
  const std::size_t core = w_.length() - 2 * c;
  if (g.length() <= 2 * c || (g.length() - 2 * c) % core != 0) return std::nullopt;
  auto n = static_cast<std::int64_t>((g.length() - 2 * c) / core);
  if (w_.pow(n) == g) return n;
  if (w_.pow(-n) == g) return -n;
  return std::nullopt;
}

bool Subgroup::contains(const Element& g) const {
  switch (kind_) {
    case Kind::Whole:
      return ambient_->contains(g);
    case Kind::Factor: {
      auto p = std::get_if<FreeProductElement>(&g);
      if (!p || !ambient_->contains(g)) return false;
      return p->syllable_count() == 0 || (p->syllable_count() == 1 && p->syllables()[0].factor == factor_);
    }
    default: {
      auto w = std::get_if<FreeWord>(&g);
      return w && ambient_->contains(g) && cyclic_exponent(*w).has_value();
    }
  }
}

Element Subgroup::to_intrinsic(const Element& g) const {
  if (!contains(g)) throw MixedContextError("element is not in subgroup " + name_);
  switch (kind_) {
    case Kind::Whole:
      return g;
    case Kind::Factor: {
      const auto& p = std::get<FreeProductElement>(g);
      if (p.is_identity()) return intrinsic_->identity();
      return std::visit([](const auto& x) -> Element { return x; }, p.syllables()[0].element);
    }
    default:
      return FreeWord::generator(0, *cyclic_exponent(std::get<FreeWord>(g)));
  }
}

Element Subgroup::from_intrinsic(const Element& h) const {
  switch (kind_) {
    case Kind::Whole:
      return h;
    case Kind::Factor:
      return ambient_->embed(factor_, h);
    default: {
      const auto& word = std::get<FreeWord>(h);
      auto ex = exponent_vector(word, 1);
      return w_.pow(ex[0]);
    }
  }
}

}  // namespace qcext::groups
