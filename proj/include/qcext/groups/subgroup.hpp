#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qcext/groups/group_context.hpp"

namespace qcext::groups {

// A subgroup of an ambient group, with membership and, when the subgroup is
// free on a known basis, coordinates in that basis.
class Subgroup {
 public:
  enum class Kind { Whole, Factor, Cyclic };

  static Subgroup whole(GroupContext::Ptr ambient);
  static Subgroup factor(GroupContext::Ptr product, FactorId f);
  // <w> inside a free group; w must not be a proper power.
  static Subgroup cyclic(GroupContext::Ptr free_group, FreeWord w);

  Kind kind() const { return kind_; }
  const GroupContext& ambient() const { return *ambient_; }
  const GroupContext::Ptr& ambient_ptr() const { return ambient_; }
  const std::string& name() const { return name_; }
  void set_name(std::string n) { name_ = std::move(n); }

  bool contains(const Element& g) const;
  const std::vector<Element>& generators() const { return generators_; }

  // The subgroup as an abstract group (the factor, the free group, or Z on "w").
  const GroupContext& intrinsic() const { return *intrinsic_; }
  const GroupContext::Ptr& intrinsic_ptr() const { return intrinsic_; }
  Element to_intrinsic(const Element& g) const;
  Element from_intrinsic(const Element& h) const;

  bool is_free() const { return intrinsic_->kind() == GroupContext::Kind::FreeGroup; }
  const FreeWord& cyclic_generator() const { return w_; }
  // n with g = w^n, for cyclic subgroups of a free group.
  std::optional<std::int64_t> cyclic_exponent(const FreeWord& g) const;

 private:
  Subgroup() = default;
  Kind kind_ = Kind::Whole;
  GroupContext::Ptr ambient_;
  GroupContext::Ptr intrinsic_;
  FactorId factor_ = FactorId::A;
  FreeWord w_;
  std::string name_;
  std::vector<Element> generators_;
};

bool is_proper_power(const FreeWord& w);

}  // namespace qcext::groups
