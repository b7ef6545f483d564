#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qcext/coeffs.hpp"
#include "qcext/groups/subgroup.hpp"
#include "qcext/rational.hpp"

namespace qcext::qc {

using coeffs::ModuleSpec;
using coeffs::ModuleVector;
using groups::Element;
using groups::GroupContext;
using groups::Subgroup;

// Where a defect upper bound comes from. Only these may enter a Bavard denominator.
enum class Provenance { ExtensionCertificate, HomomorphismZero, UserSupplied };
std::string to_string(Provenance p);

struct DefectBound {
  Rational value;
  Provenance provenance;
  std::string note;
  nlohmann::json to_json() const;
};

struct Flags {
  bool antisymmetric = false;
  bool homogeneous = false;
  bool exact_cocycle = false;
};

// q: H -> V for a subgroup H of an ambient group G acting on V.
class QuasiCocycle {
 public:
  using Evaluator = std::function<ModuleVector(const Element&)>;

  QuasiCocycle(Subgroup domain, ModuleSpec codomain, Evaluator eval, Flags flags, nlohmann::json descriptor);

  const Subgroup& domain() const { return domain_; }
  const GroupContext& group() const { return domain_.ambient(); }
  const ModuleSpec& codomain() const { return codomain_; }
  const Flags& flags() const { return flags_; }
  const nlohmann::json& descriptor() const { return descriptor_; }

  const std::optional<DefectBound>& defect_bound() const { return defect_bound_; }
  QuasiCocycle with_defect_bound(DefectBound b) const;
  QuasiCocycle with_flags(Flags f) const;
  // Values are within this distance of the quantity they approximate (numeric homogenization).
  const std::optional<Rational>& value_error() const { return value_error_; }
  QuasiCocycle with_value_error(Rational e) const;

  bool in_domain(const Element& g) const { return domain_.contains(g); }
  ModuleVector operator()(const Element& g) const;
  // Scalar value for the trivial module.
  Rational value(const Element& g) const { return (*this)(g).scalar_value(); }

 private:
  struct Memo;
  Subgroup domain_;
  ModuleSpec codomain_;
  Evaluator eval_;
  Flags flags_;
  nlohmann::json descriptor_;
  std::optional<DefectBound> defect_bound_;
  std::optional<Rational> value_error_;
  std::shared_ptr<Memo> memo_;
};

struct DefectEstimate {
  ModuleSpec spec = ModuleSpec::trivial_reals();
  double value = 0;
  ModuleVector witness;  // the maximal d^1 q(f,g) found
  Element f, g;
  std::size_t exhaustive_ball_radius = 0;
  std::size_t ball_size = 0;
  std::size_t sampled_pairs = 0;
  bool is_lower_bound = true;

  // sup <= bound, exactly when the module norm allows it.
  bool at_most(const Rational& bound, double tolerance = 1e-9) const;
  nlohmann::json to_json(const GroupContext& G) const;
};

// sup ||q(fg) - q(f) - f q(g)|| over all pairs in the word ball of the given
// radius in the domain's generators, plus random pairs of longer words.
DefectEstimate defect(const QuasiCocycle& q, std::size_t ball_radius, std::size_t extra_samples = 0,
                      std::uint64_t seed = 0);
// The same supremum over an explicit element list (all ordered pairs).
DefectEstimate defect_on(const QuasiCocycle& q, const std::vector<Element>& elements);

QuasiCocycle antisymmetrize(const QuasiCocycle& q);
// psi(g) = phi(g^n)/n with error at most D(phi)/n; exact when phi is already homogeneous.
QuasiCocycle homogenize(const QuasiCocycle& phi, std::int64_t n_max);

// Brooks counting quasimorphism c_w - c_{w^-1} on a free subgroup, w in its basis.
QuasiCocycle brooks(const Subgroup& H, const groups::FreeWord& w);
// Its homogenization, evaluated exactly through the cyclic reduction.
QuasiCocycle brooks_homogenized(const Subgroup& H, const groups::FreeWord& w);
// Greedy count of disjoint occurrences of w in the reduced word u.
std::size_t count_disjoint(const groups::FreeWord& u, const groups::FreeWord& w);
// lim c_w(u^n)/n for a cyclically reduced nontrivial u.
Rational periodic_density(const groups::FreeWord& u, const groups::FreeWord& w);

// H of rank one (a cyclic subgroup, or a Z factor): w^n -> n.
QuasiCocycle cyclic_homomorphism(const Subgroup& H);
// w^n -> 1 if n >= 0, else 0.
QuasiCocycle step(const Subgroup& H);
// Homomorphism of a free H given by its values on the basis.
QuasiCocycle homomorphism(const Subgroup& H, std::vector<Rational> basis_values);
QuasiCocycle zero(const Subgroup& H, ModuleSpec codomain);
// Sum over the tree geodesic [1,h] of +-delta_(v,s), in l^p(G x basis of H).
QuasiCocycle tree_edge_cocycle(const Subgroup& H, Rational p);

QuasiCocycle linear_combination(const std::vector<std::pair<Rational, QuasiCocycle>>& terms);

// d^1 q(g1,g2) = g1 q(g2) - q(g1 g2) + q(g1).
ModuleVector coboundary1(const QuasiCocycle& q, const Element& g1, const Element& g2);
using Cochain2 = std::function<ModuleVector(const Element&, const Element&)>;
ModuleVector coboundary2(const ModuleSpec& spec, const GroupContext& G, const Cochain2& c, const Element& g1,
                         const Element& g2, const Element& g3);

// {"kind": "brooks" | "brooks_homogenized" | "cyclic_hom" | "step" | "tree_edge" | "homomorphism" | "zero", ...}
// with optional "antisymmetrize": true and "scale": "p/q". Words are read in H's own basis.
QuasiCocycle from_descriptor(const Subgroup& H, const nlohmann::json& d);

}  // namespace qcext::qc
