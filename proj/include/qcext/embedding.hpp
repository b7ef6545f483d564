#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "qcext/groups/group_context.hpp"
#include "qcext/groups/subgroup.hpp"
#include "qcext/rational.hpp"

namespace qcext::embedding {

using groups::Element;
using groups::FreeWord;
using groups::GroupContext;

enum class Family { FreeProductPair, FreeRelCyclic };

struct Budget {
  // Geodesic search tube half-width, in multiples of |w|.
  std::size_t geodesic_slack = 2;
  // Largest slack tried while certifying that the geodesic set is stable.
  std::size_t max_certify_slack = 4;
  std::size_t max_vertices = 4'000'000;
  std::size_t max_geodesics = 200'000;
  std::size_t ball_radius_cap = 12;
  std::size_t max_ball_elements = 5'000'000;
  // Largest |n| scanned for subgroup elements w^n.
  std::int64_t max_power = 4096;
  // When positive, geodesic sets for |f^-1 g|_S + |w| <= this cap are also
  // checked against the brute-force oracle before being marked exhaustive.
  std::size_t oracle_length_cap = 0;

  nlohmann::json to_json() const;
  static Budget from_json(const nlohmann::json& j);
};

using SubgroupId = std::size_t;

struct XLetter {
  groups::Letter letter;
  friend bool operator==(const XLetter&, const XLetter&) = default;
};

// An edge labelled by a nontrivial element of H_lambda. For the cyclic family
// power records n with element = w^n.
struct HLetter {
  SubgroupId lambda;
  Element element;
  std::int64_t power = 0;
  friend bool operator==(const HLetter& a, const HLetter& b) { return a.lambda == b.lambda && a.element == b.element; }
};

using AlphabetLetter = std::variant<XLetter, HLetter>;

// XLetters before HLetters; then by symbol rank, or by (lambda, |power|, sign, element).
bool letter_less(const AlphabetLetter& a, const AlphabetLetter& b);

class RelativeDistance {
 public:
  static RelativeDistance finite(std::uint64_t v) { return RelativeDistance(v, false); }
  static RelativeDistance infinite() { return RelativeDistance(0, true); }

  bool is_infinite() const { return infinite_; }
  std::uint64_t value() const;
  // Strictly greater than a rational threshold; infinity exceeds everything.
  bool exceeds(const Rational& threshold) const;
  std::string to_string() const;

  friend bool operator==(const RelativeDistance&, const RelativeDistance&) = default;
  friend std::partial_ordering operator<=>(const RelativeDistance& a, const RelativeDistance& b);

 private:
  RelativeDistance(std::uint64_t v, bool inf) : value_(v), infinite_(inf) {}
  std::uint64_t value_;
  bool infinite_;
};

RelativeDistance operator+(const RelativeDistance& a, const RelativeDistance& b);

struct Coset {
  SubgroupId lambda;
  Element rep;
  friend auto operator<=>(const Coset&, const Coset&) = default;
  friend bool operator==(const Coset&, const Coset&) = default;
};

class EmbeddingSpec {
 public:
  // G = A * B with H_A, H_B the factors and X empty.
  static EmbeddingSpec free_product(GroupContext::Ptr product, Rational C, Budget budget = {});
  // G = F(S), H = <w>, X = S.
  static EmbeddingSpec free_rel_cyclic(GroupContext::Ptr free_group, FreeWord w, Rational C, Budget budget = {});
  static EmbeddingSpec from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  Family family() const { return family_; }
  const GroupContext& group() const { return *group_; }
  const GroupContext::Ptr& group_ptr() const { return group_; }
  const Rational& C() const { return C_; }
  const Budget& budget() const { return budget_; }
  Budget& mutable_budget() { return budget_; }
  EmbeddingSpec with_C(Rational c) const;

  // Cyclic family only.
  const FreeWord& w() const;
  std::size_t rank() const;

  std::size_t subgroup_count() const { return subgroups_.size(); }
  const groups::Subgroup& subgroup(SubgroupId lambda) const { return subgroups_.at(lambda); }
  const std::string& subgroup_name(SubgroupId lambda) const { return subgroups_.at(lambda).name(); }
  std::optional<SubgroupId> subgroup_by_name(std::string_view name) const;
  bool in_subgroup(SubgroupId lambda, const Element& g) const { return subgroup(lambda).contains(g); }

  // Canonical coset: free product, x with a trailing H_lambda-syllable removed;
  // cyclic family, the x w^n minimising (S-length, shortlex).
  Coset coset(SubgroupId lambda, const Element& x) const;
  bool coset_contains(const Coset& c, const Element& g) const;
  Coset translate(const Element& h, const Coset& c) const;

  Element letter_element(const AlphabetLetter& a) const;
  std::string format_letter(const AlphabetLetter& a) const;
  std::string format(const Element& g) const { return group_->format(g); }
  Element parse(std::string_view text) const { return group_->parse(text); }

  std::string describe() const;

 private:
  EmbeddingSpec() = default;
  Family family_ = Family::FreeProductPair;
  GroupContext::Ptr group_;
  Rational C_;
  Budget budget_;
  FreeWord w_;
  std::vector<groups::Subgroup> subgroups_;

  struct DistanceCache {
    std::mutex mutex;
    std::map<std::int64_t, std::uint64_t> dhat_power;
  };
  std::shared_ptr<DistanceCache> cache_ = std::make_shared<DistanceCache>();
  friend RelativeDistance relative_distance(const EmbeddingSpec&, SubgroupId, const Element&, const Element&);
};

// Relative metric on H_lambda: shortest paths avoiding the edges of H_lambda's
// own complete subgraph.
RelativeDistance relative_distance(const EmbeddingSpec& spec, SubgroupId lambda, const Element& h1, const Element& h2);

// {h in H_lambda : dhat(1,h) <= radius}, sorted by distance then element.
struct BallListing {
  std::vector<Element> elements;
  std::vector<RelativeDistance> distances;
};
BallListing check_local_finiteness(const EmbeddingSpec& spec, SubgroupId lambda, std::uint64_t radius);

}  // namespace qcext::embedding
