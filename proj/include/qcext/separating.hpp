#pragma once

#include <memory>
#include <mutex>
#include <unordered_map>
#include <utility>
#include <vector>

#include "json.hpp"
#include "qcext/geodesics.hpp"

namespace qcext::separating {

using embedding::Coset;
using embedding::EmbeddingSpec;
using embedding::SubgroupId;
using geodesics::GeodesicEngine;
using groups::Element;

struct SeparatingCoset {
  Coset coset;
  std::size_t distance;  // d(f, coset)
};

struct SeparatingCosets {
  SubgroupId lambda = 0;
  std::vector<SeparatingCoset> cosets;  // ordered by distance from f
  bool trivial = false;
  bool exhaustive = true;
  // Cosets penetrated by some geodesic, but never with dhat > 3C.
  std::vector<Coset> below_threshold;

  bool contains(const Coset& c) const;
};

using EntranceExit = std::pair<Element, Element>;

struct EntranceExitSet {
  Coset coset;
  std::vector<EntranceExit> pairs;  // sorted, without repetitions
};

struct TrianglePartition {
  std::vector<Coset> s_prime;
  std::vector<Coset> s_double_prime;
  std::vector<Coset> F;
  // True when the split index of the proof (last coset met by a fixed
  // geodesic from f to h) already satisfies every condition.
  bool split_from_proof = true;
};

// Separating-coset analysis with memoisation on f^-1 g.
class Separator {
 public:
  explicit Separator(const GeodesicEngine& engine) : engine_(engine) {}

  const GeodesicEngine& engine() const { return engine_; }
  const EmbeddingSpec& spec() const { return engine_.spec(); }

  SeparatingCosets separating_cosets(const Element& f, const Element& g, SubgroupId lambda) const;
  EntranceExitSet entrance_exit_set(const Element& f, const Element& g, const Coset& coset) const;
  TrianglePartition triangle_partition(const Element& f, const Element& g, const Element& h, SubgroupId lambda) const;

  nlohmann::json to_json(const Element& f, const Element& g, SubgroupId lambda) const;

 private:
  struct Local {
    SeparatingCosets sep;
    std::vector<EntranceExitSet> entrance_exit;  // parallel to sep.cosets
  };
  std::shared_ptr<const Local> local(const Element& u, SubgroupId lambda) const;
  std::shared_ptr<const Local> compute(const Element& u, SubgroupId lambda) const;

  const GeodesicEngine& engine_;
  mutable std::mutex mutex_;
  mutable std::unordered_map<Element, std::shared_ptr<const Local>, groups::ElementHash> cache_[2];
};

}  // namespace qcext::separating
