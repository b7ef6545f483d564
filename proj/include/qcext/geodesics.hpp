#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "json.hpp"
#include "qcext/embedding.hpp"

namespace qcext::geodesics {

using embedding::AlphabetLetter;
using embedding::Coset;
using embedding::EmbeddingSpec;
using embedding::HLetter;
using embedding::SubgroupId;
using embedding::XLetter;
using groups::Element;
using groups::ElementHash;
using groups::FreeWord;

class CayleyPath {
 public:
  CayleyPath(const EmbeddingSpec& spec, Element origin, std::vector<AlphabetLetter> edges);

  const Element& origin() const { return vertices_.front(); }
  const Element& end() const { return vertices_.back(); }
  const std::vector<AlphabetLetter>& edges() const { return edges_; }
  const std::vector<Element>& vertices() const { return vertices_; }
  std::size_t length() const { return edges_.size(); }

  CayleyPath translated(const EmbeddingSpec& spec, const Element& h) const;
  CayleyPath reversed(const EmbeddingSpec& spec) const;
  // Requires this->end() == next.origin().
  CayleyPath concat(const EmbeddingSpec& spec, const CayleyPath& next) const;

  nlohmann::json labels_json(const EmbeddingSpec& spec) const;

 private:
  std::vector<AlphabetLetter> edges_;
  std::vector<Element> vertices_;
};

// Edges [start, end) form a maximal run of H_lambda-letters; entry and exit
// are the vertices at positions start and end.
struct PathComponent {
  SubgroupId lambda;
  std::size_t start;
  std::size_t end;
  Element entry;
  Element exit;
};

std::vector<PathComponent> components(const CayleyPath& path, SubgroupId lambda);
// For a closed path the first and last runs join when they meet at the base point.
std::vector<PathComponent> loop_components(const CayleyPath& loop, SubgroupId lambda);

struct GeodesicSet {
  std::vector<CayleyPath> paths;
  std::size_t distance = 0;
  bool exhaustive = false;
};

struct OracleCaps {
  std::size_t max_S_length = 8;
  std::int64_t max_power = 8;
};

struct OracleAnswer {
  std::optional<std::uint32_t> distance;
  // Some vertex was excluded by the caps close enough to the identity that a
  // shorter path through it cannot be ruled out; the distance is then only an
  // upper bound.
  bool cap_touched = false;
};

// Plain breadth-first search from the identity over every reduced word of
// S-length at most max_S_length, with H-edges w^n for |n| <= max_power.
class BruteForceOracle {
 public:
  BruteForceOracle(const EmbeddingSpec& spec, OracleCaps caps);

  OracleAnswer distance(const Element& f, const Element& g) const;
  const OracleCaps& caps() const { return caps_; }
  std::size_t vertex_count() const { return dist_.size(); }

 private:
  OracleCaps caps_;
  std::unordered_map<FreeWord, std::uint32_t, groups::FreeWordHash> dist_;
  std::uint32_t first_cap_layer_ = UINT32_MAX;
};

OracleAnswer brute_force_distance_oracle(const EmbeddingSpec& spec, const Element& f, const Element& g, OracleCaps caps);

// Shortest paths in the coned-off Cayley graph, memoised on f^-1 g.
class GeodesicEngine {
 public:
  explicit GeodesicEngine(EmbeddingSpec spec);

  const EmbeddingSpec& spec() const { return spec_; }

  std::size_t distance(const Element& f, const Element& g) const;
  GeodesicSet geodesics(const Element& f, const Element& g) const;
  std::shared_ptr<const GeodesicSet> geodesics_from_identity(const Element& u) const;

  // Distance from f to the nearest element of a coset.
  std::size_t distance_to_coset(const Element& f, const Coset& c) const;

  void set_oracle(std::shared_ptr<const BruteForceOracle> oracle);
  std::shared_ptr<const BruteForceOracle> oracle() const;

 private:
  std::shared_ptr<const GeodesicSet> compute(const Element& u) const;

  EmbeddingSpec spec_;
  mutable std::mutex mutex_;
  mutable std::unordered_map<Element, std::shared_ptr<const GeodesicSet>, ElementHash> cache_;
  mutable std::unordered_map<Element, std::size_t, ElementHash> distance_cache_;
  mutable std::shared_ptr<const BruteForceOracle> oracle_;
  mutable bool oracle_built_ = false;
};

// Entrance and exit vertices of a geodesic in a coset, if it penetrates it.
// Throws CheckFailure if the path is not geodesic or penetrates twice.
std::optional<std::pair<Element, Element>> penetration(const GeodesicEngine& engine, const CayleyPath& geodesic,
                                                       const Coset& coset);

// Same as penetration, without the geodesicity check.
std::optional<PathComponent> find_component_in(const EmbeddingSpec& spec, const CayleyPath& path, const Coset& coset);

}  // namespace qcext::geodesics
