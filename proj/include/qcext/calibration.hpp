#pragma once

#include <optional>
#include <vector>

#include "json.hpp"
#include "qcext/geodesics.hpp"

namespace qcext::embedding {

struct CalibrationConfig {
  std::vector<std::size_t> sides{3, 4, 5, 6};
  std::size_t samples = 200;
  // Polygon vertices are products of at most this many generators.
  std::size_t max_vertex_length = 4;
  std::uint64_t seed = 0;

  static CalibrationConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct IsolatedComponent {
  std::vector<Element> polygon;
  SubgroupId lambda = 0;
  Element entry, exit;
  RelativeDistance dhat = RelativeDistance::finite(0);
};

struct CalibrationReport {
  Rational C_bar = 0;
  std::optional<IsolatedComponent> witness;
  std::vector<Rational> curve;  // C_bar after each sampled polygon
  std::size_t polygons = 0;
  std::size_t isolated_components = 0;
  bool infinite = false;  // an isolated component with dhat = infinity was seen
  std::vector<std::string> warnings;

  nlohmann::json to_json(const EmbeddingSpec& spec) const;
};

// Geodesic polygon through the given vertices (first geodesic on each side),
// and max dhat(a-, a+)/n over its isolated components.
CalibrationReport calibrate_polygon(const geodesics::GeodesicEngine& engine, const std::vector<Element>& vertices);

// Empirical lower bound for the constant C from random geodesic n-gons.
CalibrationReport calibrate_C(const geodesics::GeodesicEngine& engine, const CalibrationConfig& config);

}  // namespace qcext::embedding
