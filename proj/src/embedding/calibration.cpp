#include "qcext/calibration.hpp"

#include "qcext/errors.hpp"
#include "qcext/random.hpp"

namespace qcext::embedding {

using geodesics::CayleyPath;

CalibrationConfig CalibrationConfig::from_json(const nlohmann::json& j) {
  CalibrationConfig c;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "sides")
        c.sides = value.get<std::vector<std::size_t>>();
      else if (key == "samples")
        c.samples = value.get<std::size_t>();
      else if (key == "max_vertex_length")
        c.max_vertex_length = value.get<std::size_t>();
      else if (key == "seed")
        c.seed = value.get<std::uint64_t>();
      else
        throw SchemaError("unknown calibration field '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("calibration config: ") + e.what());
  }
  for (std::size_t n : c.sides)
    if (n < 2) throw SchemaError("polygons need at least two sides");
  return c;
}

nlohmann::json CalibrationConfig::to_json() const {
  return {{"sides", sides}, {"samples", samples}, {"max_vertex_length", max_vertex_length}, {"seed", seed}};
}

nlohmann::json CalibrationReport::to_json(const EmbeddingSpec& spec) const {
  nlohmann::json j = {{"C_bar", {{"value", qcext::to_string(C_bar)}, {"provenance", "empirical-lower-bound"}}},
                      {"C_configured", qcext::to_string(spec.C())},
                      {"polygons", polygons},
                      {"isolated_components", isolated_components},
                      {"infinite_component_seen", infinite},
                      {"warnings", warnings}};
  nlohmann::json c = nlohmann::json::array();
  for (const auto& r : curve) c.push_back(qcext::to_string(r));
  j["curve"] = c;
  if (witness) {
    nlohmann::json poly = nlohmann::json::array();
    for (const auto& v : witness->polygon) poly.push_back(spec.format(v));
    j["witness"] = {{"polygon", poly},
                    {"subgroup", spec.subgroup_name(witness->lambda)},
                    {"entry", spec.format(witness->entry)},
                    {"exit", spec.format(witness->exit)},
                    {"dhat", witness->dhat.to_string()}};
  }
  return j;
}

namespace {

// Folds one polygon (closed path through the vertices) into the report.
void scan_polygon(const geodesics::GeodesicEngine& engine, const std::vector<Element>& vertices,
                  const std::vector<CayleyPath>& sides, CalibrationReport& report) {
  const EmbeddingSpec& spec = engine.spec();
  const auto& G = spec.group();
  CayleyPath loop = sides.front();
  for (std::size_t i = 1; i < sides.size(); ++i) loop = loop.concat(spec, sides[i]);
  const auto n = static_cast<long>(vertices.size());
  for (SubgroupId lambda = 0; lambda < spec.subgroup_count(); ++lambda) {
    auto comps = geodesics::loop_components(loop, lambda);
    for (std::size_t i = 0; i < comps.size(); ++i) {
      const Coset c = spec.coset(lambda, comps[i].entry);
      bool isolated = true;
      for (std::size_t j = 0; j < comps.size() && isolated; ++j)
        if (j != i && spec.coset_contains(c, comps[j].entry)) isolated = false;
      if (!isolated) continue;
      ++report.isolated_components;
      const Element step = G.product(G.inverse(comps[i].entry), comps[i].exit);
      RelativeDistance d = relative_distance(spec, lambda, G.identity(), step);
      if (d.is_infinite()) {
        report.infinite = true;
        continue;
      }
      const Rational ratio = qcext::ratio(static_cast<long>(d.value()), n);
      if (ratio > report.C_bar || (!report.witness && d.value() > 0)) {
        if (ratio > report.C_bar) report.C_bar = ratio;
        report.witness = IsolatedComponent{vertices, lambda, comps[i].entry, comps[i].exit, d};
      }
    }
  }
  ++report.polygons;
  report.curve.push_back(report.C_bar);
}

std::vector<CayleyPath> first_geodesics(const geodesics::GeodesicEngine& engine, const std::vector<Element>& v) {
  std::vector<CayleyPath> sides;
  for (std::size_t i = 0; i < v.size(); ++i) sides.push_back(engine.geodesics(v[i], v[(i + 1) % v.size()]).paths.front());
  return sides;
}

}  // namespace

CalibrationReport calibrate_polygon(const geodesics::GeodesicEngine& engine, const std::vector<Element>& vertices) {
  if (vertices.size() < 2) throw SchemaError("polygons need at least two vertices");
  CalibrationReport report;
  scan_polygon(engine, vertices, first_geodesics(engine, vertices), report);
  return report;
}

CalibrationReport calibrate_C(const geodesics::GeodesicEngine& engine, const CalibrationConfig& config) {
  const EmbeddingSpec& spec = engine.spec();
  const auto& G = spec.group();
  CalibrationReport report;
  if (spec.family() == Family::FreeProductPair)
    report.warnings.push_back("free products do not use C when testing essential penetration");
  if (config.samples == 0 || config.sides.empty()) {
    report.warnings.push_back("empty sample: C_bar = 0");
    return report;
  }
  const std::vector<Element> gens = G.generators();
  Rng rng(config.seed, "calibrate-C");
  for (std::size_t s = 0; s < config.samples; ++s) {
    const std::size_t n = config.sides[s % config.sides.size()];
    std::vector<Element> vertices;
    for (std::size_t i = 0; i < n; ++i)
      vertices.push_back(rng.random_word(G, gens, rng.below(config.max_vertex_length + 1)));
    // Any geodesic may be used on each side; pick one at random.
    std::vector<CayleyPath> sides;
    for (std::size_t i = 0; i < n; ++i) {
      const auto set = engine.geodesics(vertices[i], vertices[(i + 1) % n]);
      sides.push_back(set.paths[rng.below(set.paths.size())]);
    }
    scan_polygon(engine, vertices, sides, report);
  }
  return report;
}

}  // namespace qcext::embedding
