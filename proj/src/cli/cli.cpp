#include "qcext/cli.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <map>
#include <set>

#include "qcext/calibration.hpp"
#include "qcext/errors.hpp"
#include "qcext/extension.hpp"
#include "qcext/qc.hpp"
#include "qcext/random.hpp"
#include "qcext/scl.hpp"
#include "qcext/verify.hpp"

namespace qcext::cli {

using embedding::EmbeddingSpec;
using groups::Element;
using embedding::SubgroupId;
using json = nlohmann::json;
using qc::QuasiCocycle;

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"extend",       "separating", "defect",   "calibrate-c",
                                              "as-nec-demo", "scl-bound",  "distortion", "verify"};
  return names;
}

namespace {

json tagged(const Rational& r, const char* provenance) {
  return {{"value", qcext::to_string(r)}, {"provenance", provenance}};
}

json default_embedding() {
  return {{"family", "free_product"},
          {"factors", {{{"kind", "cyclic"}, {"generator", "a"}}, {{"kind", "cyclic"}, {"generator", "b"}}}},
          {"C", "1"}};
}

json default_cocycles() { return json::array({{{"kind", "cyclic_hom"}}, {{"kind", "cyclic_hom"}}}); }

// Allowed top-level keys per subcommand; the section named after the subcommand holds its parameters.
const std::set<std::string>& allowed_keys(const std::string& sub) {
  static const std::map<std::string, std::set<std::string>> keys{
      {"extend", {"embedding", "cocycles", "seed", "extend"}},
      {"separating", {"embedding", "seed", "separating"}},
      {"defect", {"embedding", "cocycles", "seed", "defect"}},
      {"calibrate-c", {"embedding", "seed", "calibrate-c"}},
      {"as-nec-demo", {"seed", "as-nec-demo"}},
      {"scl-bound", {"embedding", "seed", "scl-bound"}},
      {"distortion", {"seed", "distortion"}},
      {"verify", {"embedding", "cocycles", "seed", "verify"}}};
  return keys.at(sub);
}

void check_keys(const json& section, const std::string& where, std::initializer_list<const char*> known) {
  if (!section.is_object()) throw SchemaError(where + " must be an object");
  for (const auto& [k, v] : section.items())
    if (std::none_of(known.begin(), known.end(), [&](const char* s) { return k == s; }))
      throw SchemaError("unknown field '" + k + "' in " + where);
}

template <class T>
T field(const json& section, const char* key, T fallback) {
  if (!section.contains(key)) return fallback;
  try {
    return section.at(key).get<T>();
  } catch (const json::exception& e) {
    throw SchemaError(std::string("field '") + key + "': " + e.what());
  }
}

Element parse_element(const EmbeddingSpec& spec, const json& j) {
  if (!j.is_string()) throw SchemaError("group elements are given as word strings");
  try {
    return spec.parse(j.get<std::string>());
  } catch (const ParseError& e) {
    throw SchemaError(e.what());
  }
}

std::vector<std::optional<QuasiCocycle>> parse_cocycles(const EmbeddingSpec& spec, const json& j) {
  std::vector<std::optional<QuasiCocycle>> family(spec.subgroup_count());
  auto load = [&](SubgroupId lambda, const json& d) {
    if (!d.is_null()) family[lambda] = qc::from_descriptor(spec.subgroup(lambda), d);
  };
  if (j.is_array()) {
    if (j.size() != spec.subgroup_count())
      throw SchemaError("'cocycles' needs one entry (or null) per subgroup; expected " +
                        std::to_string(spec.subgroup_count()));
    for (SubgroupId i = 0; i < j.size(); ++i) load(i, j[i]);
  } else if (j.is_object()) {
    for (const auto& [name, d] : j.items()) {
      auto lambda = spec.subgroup_by_name(name);
      if (!lambda) throw SchemaError("no subgroup named '" + name + "'");
      load(*lambda, d);
    }
  } else {
    throw SchemaError("'cocycles' must be an array or an object keyed by subgroup name");
  }
  return family;
}

struct Context {
  json config;
  std::uint64_t seed = 0;
  std::optional<EmbeddingSpec> spec;
  json results = json::object();
  bool conditional = false;
  bool failed = false;
  std::vector<std::string> failures;

  const json& section(const std::string& name) const {
    static const json empty = json::object();
    return config.contains(name) ? config.at(name) : empty;
  }
  void fail(std::string why) {
    failed = true;
    failures.push_back(std::move(why));
  }
  extension::Extension extension(extension::ExtensionOptions options = {}) const {
    const json& c = config.contains("cocycles") ? config.at("cocycles") : default_cocycles();
    return extension::Extension(*spec, parse_cocycles(*spec, c), options);
  }
};

json module_json(const extension::Extension& ext, const coeffs::ModuleVector& v) {
  return {{"value", coeffs::to_json(ext.codomain(), ext.spec().group(), v)}, {"provenance", "exact"}};
}

void run_extend(Context& ctx) {
  const json& s = ctx.section("extend");
  check_keys(s, "extend", {"elements", "antisymmetrize_inputs", "defect_radius"});
  extension::ExtensionOptions opt;
  opt.antisymmetrize_inputs = field(s, "antisymmetrize_inputs", false);
  const auto ext = ctx.extension(opt);
  json elements = s.contains("elements") ? s.at("elements") : json::array({"a b", "a b a^-1 b^-1", "b^2 a^-3"});
  if (!elements.is_array()) throw SchemaError("'elements' must be an array of words");
  ctx.results["certificate"] = ext.certificate().to_json();
  json values = json::array();
  for (const auto& e : elements) {
    const Element g = parse_element(*ctx.spec, e);
    values.push_back({{"g", ctx.spec->format(g)}, {"iota", module_json(ext, ext(g))}});
    ctx.results["values"] = values;
  }
  if (s.contains("defect_radius")) {
    const auto D = qc::defect(ext.as_quasi_cocycle(), field<std::size_t>(s, "defect_radius", 2));
    ctx.results["defect"] = D.to_json(ctx.spec->group());
    if (!D.at_most(ext.certificate().total())) ctx.fail("empirical defect exceeds the certificate");
  }
  ctx.conditional = ext.conditional();
}

void run_separating(Context& ctx) {
  const json& s = ctx.section("separating");
  check_keys(s, "separating", {"pairs", "subgroup", "geodesics"});
  geodesics::GeodesicEngine engine(*ctx.spec);
  separating::Separator sep(engine);
  json pairs = s.contains("pairs") ? s.at("pairs") : json::array({json::array({"1", "a b a^2"})});
  if (!pairs.is_array()) throw SchemaError("'pairs' must be an array of [f, g]");
  std::vector<SubgroupId> lambdas;
  if (s.contains("subgroup")) {
    auto l = ctx.spec->subgroup_by_name(field<std::string>(s, "subgroup", ""));
    if (!l) throw SchemaError("unknown subgroup in 'separating.subgroup'");
    lambdas.push_back(*l);
  } else {
    for (SubgroupId l = 0; l < ctx.spec->subgroup_count(); ++l) lambdas.push_back(l);
  }
  const bool with_geodesics = field(s, "geodesics", true);
  json out = json::array();
  for (const auto& p : pairs) {
    if (!p.is_array() || p.size() != 2) throw SchemaError("each pair must be [f, g]");
    const Element f = parse_element(*ctx.spec, p[0]), g = parse_element(*ctx.spec, p[1]);
    json row = {{"f", ctx.spec->format(f)}, {"g", ctx.spec->format(g)}, {"provenance", "exact"}};
    const auto geos = engine.geodesics(f, g);
    row["distance"] = geos.distance;
    if (with_geodesics) {
      json paths = json::array();
      for (const auto& path : geos.paths) paths.push_back(path.labels_json(*ctx.spec));
      row["geodesics"] = paths;
    }
    row["geodesics_exhaustive"] = geos.exhaustive;
    if (!geos.exhaustive) ctx.conditional = true;
    json per = json::object();
    for (SubgroupId l : lambdas) per[ctx.spec->subgroup_name(l)] = sep.to_json(f, g, l);
    row["separating"] = per;
    out.push_back(row);
    ctx.results["pairs"] = out;
  }
}

void run_defect(Context& ctx) {
  const json& s = ctx.section("defect");
  check_keys(s, "defect", {"ball_radius", "samples"});
  const auto radius = field<std::size_t>(s, "ball_radius", 3);
  const auto samples = field<std::size_t>(s, "samples", 0);
  const auto ext = ctx.extension();
  json inputs = json::array();
  for (SubgroupId l = 0; l < ctx.spec->subgroup_count(); ++l) {
    const auto& q = ext.input(l);
    const auto D = qc::defect(q, radius, samples, ctx.seed);
    json row = {{"subgroup", ctx.spec->subgroup_name(l)}, {"empirical", D.to_json(ctx.spec->group())}};
    row["bound"] = q.defect_bound() ? q.defect_bound()->to_json() : json();
    if (q.defect_bound() && !D.at_most(q.defect_bound()->value))
      ctx.fail("input on " + ctx.spec->subgroup_name(l) + " exceeds its defect bound");
    inputs.push_back(row);
  }
  ctx.results["inputs"] = inputs;
  const auto D = qc::defect(ext.as_quasi_cocycle(), radius, samples, ctx.seed);
  ctx.results["extension"] = {{"empirical", D.to_json(ctx.spec->group())}, {"certificate", ext.certificate().to_json()}};
  if (!ext.certificate().complete)
    ctx.fail("some input has no defect bound; no certificate");
  else if (!D.at_most(ext.certificate().total()))
    ctx.fail("empirical defect of the extension exceeds the certificate");
  ctx.conditional = ext.conditional();
}

void run_calibrate(Context& ctx) {
  json s = ctx.section("calibrate-c");
  if (!s.contains("seed")) s["seed"] = ctx.seed;
  const auto cfg = embedding::CalibrationConfig::from_json(s);
  geodesics::GeodesicEngine engine(*ctx.spec);
  const auto rep = embedding::calibrate_C(engine, cfg);
  ctx.results = rep.to_json(*ctx.spec);
  ctx.results["C_supplied"] = tagged(ctx.spec->C(), "exact");
  ctx.results["C_supplied_at_least_C_bar"] = !rep.infinite && ctx.spec->C() >= rep.C_bar;
}

void run_asnec(Context& ctx) {
  const json& s = ctx.section("as-nec-demo");
  check_keys(s, "as-nec-demo", {"n", "k_max", "defect_radius"});
  const auto rep = extension::asnec_demo(field<std::int64_t>(s, "n", 2), field<std::int64_t>(s, "k_max", 10),
                                         field<std::size_t>(s, "defect_radius", 3));
  ctx.results = rep.to_json();
  if (!rep.values_match) ctx.fail("naive extension values differ from the expected table");
  if (!rep.antisymmetrized_passes) ctx.fail("antisymmetrized rerun exceeds its certificate");
}

void run_scl(Context& ctx) {
  const json& s = ctx.section("scl-bound");
  check_keys(s, "scl-bound", {"subgroup", "h", "phi", "upper", "Y", "homogenize_check_powers"});
  const auto& spec = *ctx.spec;
  SubgroupId lambda = 0;
  if (s.contains("subgroup")) {
    auto l = spec.subgroup_by_name(field<std::string>(s, "subgroup", ""));
    if (!l) throw SchemaError("unknown subgroup in 'scl-bound.subgroup'");
    lambda = *l;
  }
  const auto& H = spec.subgroup(lambda);
  if (!s.contains("h") || !s.contains("phi")) throw SchemaError("scl-bound needs 'h' and 'phi'");
  const Element h = parse_element(spec, s.at("h"));
  const QuasiCocycle phi = qc::from_descriptor(H, s.at("phi"));
  scl::PipelineOptions opt;
  opt.homogenize_check_powers = field<std::int64_t>(s, "homogenize_check_powers", 3);
  if (s.contains("upper")) {
    if (!s.at("upper").is_array()) throw SchemaError("'upper' must be an array of {n, expression}");
    for (const auto& u : s.at("upper")) {
      check_keys(u, "scl-bound.upper[]", {"n", "expression"});
      try {
        opt.upper_expressions.emplace_back(field<std::int64_t>(u, "n", 1),
                                           scl::parse_commutators(spec.group(), field<std::string>(u, "expression", "")));
      } catch (const ParseError& e) {
        throw SchemaError(e.what());
      }
    }
  }
  if (s.contains("Y")) {
    if (!H.is_free()) throw SchemaError("'Y' needs a free subgroup");
    std::vector<groups::FreeWord> words;
    for (const auto& w : field<std::vector<std::string>>(s, "Y", {})) {
      try {
        words.push_back(groups::parse_word(H.intrinsic().alphabet(), w));
      } catch (const ParseError& e) {
        throw SchemaError(e.what());
      }
    }
    opt.Y = scl::nice_generating_set(H.intrinsic(), words);
  }
  const auto r = scl::undistortion_pipeline(spec, lambda, h, phi, opt);
  ctx.results = r.to_json(spec, h);
  ctx.conditional = r.conditional;
  if (!r.restriction_consistent) ctx.fail("the extension does not restrict to the adjusted quasimorphism");
  if (!r.bound.consistent()) ctx.fail("lower bound exceeds upper bound");
}

void run_distortion(Context& ctx) {
  const json& s = ctx.section("distortion");
  check_keys(s, "distortion", {"k"});
  std::vector<std::int64_t> ks = field<std::vector<std::int64_t>>(s, "k", {1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
  if (ks.empty()) throw SchemaError("'k' must be non-empty");
  for (auto k : ks)
    if (k < 1) throw SchemaError("each k must be at least 1");
  const auto rep = scl::free_dist_experiment(ks);
  ctx.results = rep.to_json();
  if (!rep.lower_strictly_increasing) ctx.fail("H-side lower bounds are not strictly increasing in k");
}

void run_verify(Context& ctx) {
  json s = ctx.section("verify");
  if (!s.contains("seed")) s["seed"] = ctx.seed;
  const auto cfg = verify::SuiteConfig::from_json(s);
  const auto ext = ctx.extension();
  const auto rep = verify::full_suite(ext, cfg);
  ctx.results = rep.to_json();
  ctx.results["certificate"] = ext.certificate().to_json();
  ctx.conditional = ext.conditional();
  for (const auto& c : rep.checks)
    if (!c.passed()) ctx.fail(c.name + ": " + std::to_string(c.violations) + " violations");
}

const std::map<std::string, std::function<void(Context&)>>& handlers() {
  static const std::map<std::string, std::function<void(Context&)>> h{
      {"extend", run_extend},     {"separating", run_separating}, {"defect", run_defect},
      {"calibrate-c", run_calibrate}, {"as-nec-demo", run_asnec},  {"scl-bound", run_scl},
      {"distortion", run_distortion}, {"verify", run_verify}};
  return h;
}

}  // namespace

json default_config(const std::string& subcommand) {
  if (!handlers().count(subcommand)) throw SchemaError("unknown subcommand '" + subcommand + "'");
  json c = {{"seed", 0}};
  if (subcommand == "as-nec-demo" || subcommand == "distortion") return c;
  if (subcommand == "scl-bound") {
    c["embedding"] = {{"family", "free_product"},
                      {"factors", {{{"kind", "free"}, {"generators", {"x", "y"}}}, {{"kind", "cyclic"}, {"generator", "t"}}}},
                      {"C", "1"}};
    c["scl-bound"] = {{"h", "[x,y]"},
                      {"phi", {{"kind", "brooks_homogenized"}, {"w", "[x,y]"}}},
                      {"upper", {{{"n", 1}, {"expression", "[x,y]"}}}}};
    return c;
  }
  c["embedding"] = default_embedding();
  if (subcommand == "extend" || subcommand == "defect" || subcommand == "verify") c["cocycles"] = default_cocycles();
  return c;
}

Outcome run(const std::string& subcommand, const json& config, std::optional<std::uint64_t> seed) {
  Outcome out;
  Context ctx;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    auto h = handlers().find(subcommand);
    if (h == handlers().end()) throw SchemaError("unknown subcommand '" + subcommand + "'");
    if (!config.is_object()) throw SchemaError("config must be a JSON object");
    for (const auto& [k, v] : config.items())
      if (!allowed_keys(subcommand).count(k)) throw SchemaError("unknown top-level field '" + k + "' for " + subcommand);
    ctx.config = config;
    ctx.seed = seed ? *seed : field<std::uint64_t>(config, "seed", 0);
    ctx.config["seed"] = ctx.seed;
    if (allowed_keys(subcommand).count("embedding")) {
      const json& e = config.contains("embedding") ? config.at("embedding") : default_config(subcommand).at("embedding");
      ctx.spec = EmbeddingSpec::from_json(e);
      ctx.config["embedding"] = ctx.spec->to_json();
    }
    h->second(ctx);
    out.exit_code = ctx.failed ? kAssertion : kOk;
  } catch (const SchemaError& e) {
    out.exit_code = kSchema;
    out.message = std::string("schema error: ") + e.what();
    return out;
  } catch (const ParseError& e) {
    out.exit_code = kSchema;
    out.message = std::string("schema error: ") + e.what();
    return out;
  } catch (const BudgetExhausted& e) {
    out.exit_code = kBudget;
    out.message = std::string("budget exhausted: ") + e.what();
  } catch (const CapExceeded& e) {
    out.exit_code = kBudget;
    out.message = std::string("budget exhausted: ") + e.what();
  } catch (const Error& e) {
    ctx.fail(e.what());
    out.exit_code = kAssertion;
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  out.report = {{"subcommand", subcommand},
                {"inputs", ctx.config},
                {"results", ctx.results},
                {"conditional", ctx.conditional},
                {"assertions", {{"passed", !ctx.failed}, {"failures", ctx.failures}}},
                {"partial", out.exit_code == kBudget},
                {"timings", {{"wall_seconds", seconds}, {"threads", thread_count()}}}};
  if (out.exit_code == kBudget) out.report["error"] = out.message;
  if (ctx.failed && out.message.empty()) out.message = "assertion failed: " + ctx.failures.front();
  return out;
}

std::string results_digest(const json& report) {
  json copy = report;
  copy.erase("timings");
  return copy.dump();
}

}  // namespace qcext::cli
