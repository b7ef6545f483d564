#include "qcext/verify.hpp"

#include <algorithm>
#include <set>

#include "qcext/errors.hpp"
#include "qcext/random.hpp"

namespace qcext::verify {

using coeffs::ModuleVector;
using embedding::Coset;
using embedding::EmbeddingSpec;
using embedding::SubgroupId;

void CheckResult::record(bool ok, const std::function<std::string()>& describe) {
  ++instances;
  if (ok) return;
  ++violations;
  if (failures.size() < 5) failures.push_back(describe());
}

nlohmann::json CheckResult::to_json() const {
  return {{"name", name},
          {"description", description},
          {"instances", instances},
          {"violations", violations},
          {"passed", passed()},
          {"failures", failures}};
}

CheckResult& SuiteReport::check(const std::string& name, const std::string& description) {
  for (auto& c : checks)
    if (c.name == name) return c;
  CheckResult c;
  c.name = name;
  c.description = description;
  checks.push_back(std::move(c));
  return checks.back();
}

const CheckResult* SuiteReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

bool SuiteReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed(); });
}

std::size_t SuiteReport::violations() const {
  std::size_t v = 0;
  for (const auto& c : checks) v += c.violations;
  return v;
}

void SuiteReport::merge(SuiteReport other) {
  for (auto& c : other.checks) checks.push_back(std::move(c));
}

nlohmann::json SuiteReport::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : checks) arr.push_back(c.to_json());
  return {{"checks", arr}, {"passed", passed()}, {"violations", violations()}};
}

SuiteConfig SuiteConfig::from_json(const nlohmann::json& j) {
  SuiteConfig c;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "ball_radius")
        c.ball_radius = value.get<std::size_t>();
      else if (key == "samples")
        c.samples = value.get<std::size_t>();
      else if (key == "sample_length")
        c.sample_length = value.get<std::size_t>();
      else if (key == "chain_max")
        c.chain_max = value.get<std::size_t>();
      else if (key == "defect_radius")
        c.defect_radius = value.get<std::size_t>();
      else if (key == "seed")
        c.seed = value.get<std::uint64_t>();
      else
        throw SchemaError("unknown verify field '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("verify config: ") + e.what());
  }
  if (c.chain_max < 2) throw SchemaError("chain_max must be at least 2");
  return c;
}

nlohmann::json SuiteConfig::to_json() const {
  return {{"ball_radius", ball_radius}, {"samples", samples},         {"sample_length", sample_length},
          {"chain_max", chain_max},     {"defect_radius", defect_radius}, {"seed", seed}};
}

std::vector<Triple> triple_domain(const EmbeddingSpec& spec, const SuiteConfig& config) {
  const auto& G = spec.group();
  const auto gens = G.generators();
  const auto ball = groups::enumerate_ball(G, gens, config.ball_radius);
  std::vector<Triple> out;
  out.reserve(ball.size() * ball.size() + config.samples);
  for (const auto& g : ball)
    for (const auto& h : ball) out.push_back({G.identity(), g, h});
  Rng rng(config.seed, "triples");
  for (std::size_t s = 0; s < config.samples; ++s) {
    Triple t;
    t.f = rng.random_word(G, gens, rng.below(config.sample_length + 1));
    t.g = rng.random_word(G, gens, rng.below(config.sample_length + 1));
    t.h = rng.random_word(G, gens, rng.below(config.sample_length + 1));
    out.push_back(std::move(t));
  }
  return out;
}

namespace {

std::string fmt(const EmbeddingSpec& spec, std::initializer_list<std::pair<const char*, Element>> items) {
  std::string s;
  for (const auto& [name, e] : items) {
    if (!s.empty()) s += ", ";
    s += std::string(name) + " = " + spec.format(e);
  }
  return s;
}

std::string fmt_coset(const EmbeddingSpec& spec, const Coset& c) {
  return spec.format(c.rep) + " " + spec.subgroup_name(c.lambda);
}

std::set<Coset> coset_set(const separating::SeparatingCosets& s) {
  std::set<Coset> out;
  for (const auto& c : s.cosets) out.insert(c.coset);
  return out;
}

bool penetrates(const EmbeddingSpec& spec, const geodesics::CayleyPath& path, const Coset& c) {
  for (const auto& comp : geodesics::components(path, c.lambda))
    if (spec.coset_contains(c, comp.entry)) return true;
  return false;
}

bool within_3C(const EmbeddingSpec& spec, SubgroupId lambda, const Element& a, const Element& b) {
  const auto& G = spec.group();
  return !embedding::relative_distance(spec, lambda, G.identity(), G.product(G.inverse(a), b)).exceeds(3 * spec.C());
}

}  // namespace

SuiteReport separating_suite(const separating::Separator& sep, const std::vector<Triple>& triples,
                             const SuiteConfig&) {
  const EmbeddingSpec& spec = sep.spec();
  const auto& engine = sep.engine();
  const auto& G = spec.group();
  SuiteReport rep;
  auto& card = rep.check("separating.cardinality", "|S(f,g)| <= d(f,g)");
  auto& sym = rep.check("separating.symmetry", "S(f,g) = S(g,f)");
  auto& equi = rep.check("separating.equivariance", "S(hf,hg) = h S(f,g)");
  auto& erev = rep.check("entrance_exit.reversal", "E(g,f;c) is E(f,g;c) with pairs swapped");
  auto& eequi = rep.check("entrance_exit.equivariance", "E(hf,hg;hc) = h E(f,g;c)");
  auto& every = rep.check("separating.every_geodesic_penetrates",
                          "every geodesic from f to g, and a two-geodesic path through h, meets each separating coset");
  auto& spread = rep.check("separating.entrance_spread", "entrance points pairwise within dhat <= 3C, exits likewise");
  auto& order = rep.check("separating.order", "geodesics meet separating cosets in order of distance from f");
  auto& entry = rep.check("separating.entry_distance", "the subpath up to the entrance point has length d(f, coset)");
  auto& tri = rep.check("triangle.partition", "S(f,g) splits as S' + S'' + F with |F| <= 2 and matching E sets");

  for (const Triple& t : triples) {
    const Element &f = t.f, &g = t.g, &h = t.h;
    for (SubgroupId lambda = 0; lambda < spec.subgroup_count(); ++lambda) {
      const auto S = sep.separating_cosets(f, g, lambda);
      const auto dist = engine.distance(f, g);
      card.record(S.cosets.size() <= dist, [&] { return fmt(spec, {{"f", f}, {"g", g}}); });
      sym.record(coset_set(S) == coset_set(sep.separating_cosets(g, f, lambda)),
                 [&] { return fmt(spec, {{"f", f}, {"g", g}}); });
      const auto Sh = sep.separating_cosets(G.product(h, f), G.product(h, g), lambda);
      bool same = Sh.cosets.size() == S.cosets.size();
      for (std::size_t i = 0; same && i < S.cosets.size(); ++i)
        same = Sh.cosets[i].coset == spec.translate(h, S.cosets[i].coset);
      equi.record(same, [&] { return fmt(spec, {{"f", f}, {"g", g}, {"h", h}}); });

      const bool nontrivial = !S.trivial;
      std::vector<geodesics::CayleyPath> paths;
      if (nontrivial && !S.cosets.empty()) {
        paths = engine.geodesics(f, g).paths;
        const auto via = engine.geodesics(f, h).paths.front().concat(spec, engine.geodesics(h, g).paths.front());
        paths.push_back(via);
      }
      for (const auto& sc : S.cosets) {
        const Coset& c = sc.coset;
        const auto E = sep.entrance_exit_set(f, g, c);
        auto Er = sep.entrance_exit_set(g, f, c).pairs;
        std::vector<separating::EntranceExit> swapped;
        for (const auto& [u, v] : E.pairs) swapped.emplace_back(v, u);
        std::sort(swapped.begin(), swapped.end());
        erev.record(swapped == Er, [&] { return fmt(spec, {{"f", f}, {"g", g}}) + ", coset " + fmt_coset(spec, c); });
        auto Eh = sep.entrance_exit_set(G.product(h, f), G.product(h, g), spec.translate(h, c)).pairs;
        std::vector<separating::EntranceExit> moved;
        for (const auto& [u, v] : E.pairs) moved.emplace_back(G.product(h, u), G.product(h, v));
        std::sort(moved.begin(), moved.end());
        eequi.record(moved == Eh, [&] { return fmt(spec, {{"f", f}, {"g", g}, {"h", h}}); });
        if (!nontrivial) continue;
        bool all = true;
        for (const auto& p : paths) all = all && penetrates(spec, p, c);
        every.record(all, [&] { return fmt(spec, {{"f", f}, {"g", g}, {"h", h}}) + ", coset " + fmt_coset(spec, c); });
        bool close = true;
        for (const auto& a : E.pairs)
          for (const auto& b : E.pairs)
            close = close && within_3C(spec, lambda, a.first, b.first) && within_3C(spec, lambda, a.second, b.second);
        spread.record(close, [&] { return fmt(spec, {{"f", f}, {"g", g}}) + ", coset " + fmt_coset(spec, c); });
      }
      if (nontrivial && !S.cosets.empty()) {
        bool increasing = true;
        for (std::size_t i = 1; i < S.cosets.size(); ++i) increasing = increasing && S.cosets[i - 1].distance < S.cosets[i].distance;
        bool ordered = increasing;
        bool distances = true;
        for (std::size_t k = 0; k + 1 < paths.size(); ++k) {  // the last path is the two-geodesic one
          std::optional<std::size_t> last;
          for (const auto& sc : S.cosets) {
            auto comp = geodesics::find_component_in(spec, paths[k], sc.coset);
            if (!comp) {
              ordered = false;
              continue;
            }
            if (last && comp->start <= *last) ordered = false;
            last = comp->start;
            distances = distances && comp->start == sc.distance && engine.distance_to_coset(f, sc.coset) == sc.distance;
          }
        }
        order.record(ordered, [&] { return fmt(spec, {{"f", f}, {"g", g}}); });
        entry.record(distances, [&] { return fmt(spec, {{"f", f}, {"g", g}}); });
      }

      try {
        const auto P = sep.triangle_partition(f, g, h, lambda);
        const auto Sfh = coset_set(sep.separating_cosets(f, h, lambda));
        const auto Shg = coset_set(sep.separating_cosets(h, g, lambda));
        bool ok = P.F.size() <= 2;
        std::multiset<Coset> all(P.s_prime.begin(), P.s_prime.end());
        all.insert(P.s_double_prime.begin(), P.s_double_prime.end());
        all.insert(P.F.begin(), P.F.end());
        const auto separating_cosets = coset_set(S);
        ok = ok && all.size() == separating_cosets.size() && std::set<Coset>(all.begin(), all.end()) == separating_cosets;
        for (const Coset& c : P.s_prime)
          ok = ok && Sfh.count(c) && !Shg.count(c) &&
               sep.entrance_exit_set(f, g, c).pairs == sep.entrance_exit_set(f, h, c).pairs;
        for (const Coset& c : P.s_double_prime)
          ok = ok && Shg.count(c) && !Sfh.count(c) &&
               sep.entrance_exit_set(f, g, c).pairs == sep.entrance_exit_set(h, g, c).pairs;
        tri.record(ok, [&] { return fmt(spec, {{"f", f}, {"g", g}, {"h", h}}); });
      } catch (const CheckFailure& e) {
        tri.record(false, [&] { return fmt(spec, {{"f", f}, {"g", g}, {"h", h}}) + ": " + e.what(); });
      }
    }
  }
  return rep;
}

SuiteReport bicombing_suite(const extension::Extension& ext, const std::vector<Triple>& triples,
                            const SuiteConfig& config) {
  const EmbeddingSpec& spec = ext.spec();
  const auto& G = spec.group();
  const auto& sep = ext.separator();
  const auto& V = ext.codomain();
  SuiteReport rep;
  auto& area = rep.check("bicombing.elementary_area", "||r(g0,g1) + r(g1,g2) + r(g2,g0)|| <= D(q) on one coset");
  auto& chain = rep.check("bicombing.chain_bound", "||r(g0,gn) - sum r(g(i-1),gi)|| <= (n-1) D(q) for n <= chain_max");
  auto& anti = rep.check("bicombing.antisymmetry", "r(f,g) = -r(g,f) for the elementary and combed bi-combings");
  auto& equi = rep.check("bicombing.equivariance", "r(hf,hg) = h r(f,g) for the elementary and combed bi-combings");
  auto& avanti = rep.check("average.antisymmetry", "R(f,g;c) = -R(g,f;c)");
  auto& avequi = rep.check("average.equivariance", "R(hf,hg;hc) = h R(f,g;c)");
  auto& avspread = rep.check("average.spread", "||r(u,v) - R(f,g;c)|| <= 2 D(q) + 2 K for (u,v) in E(f,g;c)");
  auto& combed = rep.check("bicombing.combed_area", "||r~(f,g) + r~(g,h) + r~(h,f)|| <= 66 D(q) + 54 K");

  Rng rng(config.seed, "bicombing");
  std::size_t index = 0;
  for (SubgroupId lambda = 0; lambda < spec.subgroup_count(); ++lambda) {
    const auto& q = ext.input(lambda);
    const auto& part = ext.certificate().parts.at(lambda);
    if (!part.D) {
      area.record(false, [] { return std::string("no certified defect bound"); });
      continue;
    }
    const Rational D = part.D->value, K = part.K.value;
    const auto r = ext.elementary(lambda);
    const auto& Hgens = spec.subgroup(lambda).generators();
    auto random_h = [&] { return rng.random_word(G, Hgens, 1 + rng.below(4)); };
    for (const Triple& t : triples) {
      const Element &f = t.f, &g = t.g, &h = t.h;
      // Elementary bi-combing on the coset f H.
      const Element g1 = G.product(f, random_h()), g2 = G.product(f, random_h());
      area.record(coeffs::norm_at_most(V, r(f, g1) + r(g1, g2) + r(g2, f), D),
                  [&] { return fmt(spec, {{"g0", f}, {"g1", g1}, {"g2", g2}}); });
      anti.record(r(f, g1) == -r(g1, f), [&] { return fmt(spec, {{"f", f}, {"g", g1}}); });
      equi.record(r(G.product(g, f), G.product(g, g1)) == coeffs::act(V, G, g, r(f, g1)),
                  [&] { return fmt(spec, {{"f", f}, {"g", g1}, {"h", g}}); });
      const std::size_t n = 2 + (index++ % (config.chain_max - 1));
      std::vector<Element> pts{f};
      for (std::size_t i = 0; i < n; ++i) pts.push_back(G.product(f, random_h()));
      ModuleVector sum;
      for (std::size_t i = 1; i <= n; ++i) sum += r(pts[i - 1], pts[i]);
      chain.record(coeffs::norm_at_most(V, r(pts.front(), pts.back()) - sum, Rational(static_cast<long>(n - 1)) * D),
                   [&] { return "chain of length " + std::to_string(n) + " from " + spec.format(f); });

      // Averaged values over the separating cosets of (f,g).
      const auto S = sep.separating_cosets(f, g, lambda);
      for (const auto& sc : S.cosets) {
        const Coset& c = sc.coset;
        const ModuleVector R = extension::averaged_value(sep, f, g, c, q);
        avanti.record(R == -extension::averaged_value(sep, g, f, c, q),
                      [&] { return fmt(spec, {{"f", f}, {"g", g}}) + ", coset " + fmt_coset(spec, c); });
        avequi.record(extension::averaged_value(sep, G.product(h, f), G.product(h, g), spec.translate(h, c), q) ==
                          coeffs::act(V, G, h, R),
                      [&] { return fmt(spec, {{"f", f}, {"g", g}, {"h", h}}); });
        for (const auto& [u, v] : sep.entrance_exit_set(f, g, c).pairs)
          avspread.record(coeffs::norm_at_most(V, r(u, v) - R, 2 * D + 2 * K),
                          [&] { return fmt(spec, {{"u", u}, {"v", v}}) + ", coset " + fmt_coset(spec, c); });
      }

      // Combed bi-combing.
      const ModuleVector fg = ext.combed_value(lambda, f, g);
      const ModuleVector gh = ext.combed_value(lambda, g, h);
      const ModuleVector hf = ext.combed_value(lambda, h, f);
      combed.record(coeffs::norm_at_most(V, fg + gh + hf, 66 * D + 54 * K),
                    [&] { return fmt(spec, {{"f", f}, {"g", g}, {"h", h}}); });
      anti.record(fg == -ext.combed_value(lambda, g, f), [&] { return fmt(spec, {{"f", f}, {"g", g}}); });
      equi.record(ext.combed_value(lambda, G.product(h, f), G.product(h, g)) == coeffs::act(V, G, h, fg),
                  [&] { return fmt(spec, {{"f", f}, {"g", g}, {"h", h}}); });
    }
  }
  return rep;
}

SuiteReport extension_suite(const extension::Extension& ext, const SuiteConfig& config) {
  const EmbeddingSpec& spec = ext.spec();
  const auto& G = spec.group();
  SuiteReport rep;
  auto& restr = rep.check("extension.restriction", "iota(q)(h) = q(h) for h in each subgroup");
  auto& cert = rep.check("extension.defect", "empirical defect of iota(q) over the word ball <= sum of 54 K + 66 D(q)");
  auto& exact = rep.check("extension.certified", "every geodesic set used was certified exhaustive");

  Rng rng(config.seed, "restriction");
  for (SubgroupId lambda = 0; lambda < spec.subgroup_count(); ++lambda) {
    const auto& H = spec.subgroup(lambda);
    const auto& q = ext.input(lambda);
    std::vector<Element> elements = groups::enumerate_ball(G, H.generators(), config.ball_radius + 1);
    for (std::size_t s = 0; s < config.samples / 10; ++s)
      elements.push_back(rng.random_word(G, H.generators(), 1 + rng.below(3 * config.sample_length)));
    for (const Element& h : elements)
      restr.record(ext(h) == q(h), [&] { return fmt(spec, {{"h", h}}); });
  }
  const auto D = qc::defect(ext.as_quasi_cocycle(), config.defect_radius);
  cert.instances += D.ball_size * D.ball_size - 1;
  cert.record(ext.certificate().complete && D.at_most(ext.certificate().total()), [&] {
    return "defect " + std::to_string(D.value) + " at " + fmt(spec, {{"f", D.f}, {"g", D.g}}) + " exceeds " +
           qcext::to_string(ext.certificate().total());
  });
  exact.record(!ext.conditional(), [] { return std::string("some geodesic set was not certified exhaustive"); });
  return rep;
}

SuiteReport full_suite(const extension::Extension& ext, const SuiteConfig& config) {
  const auto triples = triple_domain(ext.spec(), config);
  SuiteReport rep = separating_suite(ext.separator(), triples, config);
  rep.merge(bicombing_suite(ext, triples, config));
  rep.merge(extension_suite(ext, config));
  return rep;
}

}  // namespace qcext::verify
