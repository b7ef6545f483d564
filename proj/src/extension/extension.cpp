#include "qcext/extension.hpp"

#include <cmath>

#include "qcext/errors.hpp"

namespace qcext::extension {

using separating::Separator;

ModuleVector BiCombing::operator()(const Element& f, const Element& g) const {
  if (!defined(f, g)) throw CheckFailure("bi-combing evaluated outside its domain");
  return eval(f, g);
}

BiCombing elementary_bicombing(const EmbeddingSpec& spec, SubgroupId lambda, const QuasiCocycle& q) {
  const groups::GroupContext* G = &spec.group();
  const groups::Subgroup& H = spec.subgroup(lambda);
  BiCombing r;
  r.defined = [G, H](const Element& f, const Element& g) { return H.contains(G->product(G->inverse(f), g)); };
  r.eval = [G, q](const Element& f, const Element& g) {
    return coeffs::act(q.codomain(), *G, f, q(G->product(G->inverse(f), g)));
  };
  if (q.defect_bound()) {
    r.area_bound = q.defect_bound()->value;
    r.area_note = "area at most D(q)";
  }
  return r;
}

nlohmann::json KConstant::to_json() const {
  return {{"value", qcext::to_string(value)},
          {"provenance", exact ? "exact" : "certified-upper-bound"},
          {"radius", radius},
          {"ball_size", ball_size}};
}

KConstant K_constant(const EmbeddingSpec& spec, SubgroupId lambda, const QuasiCocycle& q) {
  KConstant K;
  K.value = 0;
  // dhat is integral, so dhat < 15C means dhat <= ceil(15C) - 1.
  const Rational bound = 15 * spec.C();
  if (bound <= 0) return K;
  mpz_class ceil_bound;
  mpz_cdiv_q(ceil_bound.get_mpz_t(), bound.get_num_mpz_t(), bound.get_den_mpz_t());
  K.radius = ceil_bound.get_ui() - 1;
  embedding::BallListing ball = embedding::check_local_finiteness(spec, lambda, K.radius);
  K.ball_size = ball.elements.size();
  for (const Element& h : ball.elements) {
    ModuleVector v = q(h);
    if (v.is_zero()) continue;
    const bool exact = q.codomain().is_trivial() || coeffs::norm_is_rational(q.codomain(), v);
    Rational n = coeffs::norm_upper(q.codomain(), v);
    if (n > K.value) {
      K.value = n;
      K.exact = exact;
    }
  }
  return K;
}

ModuleVector averaged_value(const Separator& sep, const Element& f, const Element& g, const Coset& coset,
                            const QuasiCocycle& q) {
  const auto S = sep.separating_cosets(f, g, coset.lambda);
  if (!S.contains(coset)) return {};
  const auto E = sep.entrance_exit_set(f, g, coset);
  const auto& G = sep.spec().group();
  ModuleVector sum;
  for (const auto& [u, v] : E.pairs) sum += coeffs::act(q.codomain(), G, u, q(G.product(G.inverse(u), v)));
  return sum.scaled(Rational(1, static_cast<long>(E.pairs.size())));
}

Rational Certificate::total() const {
  Rational t = 0;
  for (const auto& p : parts) t += p.contribution();
  return t;
}

qc::DefectBound Certificate::bound() const {
  std::string note = "sum over subgroups of 54 K + 66 D(q)";
  for (const auto& p : parts)
    if (p.D) note += "; D(q_" + std::to_string(p.lambda) + "): " + qc::to_string(p.D->provenance);
  return {total(), qc::Provenance::ExtensionCertificate, note};
}

nlohmann::json Certificate::to_json() const {
  nlohmann::json j = {{"bound", qcext::to_string(total())},
                      {"provenance", "certified-upper-bound"},
                      {"complete", complete},
                      {"parts", nlohmann::json::array()}};
  for (const auto& p : parts) {
    nlohmann::json part = {{"lambda", p.lambda}, {"K", p.K.to_json()}};
    part["D"] = p.D ? p.D->to_json() : nlohmann::json();
    j["parts"].push_back(part);
  }
  return j;
}

struct Extension::Impl {
  std::shared_ptr<const geodesics::GeodesicEngine> engine;
  std::unique_ptr<Separator> separator;
  std::vector<QuasiCocycle> family;
  ModuleSpec codomain = ModuleSpec::trivial_reals();
  Certificate certificate;
  mutable std::atomic<bool> conditional{false};
};

Extension::Extension(EmbeddingSpec spec, std::vector<std::optional<QuasiCocycle>> family, ExtensionOptions options)
    : impl_(std::make_shared<Impl>()) {
  if (family.size() > spec.subgroup_count()) throw SchemaError("more quasi-cocycles than subgroups");
  family.resize(spec.subgroup_count());
  std::optional<ModuleSpec> codomain;
  for (const auto& q : family)
    if (q) {
      if (codomain && !(*codomain == q->codomain())) throw MixedContextError("quasi-cocycles in different modules");
      codomain = q->codomain();
    }
  impl_->codomain = codomain.value_or(ModuleSpec::trivial_reals());
  for (SubgroupId lambda = 0; lambda < family.size(); ++lambda) {
    const groups::Subgroup& H = spec.subgroup(lambda);
    QuasiCocycle q = family[lambda] ? *family[lambda] : qc::zero(H, impl_->codomain);
    bool same = q.domain().ambient_ptr() == spec.group_ptr();
    for (const Element& h : H.generators()) same = same && q.domain().contains(h);
    for (const Element& h : q.domain().generators()) same = same && H.contains(h);
    if (!same) throw MixedContextError("quasi-cocycle domain does not match subgroup " + H.name());
    if (options.antisymmetrize_inputs) q = qc::antisymmetrize(q);
    if (options.require_antisymmetric && !q.flags().antisymmetric)
      throw CheckFailure("extension needs antisymmetric input on " + H.name() + "; antisymmetrize first");
    impl_->family.push_back(q);
  }
  impl_->engine = std::make_shared<const geodesics::GeodesicEngine>(std::move(spec));
  impl_->separator = std::make_unique<Separator>(*impl_->engine);
  for (SubgroupId lambda = 0; lambda < impl_->family.size(); ++lambda) {
    const QuasiCocycle& q = impl_->family[lambda];
    SubgroupCertificate part{lambda, K_constant(impl_->engine->spec(), lambda, q), q.defect_bound()};
    if (!part.D) impl_->certificate.complete = false;
    impl_->certificate.parts.push_back(std::move(part));
  }
}

const EmbeddingSpec& Extension::spec() const { return impl_->engine->spec(); }
const geodesics::GeodesicEngine& Extension::engine() const { return *impl_->engine; }
const Separator& Extension::separator() const { return *impl_->separator; }
const ModuleSpec& Extension::codomain() const { return impl_->codomain; }
const QuasiCocycle& Extension::input(SubgroupId lambda) const { return impl_->family.at(lambda); }
const Certificate& Extension::certificate() const { return impl_->certificate; }
bool Extension::conditional() const { return impl_->conditional.load(); }
std::vector<Element> Extension::shared_elements(SubgroupId) const { return {}; }

BiCombing Extension::elementary(SubgroupId lambda) const {
  return elementary_bicombing(spec(), lambda, input(lambda));
}

ModuleVector Extension::combed_value(SubgroupId lambda, const Element& f, const Element& g) const {
  const Separator& sep = *impl_->separator;
  const auto S = sep.separating_cosets(f, g, lambda);
  if (!S.exhaustive) impl_->conditional = true;
  const QuasiCocycle& q = input(lambda);
  const auto& G = spec().group();
  ModuleVector total;
  for (const auto& sc : S.cosets) {
    const auto E = sep.entrance_exit_set(f, g, sc.coset);
    ModuleVector sum;
    for (const auto& [u, v] : E.pairs) sum += coeffs::act(q.codomain(), G, u, q(G.product(G.inverse(u), v)));
    total += sum.scaled(Rational(1, static_cast<long>(E.pairs.size())));
  }
  return total;
}

BiCombing Extension::combed(SubgroupId lambda) const {
  Extension self = *this;
  BiCombing r;
  r.defined = [](const Element&, const Element&) { return true; };
  r.eval = [self, lambda](const Element& f, const Element& g) { return self.combed_value(lambda, f, g); };
  const auto& part = certificate().parts.at(lambda);
  if (part.D) {
    r.area_bound = part.contribution();
    r.area_note = "area at most 66 D(q) + 54 K";
  }
  return r;
}

ModuleVector Extension::operator()(const Element& g) const {
  const Element one = spec().group().identity();
  ModuleVector v;
  for (SubgroupId lambda = 0; lambda < impl_->family.size(); ++lambda) v += combed_value(lambda, one, g);
  return v;
}

QuasiCocycle Extension::as_quasi_cocycle() const {
  Extension self = *this;
  bool antisym = true;
  nlohmann::json inputs = nlohmann::json::array();
  for (const auto& q : impl_->family) {
    antisym = antisym && q.flags().antisymmetric;
    inputs.push_back(q.descriptor());
  }
  QuasiCocycle out(
      groups::Subgroup::whole(spec().group_ptr()), codomain(), [self](const Element& g) { return self(g); },
      qc::Flags{antisym, false, false}, {{"kind", "extension"}, {"inputs", inputs}});
  if (certificate().complete) out = out.with_defect_bound(certificate().bound());
  return out;
}

Extension extend(const EmbeddingSpec& spec, std::vector<std::optional<QuasiCocycle>> family) {
  return Extension(spec, std::move(family));
}

Extension extend_general(const EmbeddingSpec& spec, std::vector<std::optional<QuasiCocycle>> family) {
  ExtensionOptions o;
  o.antisymmetrize_inputs = true;
  return Extension(spec, std::move(family), o);
}

ModuleVector telescoping_sum(const EmbeddingSpec& spec, const std::vector<std::optional<QuasiCocycle>>& family,
                             const Element& g) {
  if (spec.family() != embedding::Family::FreeProductPair) throw MixedContextError("telescoping needs a free product");
  const auto& G = spec.group();
  const auto& p = std::get<groups::FreeProductElement>(g);
  Element prefix = G.identity();
  ModuleVector total;
  for (const auto& s : p.syllables()) {
    const Element syl = G.from_syllables({s});
    const auto lambda = static_cast<SubgroupId>(s.factor);
    if (lambda < family.size() && family[lambda]) {
      const QuasiCocycle& q = *family[lambda];
      total += coeffs::act(q.codomain(), G, prefix, q(syl));
    }
    prefix = G.product(prefix, syl);
  }
  return total;
}

nlohmann::json AsNecReport::to_json() const {
  nlohmann::json table = nlohmann::json::array();
  for (const auto& r : rows)
    table.push_back({{"k", r.k},
                     {"plus", qcext::to_string(r.plus)},
                     {"minus", qcext::to_string(r.minus)},
                     {"witness", qcext::to_string(abs_value(r.plus + r.minus))}});
  return {{"instance", "F(x,y) rel <x>, C = 0, step quasimorphism, no antisymmetrization"},
          {"n", n},
          {"rows", table},
          {"provenance", "exact"},
          {"values_match", values_match},
          {"antisymmetrized",
           {{"certificate", {{"value", qcext::to_string(antisymmetrized_certificate)}, {"provenance", "certified-upper-bound"}}},
            {"defect", antisymmetrized_defect.value},
            {"defect_provenance", "empirical-lower-bound"},
            {"ball_radius", defect_ball_radius},
            {"passes", antisymmetrized_passes}}}};
}

AsNecReport asnec_demo(std::int64_t n, std::int64_t k_max, std::size_t defect_radius) {
  if (n < 1) throw SchemaError("as-nec demo needs n >= 1");
  auto F = groups::GroupContext::free_group(std::vector<std::string>{"x", "y"});
  const groups::FreeWord x = groups::FreeWord::generator(0), y = groups::FreeWord::generator(1);
  EmbeddingSpec spec = EmbeddingSpec::free_rel_cyclic(F, x, 0);
  const QuasiCocycle q = qc::step(spec.subgroup(0));

  AsNecReport report;
  report.n = n;
  report.defect_ball_radius = defect_radius;
  ExtensionOptions naive;
  naive.require_antisymmetric = false;
  Extension ext(spec, {q}, naive);
  const groups::FreeWord g = y * x.pow(n);
  for (std::int64_t k = 1; k <= k_max; ++k) {
    AsNecRow row{k, ext(g.pow(k)).scalar_value(), ext(g.pow(-k)).scalar_value()};
    report.values_match = report.values_match && row.plus == Rational(static_cast<long>(k)) && row.minus == 0;
    report.rows.push_back(row);
  }

  Extension fixed = extend(spec, {qc::antisymmetrize(q)});
  report.antisymmetrized_certificate = fixed.certificate().total();
  report.antisymmetrized_defect = qc::defect(fixed.as_quasi_cocycle(), defect_radius);
  report.antisymmetrized_passes =
      fixed.certificate().complete && report.antisymmetrized_defect.at_most(report.antisymmetrized_certificate);
  return report;
}

}  // namespace qcext::extension
