#include "qcext/qc.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <thread>
#include <unordered_map>

#include "qcext/errors.hpp"
#include "qcext/random.hpp"

namespace qcext::qc {

using groups::FreeWord;

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::ExtensionCertificate:
      return "extension-certificate";
    case Provenance::HomomorphismZero:
      return "homomorphism-zero";
    default:
      return "user-supplied";
  }
}

nlohmann::json DefectBound::to_json() const {
  nlohmann::json j = {{"value", qcext::to_string(value)}, {"provenance", "certified-upper-bound"}, {"source", qc::to_string(provenance)}};
  if (!note.empty()) j["note"] = note;
  return j;
}

struct QuasiCocycle::Memo {
  std::shared_mutex mutex;
  std::unordered_map<Element, ModuleVector, groups::ElementHash> values;
};

QuasiCocycle::QuasiCocycle(Subgroup domain, ModuleSpec codomain, Evaluator eval, Flags flags, nlohmann::json descriptor)
    : domain_(std::move(domain)),
      codomain_(std::move(codomain)),
      eval_(std::move(eval)),
      flags_(flags),
      descriptor_(std::move(descriptor)),
      memo_(std::make_shared<Memo>()) {}

QuasiCocycle QuasiCocycle::with_defect_bound(DefectBound b) const {
  QuasiCocycle q = *this;
  q.defect_bound_ = std::move(b);
  return q;
}

QuasiCocycle QuasiCocycle::with_flags(Flags f) const {
  QuasiCocycle q = *this;
  q.flags_ = f;
  return q;
}

QuasiCocycle QuasiCocycle::with_value_error(Rational e) const {
  QuasiCocycle q = *this;
  q.value_error_ = std::move(e);
  return q;
}

ModuleVector QuasiCocycle::operator()(const Element& g) const {
  {
    std::shared_lock lock(memo_->mutex);
    auto it = memo_->values.find(g);
    if (it != memo_->values.end()) return it->second;
  }
  if (!domain_.contains(g)) throw CheckFailure("quasi-cocycle evaluated outside its domain " + domain_.name());
  ModuleVector v = eval_(g);
  std::unique_lock lock(memo_->mutex);
  memo_->values.emplace(g, v);
  return v;
}

namespace {

// Comparable size of a vector: exact p-th power when available, else the float norm.
struct NormKey {
  bool exact = true;
  Rational pth;
  double approx = 0;

  static NormKey of(const ModuleSpec& spec, const ModuleVector& v) {
    NormKey k;
    k.approx = coeffs::norm(spec, v);
    k.exact = spec.is_trivial() || spec.p_is_integral();
    if (k.exact) k.pth = coeffs::norm_exact_pth_power(spec, v);
    return k;
  }
  bool greater(const NormKey& o) const { return exact ? pth > o.pth : approx > o.approx; }
};

struct Best {
  NormKey key;
  ModuleVector vec;
  std::size_t i = 0, j = 0;
  bool set = false;
};

void consider(Best& best, const ModuleSpec& spec, ModuleVector v, std::size_t i, std::size_t j) {
  NormKey k = NormKey::of(spec, v);
  if (!best.set || k.greater(best.key)) {
    best.key = std::move(k);
    best.vec = std::move(v);
    best.i = i;
    best.j = j;
    best.set = true;
  }
}

DefectEstimate finish(const QuasiCocycle& q, const Best& best, const std::vector<Element>& left,
                      const std::vector<Element>& right) {
  DefectEstimate e;
  e.spec = q.codomain();
  e.f = q.group().identity();
  e.g = q.group().identity();
  if (best.set) {
    e.value = best.key.approx;
    e.witness = best.vec;
    e.f = left[best.i];
    e.g = right[best.j];
  }
  return e;
}

// Maximum over pairs (left[i], right[pair_j(i)]) or all pairs; rows are split among workers.
Best scan_pairs(const QuasiCocycle& q, const std::vector<Element>& left, const std::vector<Element>& right,
                bool all_pairs) {
  const std::size_t workers = std::min<std::size_t>(thread_count(), std::max<std::size_t>(1, left.size() / 8));
  std::vector<Best> partial(workers);
  auto run = [&](std::size_t w) {
    for (std::size_t i = w; i < left.size(); i += workers) {
      if (all_pairs) {
        for (std::size_t j = 0; j < right.size(); ++j) consider(partial[w], q.codomain(), coboundary1(q, left[i], right[j]), i, j);
      } else {
        consider(partial[w], q.codomain(), coboundary1(q, left[i], right[i]), i, i);
      }
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> threads;
    for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(run, w);
    for (auto& t : threads) t.join();
  }
  Best best;
  for (const Best& b : partial) {
    if (!b.set) continue;
    // Deterministic reduction: larger value, then smaller index pair.
    if (!best.set || b.key.greater(best.key) ||
        (!best.key.greater(b.key) && std::pair(b.i, b.j) < std::pair(best.i, best.j)))
      best = b;
  }
  return best;
}

}  // namespace

bool DefectEstimate::at_most(const Rational& bound, double tolerance) const {
  return coeffs::norm_at_most(spec, witness, bound, tolerance);
}

nlohmann::json DefectEstimate::to_json(const GroupContext& G) const {
  return {{"value", value},
          {"provenance", "empirical-lower-bound"},
          {"witness", {{"f", G.format(f)}, {"g", G.format(g)}}},
          {"exhaustive_ball_radius", exhaustive_ball_radius},
          {"ball_size", ball_size},
          {"sampled_pairs", sampled_pairs}};
}

DefectEstimate defect_on(const QuasiCocycle& q, const std::vector<Element>& elements) {
  Best best = scan_pairs(q, elements, elements, true);
  DefectEstimate e = finish(q, best, elements, elements);
  e.ball_size = elements.size();
  return e;
}

DefectEstimate defect(const QuasiCocycle& q, std::size_t ball_radius, std::size_t extra_samples, std::uint64_t seed) {
  const GroupContext& G = q.group();
  const auto& gens = q.domain().generators();
  std::vector<Element> ball = groups::enumerate_ball(G, gens, ball_radius);
  DefectEstimate e = defect_on(q, ball);
  e.exhaustive_ball_radius = ball_radius;
  if (extra_samples > 0 && !gens.empty()) {
    Rng rng(seed, "defect-samples");
    std::vector<Element> left, right;
    for (std::size_t s = 0; s < extra_samples; ++s) {
      left.push_back(rng.random_word(G, gens, ball_radius + 1 + rng.below(ball_radius + 2)));
      right.push_back(rng.random_word(G, gens, ball_radius + 1 + rng.below(ball_radius + 2)));
    }
    Best best = scan_pairs(q, left, right, false);
    if (best.set && NormKey::of(q.codomain(), best.vec).greater(NormKey::of(q.codomain(), e.witness))) {
      e.value = best.key.approx;
      e.witness = best.vec;
      e.f = left[best.i];
      e.g = right[best.j];
    }
    e.sampled_pairs = extra_samples;
  }
  return e;
}

QuasiCocycle antisymmetrize(const QuasiCocycle& q) {
  if (q.flags().antisymmetric) return q;
  const GroupContext* G = &q.group();
  ModuleSpec spec = q.codomain();
  Flags flags = q.flags();
  flags.antisymmetric = true;
  QuasiCocycle out(
      q.domain(), spec,
      [q, G, spec](const Element& g) {
        ModuleVector v = q(g) - coeffs::act(spec, *G, g, q(G->inverse(g)));
        return v.scaled(Rational(1, 2));
      },
      flags, {{"kind", "antisymmetrize"}, {"of", q.descriptor()}});
  if (q.defect_bound()) {
    const DefectBound& d = *q.defect_bound();
    // alpha(q) - q is bounded by D(q), so D(alpha(q)) <= D(q) + 3 D(q).
    out = out.with_defect_bound({4 * d.value, d.provenance, "antisymmetrization: 4 x (" + d.note + ")"});
  }
  return out;
}

QuasiCocycle homogenize(const QuasiCocycle& phi, std::int64_t n_max) {
  if (n_max < 1) throw SchemaError("homogenize needs n_max >= 1");
  if (!phi.codomain().is_trivial()) throw MixedContextError("homogenization needs real values");
  if (phi.flags().homogeneous) return phi;
  const GroupContext* G = &phi.group();
  Flags flags;
  flags.homogeneous = true;
  flags.antisymmetric = true;
  QuasiCocycle out(
      phi.domain(), phi.codomain(),
      [phi, G, n_max](const Element& g) {
        return ModuleVector::scalar(phi.value(G->power(g, n_max)) / Rational(n_max));
      },
      flags, {{"kind", "homogenize"}, {"n_max", n_max}, {"of", phi.descriptor()}});
  if (phi.defect_bound()) {
    const DefectBound& d = *phi.defect_bound();
    out = out.with_defect_bound({2 * d.value, d.provenance, "homogenization: 2 x (" + d.note + ")"})
              .with_value_error(d.value / Rational(n_max));
  }
  return out;
}

std::size_t count_disjoint(const FreeWord& u, const FreeWord& w) {
  const std::size_t n = u.length(), m = w.length();
  if (m == 0) throw SchemaError("counting pattern must be nontrivial");
  std::size_t count = 0;
  for (std::size_t i = 0; i + m <= n;) {
    bool match = true;
    for (std::size_t k = 0; k < m && match; ++k) match = u[i + k] == w[k];
    if (match) {
      ++count;
      i += m;
    } else {
      ++i;
    }
  }
  return count;
}

Rational periodic_density(const FreeWord& u, const FreeWord& w) {
  const std::size_t L = u.length(), m = w.length();
  if (L == 0 || !u.is_cyclically_reduced()) throw CheckFailure("periodic density needs a cyclically reduced word");
  std::vector<bool> occ(L);
  for (std::size_t j = 0; j < L; ++j) {
    bool match = true;
    for (std::size_t k = 0; k < m && match; ++k) match = u[(j + k) % L] == w[k];
    occ[j] = match;
  }
  if (std::find(occ.begin(), occ.end(), true) == occ.end()) return 0;
  // Greedy scan on u^infinity; the state is the scan position mod L.
  std::map<std::size_t, std::pair<std::size_t, std::size_t>> seen;  // state -> (matches, advance)
  std::size_t state = 0, matches = 0, advance = 0;
  while (!seen.count(state)) {
    seen[state] = {matches, advance};
    std::size_t d = 0;
    while (!occ[(state + d) % L]) ++d;
    ++matches;
    advance += d + m;
    state = (state + d + m) % L;
  }
  const auto [m0, a0] = seen[state];
  return ratio(static_cast<long>((matches - m0) * L), static_cast<long>(advance - a0));
}

namespace {

const FreeWord& intrinsic_word(const Subgroup& H, const Element& g, Element& storage) {
  storage = H.to_intrinsic(g);
  auto w = std::get_if<FreeWord>(&storage);
  if (!w) throw MixedContextError("subgroup " + H.name() + " is not free");
  return *w;
}

void require_free(const Subgroup& H) {
  if (!H.is_free()) throw MixedContextError("subgroup " + H.name() + " is not free");
}

std::int64_t rank_one_exponent(const Subgroup& H, const Element& g) {
  Element storage;
  return groups::exponent_vector(intrinsic_word(H, g, storage), 1)[0];
}

void require_rank_one(const Subgroup& H) {
  require_free(H);
  if (H.intrinsic().alphabet().size() != 1) throw MixedContextError("subgroup " + H.name() + " is not cyclic");
}

FreeWord cyclic_core(const FreeWord& w) {
  std::size_t c = 0;
  while (2 * c + 1 < w.length() && w[c] == -w[w.length() - 1 - c]) ++c;
  return w.prefix(w.length() - c).suffix_from(c);
}

}  // namespace

QuasiCocycle brooks(const Subgroup& H, const FreeWord& w) {
  require_free(H);
  if (w.is_identity()) throw SchemaError("Brooks word must be nontrivial");
  const FreeWord winv = w.inverse();
  Flags flags;
  flags.antisymmetric = true;
  QuasiCocycle q(
      H, ModuleSpec::trivial_reals(),
      [H, w, winv](const Element& g) {
        Element storage;
        const FreeWord& u = intrinsic_word(H, g, storage);
        return ModuleVector::scalar(Rational(static_cast<long>(count_disjoint(u, w))) -
                                    Rational(static_cast<long>(count_disjoint(u, winv))));
      },
      flags, {{"kind", "brooks"}, {"w", groups::format_word(H.intrinsic().alphabet(), w)}});
  return q.with_defect_bound({3, Provenance::UserSupplied, "defect of a non-overlapping counting quasimorphism"});
}

QuasiCocycle brooks_homogenized(const Subgroup& H, const FreeWord& w) {
  require_free(H);
  if (w.is_identity()) throw SchemaError("Brooks word must be nontrivial");
  const FreeWord winv = w.inverse();
  Flags flags;
  flags.antisymmetric = true;
  flags.homogeneous = true;
  QuasiCocycle q(
      H, ModuleSpec::trivial_reals(),
      [H, w, winv](const Element& g) {
        Element storage;
        const FreeWord u = cyclic_core(intrinsic_word(H, g, storage));
        if (u.is_identity()) return ModuleVector();
        return ModuleVector::scalar(periodic_density(u, w) - periodic_density(u, winv));
      },
      flags, {{"kind", "brooks_homogenized"}, {"w", groups::format_word(H.intrinsic().alphabet(), w)}});
  return q.with_defect_bound(
      {6, Provenance::UserSupplied, "homogenization: 2 x (defect of a non-overlapping counting quasimorphism)"});
}

QuasiCocycle cyclic_homomorphism(const Subgroup& H) {
  require_rank_one(H);
  Flags flags{true, true, true};
  QuasiCocycle q(
      H, ModuleSpec::trivial_reals(),
      [H](const Element& g) { return ModuleVector::scalar(Rational(static_cast<long>(rank_one_exponent(H, g)))); },
      flags, {{"kind", "cyclic_hom"}});
  return q.with_defect_bound({0, Provenance::HomomorphismZero, "homomorphism"});
}

QuasiCocycle step(const Subgroup& H) {
  require_rank_one(H);
  QuasiCocycle q(
      H, ModuleSpec::trivial_reals(),
      [H](const Element& g) { return ModuleVector::scalar(rank_one_exponent(H, g) >= 0 ? 1 : 0); }, Flags{},
      {{"kind", "step"}});
  return q.with_defect_bound({1, Provenance::UserSupplied, "closed form |s(a+b)-s(a)-s(b)| <= 1"});
}

QuasiCocycle homomorphism(const Subgroup& H, std::vector<Rational> basis_values) {
  require_free(H);
  const std::size_t rank = H.intrinsic().alphabet().size();
  if (basis_values.size() != rank) throw SchemaError("homomorphism needs one value per basis element");
  Flags flags{true, true, true};
  nlohmann::json desc = {{"kind", "homomorphism"}, {"values", nlohmann::json::object()}};
  for (std::size_t i = 0; i < rank; ++i)
    desc["values"][H.intrinsic().alphabet().name(i)] = qcext::to_string(basis_values[i]);
  QuasiCocycle q(
      H, ModuleSpec::trivial_reals(),
      [H, basis_values, rank](const Element& g) {
        Element storage;
        auto ev = groups::exponent_vector(intrinsic_word(H, g, storage), rank);
        Rational v = 0;
        for (std::size_t i = 0; i < rank; ++i) v += basis_values[i] * Rational(static_cast<long>(ev[i]));
        return ModuleVector::scalar(v);
      },
      flags, desc);
  return q.with_defect_bound({0, Provenance::HomomorphismZero, "homomorphism"});
}

QuasiCocycle zero(const Subgroup& H, ModuleSpec codomain) {
  QuasiCocycle q(
      H, std::move(codomain), [](const Element&) { return ModuleVector(); }, Flags{true, true, true},
      {{"kind", "zero"}});
  return q.with_defect_bound({0, Provenance::HomomorphismZero, "zero map"});
}

QuasiCocycle tree_edge_cocycle(const Subgroup& H, Rational p) {
  require_free(H);
  std::vector<std::string> tags;
  for (const auto& name : H.intrinsic().alphabet().names()) tags.push_back("e_" + name);
  ModuleSpec spec = ModuleSpec::indexed_lp(p, std::move(tags));
  Flags flags{true, false, true};
  QuasiCocycle q(
      H, spec,
      [H](const Element& g) {
        Element storage;
        const FreeWord& h = intrinsic_word(H, g, storage);
        ModuleVector out;
        FreeWord v;
        for (groups::Letter l : h.letters()) {
          const auto s = static_cast<std::uint32_t>(groups::generator_of(l));
          if (l > 0) {
            out += ModuleVector::basis(H.from_intrinsic(v), s, 1);
            v *= FreeWord::reduce(std::span<const groups::Letter>(&l, 1));
          } else {
            v *= FreeWord::reduce(std::span<const groups::Letter>(&l, 1));
            out += ModuleVector::basis(H.from_intrinsic(v), s, -1);
          }
        }
        return out;
      },
      flags, {{"kind", "tree_edge"}, {"p", qcext::to_string(p)}});
  return q.with_defect_bound({0, Provenance::HomomorphismZero, "exact cocycle"});
}

QuasiCocycle linear_combination(const std::vector<std::pair<Rational, QuasiCocycle>>& terms) {
  if (terms.empty()) throw SchemaError("empty linear combination");
  const QuasiCocycle& first = terms.front().second;
  Flags flags{true, true, true};
  Rational bound = 0;
  bool have_bound = true;
  Provenance prov = Provenance::HomomorphismZero;
  nlohmann::json desc = {{"kind", "linear_combination"}, {"terms", nlohmann::json::array()}};
  for (const auto& [c, q] : terms) {
    if (!(q.codomain() == first.codomain())) throw MixedContextError("linear combination across modules");
    flags.antisymmetric = flags.antisymmetric && q.flags().antisymmetric;
    flags.homogeneous = flags.homogeneous && q.flags().homogeneous;
    flags.exact_cocycle = flags.exact_cocycle && q.flags().exact_cocycle;
    desc["terms"].push_back({{"coef", qcext::to_string(c)}, {"q", q.descriptor()}});
    if (!q.defect_bound()) {
      have_bound = false;
      continue;
    }
    bound += abs_value(c) * q.defect_bound()->value;
    prov = std::max(prov, q.defect_bound()->provenance, [](Provenance a, Provenance b) {
      auto rank = [](Provenance p) { return p == Provenance::HomomorphismZero ? 0 : p == Provenance::ExtensionCertificate ? 1 : 2; };
      return rank(a) < rank(b);
    });
  }
  QuasiCocycle out(
      first.domain(), first.codomain(),
      [terms](const Element& g) {
        ModuleVector v;
        for (const auto& [c, q] : terms) v += q(g).scaled(c);
        return v;
      },
      flags, desc);
  if (have_bound) out = out.with_defect_bound({bound, prov, "sum of |coefficient| x defect bounds"});
  return out;
}

ModuleVector coboundary1(const QuasiCocycle& q, const Element& g1, const Element& g2) {
  const GroupContext& G = q.group();
  ModuleVector v = coeffs::act(q.codomain(), G, g1, q(g2));
  v -= q(G.product(g1, g2));
  v += q(g1);
  return v;
}

ModuleVector coboundary2(const ModuleSpec& spec, const GroupContext& G, const Cochain2& c, const Element& g1,
                         const Element& g2, const Element& g3) {
  ModuleVector v = coeffs::act(spec, G, g1, c(g2, g3));
  v -= c(G.product(g1, g2), g3);
  v += c(g1, G.product(g2, g3));
  v -= c(g1, g2);
  return v;
}

QuasiCocycle from_descriptor(const Subgroup& H, const nlohmann::json& d) {
  if (!d.is_object() || !d.contains("kind")) throw SchemaError("quasi-cocycle descriptor needs a 'kind'");
  try {
    const std::string kind = d.at("kind").get<std::string>();
    auto word = [&](const char* key) {
      Element e = H.intrinsic().parse(d.at(key).get<std::string>());
      auto w = std::get_if<FreeWord>(&e);
      if (!w) throw SchemaError(std::string("'") + key + "' must be a word in a free subgroup");
      return *w;
    };
    std::optional<QuasiCocycle> q;
    if (kind == "brooks") {
      q = brooks(H, word("w"));
    } else if (kind == "brooks_homogenized") {
      q = brooks_homogenized(H, word("w"));
    } else if (kind == "cyclic_hom") {
      if (d.contains("w") && H.kind() == Subgroup::Kind::Whole)
        q = cyclic_homomorphism(Subgroup::cyclic(H.ambient_ptr(), word("w")));
      else
        q = cyclic_homomorphism(H);
    } else if (kind == "step") {
      q = step(H);
    } else if (kind == "tree_edge") {
      q = tree_edge_cocycle(H, parse_rational(d.value("p", std::string("2"))));
    } else if (kind == "homomorphism") {
      std::vector<Rational> values;
      for (const auto& name : H.intrinsic().alphabet().names()) {
        const auto& vals = d.at("values");
        values.push_back(vals.contains(name) ? parse_rational(vals.at(name).get<std::string>()) : Rational(0));
      }
      q = homomorphism(H, std::move(values));
    } else if (kind == "zero") {
      q = zero(H, d.contains("module") ? ModuleSpec::from_json(d.at("module")) : ModuleSpec::trivial_reals());
    } else {
      throw SchemaError("unknown quasi-cocycle kind '" + kind + "'");
    }
    if (d.contains("scale")) q = linear_combination({{parse_rational(d.at("scale").get<std::string>()), *q}});
    if (d.value("antisymmetrize", false)) q = antisymmetrize(*q);
    if (d.contains("homogenize")) q = homogenize(*q, d.at("homogenize").get<std::int64_t>());
    return *q;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("quasi-cocycle descriptor: ") + e.what());
  } catch (const ParseError& e) {
    throw SchemaError(std::string("quasi-cocycle descriptor: ") + e.what());
  }
}

}  // namespace qcext::qc
