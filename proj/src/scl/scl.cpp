#include "qcext/scl.hpp"

#include <algorithm>
#include <cstdlib>

#include "qcext/errors.hpp"

namespace qcext::scl {

nlohmann::json Witnessed::to_json() const {
  return {{"value", qcext::to_string(value)}, {"provenance", provenance}, {"witness", witness}};
}

nlohmann::json SclBound::to_json() const {
  nlohmann::json j = {{"consistent", consistent()}};
  j["lower"] = lower ? lower->to_json() : nlohmann::json();
  j["upper"] = upper ? upper->to_json() : nlohmann::json();
  return j;
}

CommutatorExpression parse_commutators(const GroupContext& G, std::string_view text) {
  CommutatorExpression expr;
  expr.text = std::string(text);
  std::size_t i = 0;
  auto skip = [&] {
    while (i < text.size() && (std::isspace(static_cast<unsigned char>(text[i])) || text[i] == '*')) ++i;
  };
  skip();
  if (i < text.size() && text.substr(i) == "1") return expr;
  while (skip(), i < text.size()) {
    if (text[i] != '[') throw ParseError("expected '[' in commutator expression at offset " + std::to_string(i));
    int depth = 0;
    std::size_t comma = std::string_view::npos, close = std::string_view::npos;
    for (std::size_t j = i; j < text.size(); ++j) {
      const char c = text[j];
      if (c == '[' || c == '(') ++depth;
      if (c == ']' || c == ')') --depth;
      if (c == ',' && depth == 1 && comma == std::string_view::npos) comma = j;
      if (depth == 0) {
        close = j;
        break;
      }
    }
    if (close == std::string_view::npos || comma == std::string_view::npos)
      throw ParseError("unbalanced commutator in expression");
    expr.terms.emplace_back(G.parse(text.substr(i + 1, comma - i - 1)), G.parse(text.substr(comma + 1, close - comma - 1)));
    i = close + 1;
  }
  return expr;
}

std::size_t cl_upper(const GroupContext& G, const Element& g, const CommutatorExpression& expr) {
  Element product = G.identity();
  for (const auto& [u, v] : expr.terms) {
    const Element c = G.product(G.product(G.inverse(u), G.inverse(v)), G.product(u, v));
    product = G.product(product, c);
  }
  if (!(product == g)) throw CheckFailure("commutator expression '" + expr.text + "' does not reduce to " + G.format(g));
  return expr.terms.size();
}

std::optional<std::vector<std::int64_t>> abelianization(const GroupContext& G, const Element& g) {
  switch (G.kind()) {
    case GroupContext::Kind::FreeGroup:
      return groups::exponent_vector(std::get<FreeWord>(g), G.alphabet().size());
    case GroupContext::Kind::FreeProduct: {
      const auto& A = G.factor(groups::FactorId::A);
      const auto& B = G.factor(groups::FactorId::B);
      if (A.kind() != GroupContext::Kind::FreeGroup || B.kind() != GroupContext::Kind::FreeGroup) return std::nullopt;
      std::vector<std::int64_t> v(A.alphabet().size() + B.alphabet().size(), 0);
      for (const auto& s : std::get<groups::FreeProductElement>(g).syllables()) {
        const bool is_a = s.factor == groups::FactorId::A;
        const std::size_t offset = is_a ? 0 : A.alphabet().size();
        auto ev = groups::exponent_vector(std::get<FreeWord>(s.element), (is_a ? A : B).alphabet().size());
        for (std::size_t i = 0; i < ev.size(); ++i) v[offset + i] += ev[i];
      }
      return v;
    }
    default:
      return std::nullopt;
  }
}

namespace {

bool all_zero(const std::vector<std::int64_t>& v) {
  return std::all_of(v.begin(), v.end(), [](std::int64_t x) { return x == 0; });
}

}  // namespace

Witnessed scl_upper(const GroupContext& G, const Element& g,
                    const std::vector<std::pair<std::int64_t, CommutatorExpression>>& expressions) {
  if (auto ab = abelianization(G, g); ab && !all_zero(*ab))
    throw CheckFailure("no power of " + G.format(g) + " is a product of commutators");
  if (expressions.empty()) throw CheckFailure("scl upper bound needs at least one commutator expression");
  std::optional<Rational> best;
  nlohmann::json witness;
  for (const auto& [n, expr] : expressions) {
    if (n < 1) throw SchemaError("powers must be positive");
    const Rational r = ratio(static_cast<long>(cl_upper(G, G.power(g, n), expr)), static_cast<long>(n));
    if (!best || r < *best) {
      best = r;
      witness = {{"power", n}, {"expression", expr.text}, {"commutators", expr.terms.size()}};
    }
  }
  return {*best, "certified-upper-bound", witness};
}

Witnessed bavard_lower(const QuasiCocycle& phi, const Element& g) {
  if (!phi.codomain().is_trivial()) throw MixedContextError("Bavard duality needs a real-valued quasimorphism");
  if (!phi.flags().homogeneous) throw CheckFailure("Bavard duality needs a homogeneous quasimorphism");
  if (!phi.defect_bound()) throw CheckFailure("Bavard duality needs a certified defect upper bound");
  const qc::DefectBound& D = *phi.defect_bound();
  const Rational value = phi.value(g);
  Rational numerator = abs_value(value) - phi.value_error().value_or(0);
  if (numerator < 0) numerator = 0;
  nlohmann::json witness = {{"quasimorphism", phi.descriptor()}, {"phi(g)", qcext::to_string(value)}, {"defect_upper", D.to_json()}};
  if (phi.value_error()) witness["value_error"] = qcext::to_string(*phi.value_error());
  if (D.value == 0) {
    if (value != 0) throw CheckFailure("defect bound 0 with phi(g) != 0: inconsistent certificate");
    return {0, "exact", witness};
  }
  return {numerator / (2 * D.value), "exact", witness};
}

nlohmann::json NiceGeneratingSet::to_json(const groups::Alphabet& alphabet) const {
  nlohmann::json y1 = nlohmann::json::array(), y2 = nlohmann::json::array();
  for (const auto& w : Y1) y1.push_back(groups::format_word(alphabet, w));
  for (const auto& w : Y2) y2.push_back(groups::format_word(alphabet, w));
  return {{"Y1", y1}, {"Y2", y2}};
}

NiceGeneratingSet nice_generating_set(const GroupContext& free_group, const std::vector<FreeWord>& gens) {
  if (free_group.kind() != GroupContext::Kind::FreeGroup) throw MixedContextError("nice generating sets need a free group");
  const std::size_t rank = free_group.alphabet().size();
  struct Row {
    FreeWord word;
    std::vector<std::int64_t> vec;
    bool pivot = false;
  };
  std::vector<Row> rows;
  for (const FreeWord& g : gens)
    if (!g.is_identity()) rows.push_back({g, groups::exponent_vector(g, rank)});

  NiceGeneratingSet Y;
  for (std::size_t c = 0; c < rank; ++c) {
    while (true) {
      std::optional<std::size_t> p;
      std::size_t nonzero = 0;
      for (std::size_t j = 0; j < rows.size(); ++j) {
        if (rows[j].pivot || rows[j].vec[c] == 0) continue;
        ++nonzero;
        if (!p || std::llabs(rows[j].vec[c]) < std::llabs(rows[*p].vec[c])) p = j;
      }
      if (!p) break;
      if (nonzero == 1) {
        rows[*p].pivot = true;
        Y.Y1.push_back(rows[*p].word);
        break;
      }
      for (std::size_t j = 0; j < rows.size(); ++j) {
        if (j == *p || rows[j].pivot || rows[j].vec[c] == 0) continue;
        // Floor division keeps the remainder in [0, |pivot|).
        std::int64_t a = rows[j].vec[c], b = rows[*p].vec[c];
        std::int64_t q = a / b;
        if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
        rows[j].word = rows[*p].word.pow(-q) * rows[j].word;
        for (std::size_t k = 0; k < rank; ++k) rows[j].vec[k] -= q * rows[*p].vec[k];
      }
    }
  }
  for (const Row& r : rows)
    if (!r.pivot && !r.word.is_identity()) Y.Y2.push_back(r.word);
  return Y;
}

namespace {

// Reduced row echelon form over Q; returns the pivot column of each nonzero row.
std::vector<std::size_t> rref(std::vector<std::vector<Rational>>& m, std::size_t cols) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
    std::size_t p = r;
    while (p < m.size() && m[p][c] == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[r]);
    const Rational lead = m[r][c];
    for (auto& x : m[r]) x /= lead;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == r || m[i][c] == 0) continue;
      const Rational f = m[i][c];
      for (std::size_t k = 0; k < m[i].size(); ++k) m[i][k] -= f * m[r][k];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace

bool is_nice(const NiceGeneratingSet& Y, std::size_t rank) {
  for (const auto& w : Y.Y2)
    if (!all_zero(groups::exponent_vector(w, rank))) return false;
  std::vector<std::vector<Rational>> m;
  for (const auto& w : Y.Y1) {
    std::vector<Rational> row;
    for (auto e : groups::exponent_vector(w, rank)) row.emplace_back(static_cast<long>(e));
    m.push_back(row);
  }
  return rref(m, rank).size() == Y.Y1.size();
}

QuasiCocycle adjust_quasimorphism(const QuasiCocycle& phi, const NiceGeneratingSet& Y) {
  const groups::Subgroup& H = phi.domain();
  if (!H.is_free()) throw MixedContextError("adjustment needs a free subgroup");
  const std::size_t rank = H.intrinsic().alphabet().size();
  if (!is_nice(Y, rank)) throw CheckFailure("generating set is not nice");
  // Augmented system <c, xi(y)> = phi(y) for y in Y1.
  std::vector<std::vector<Rational>> m;
  for (const auto& y : Y.Y1) {
    std::vector<Rational> row;
    for (auto e : groups::exponent_vector(y, rank)) row.emplace_back(static_cast<long>(e));
    row.push_back(phi.value(H.from_intrinsic(y)));
    m.push_back(row);
  }
  const auto pivots = rref(m, rank);
  std::vector<Rational> c(rank, 0);
  for (std::size_t i = 0; i < pivots.size(); ++i) c[pivots[i]] = m[i][rank];
  QuasiCocycle beta = qc::homomorphism(H, c);
  QuasiCocycle adjusted = qc::linear_combination({{1, phi}, {-1, beta}});
  if (phi.defect_bound()) {
    qc::DefectBound d = *phi.defect_bound();
    d.note = "unchanged by subtracting a homomorphism: " + d.note;
    adjusted = adjusted.with_defect_bound(d);
  }
  qc::Flags flags = adjusted.flags();
  flags.homogeneous = phi.flags().homogeneous;
  return adjusted.with_flags(flags);
}

nlohmann::json PipelineConstants::to_json() const {
  nlohmann::json j = {{"L", {{"value", qcext::to_string(L)}, {"provenance", "empirical-lower-bound"}}},
                      {"K", K.to_json()},
                      {"D_phi", D_phi.to_json()}};
  j["M"] = M ? nlohmann::json{{"value", qcext::to_string(*M)}, {"provenance", "exact"}} : nlohmann::json();
  return j;
}

nlohmann::json PipelineResult::to_json(const embedding::EmbeddingSpec& spec, const Element& h) const {
  nlohmann::json j = {{"g", spec.format(h)},
                      {"phi(h)", {{"value", qcext::to_string(phi_h)}, {"provenance", "exact"}}},
                      {"constants", constants.to_json()},
                      {"chain", chain},
                      {"restriction_consistent", restriction_consistent},
                      {"conditional", conditional}};
  const nlohmann::json b = bound.to_json();
  j["lower"] = b["lower"];
  j["upper"] = b["upper"];
  j["consistent"] = b["consistent"];
  return j;
}

namespace {

nlohmann::json link(std::string statement, const Rational& value, std::string provenance) {
  return {{"statement", std::move(statement)}, {"value", qcext::to_string(value)}, {"provenance", std::move(provenance)}};
}

// max d_Y(1,h)/dhat(1,h) over the nontrivial elements of the 15C ball.
Rational lipschitz_constant(const embedding::EmbeddingSpec& spec, embedding::SubgroupId lambda,
                            const NiceGeneratingSet& Y) {
  Rational L = 1;
  const Rational bound = 15 * spec.C();
  if (bound <= 0) return L;
  mpz_class ceil_bound;
  mpz_cdiv_q(ceil_bound.get_mpz_t(), bound.get_num_mpz_t(), bound.get_den_mpz_t());
  const auto ball = embedding::check_local_finiteness(spec, lambda, ceil_bound.get_ui() - 1);
  const groups::Subgroup& H = spec.subgroup(lambda);
  std::vector<Element> gens;
  for (const auto& y : Y.Y1) gens.push_back(y);
  for (const auto& y : Y.Y2) gens.push_back(y);
  for (std::size_t i = 0; i < ball.elements.size(); ++i) {
    const Element target = H.to_intrinsic(ball.elements[i]);
    if (H.intrinsic().is_identity(target)) continue;
    std::optional<std::size_t> dY;
    const std::size_t cap = spec.budget().ball_radius_cap;
    for (std::size_t r = 1; r <= cap && !dY; ++r) {
      const auto B = groups::enumerate_ball(H.intrinsic(), gens, r, cap, spec.budget().max_ball_elements);
      if (std::find(B.begin(), B.end(), target) != B.end()) dY = r;
    }
    if (!dY) throw CapExceeded("word length in the nice generating set exceeds the ball radius cap");
    const Rational r = ratio(static_cast<long>(*dY), static_cast<long>(ball.distances[i].value()));
    if (r > L) L = r;
  }
  return L;
}

}  // namespace

PipelineResult undistortion_pipeline(const embedding::EmbeddingSpec& spec, embedding::SubgroupId lambda,
                                     const Element& h, const QuasiCocycle& phi, const PipelineOptions& options) {
  const groups::Subgroup& H = spec.subgroup(lambda);
  if (!H.is_free()) throw MixedContextError("the pipeline needs a free subgroup");
  if (!H.contains(h)) throw CheckFailure("h is not in subgroup " + H.name());
  const Element h_in = H.to_intrinsic(h);
  if (auto ab = abelianization(H.intrinsic(), h_in); !ab || !all_zero(*ab))
    throw CheckFailure("h is not in the commutator subgroup of " + H.name());
  if (!phi.flags().homogeneous || !phi.codomain().is_trivial())
    throw CheckFailure("the pipeline needs a homogeneous real quasimorphism");

  PipelineResult r;
  r.chain = nlohmann::json::array();
  if (!phi.defect_bound()) {
    r.conditional = true;
    r.constants.D_phi = {0, qc::Provenance::UserSupplied, "missing"};
    return r;
  }
  const qc::DefectBound D = *phi.defect_bound();
  r.constants.D_phi = D;

  std::vector<FreeWord> basis;
  for (std::size_t i = 0; i < H.intrinsic().alphabet().size(); ++i) basis.push_back(FreeWord::generator(i));
  const NiceGeneratingSet Y = options.Y ? *options.Y : nice_generating_set(H.intrinsic(), basis);
  r.constants.L = lipschitz_constant(spec, lambda, Y);
  const QuasiCocycle adjusted = adjust_quasimorphism(phi, Y);
  r.constants.K = extension::K_constant(spec, lambda, adjusted);
  const Rational& K = r.constants.K.value;
  r.phi_h = phi.value(h);

  if (!options.upper_expressions.empty())
    r.bound.upper = scl_upper(spec.group(), h, options.upper_expressions);

  if (spec.group().is_identity(h)) {
    r.bound.lower = Witnessed{0, "exact", {{"reason", "h is the identity"}}};
    if (!r.bound.upper) r.bound.upper = Witnessed{0, "exact", {{"reason", "h is the identity"}}};
    return r;
  }

  std::vector<std::optional<QuasiCocycle>> family(spec.subgroup_count());
  family[lambda] = adjusted;
  const extension::Extension ext = extension::extend(spec, family);
  const QuasiCocycle iota = ext.as_quasi_cocycle();
  for (std::int64_t n = 1; n <= options.homogenize_check_powers; ++n) {
    const Rational psi_n = qc::homogenize(iota, n).value(h);
    if (psi_n != r.phi_h) r.restriction_consistent = false;
  }
  r.conditional = ext.conditional();

  const Rational D_iota = 54 * K + 66 * D.value;
  const Rational D_psi = 2 * D_iota;
  const std::string kprov = r.constants.K.exact ? "exact" : "certified-upper-bound";
  r.chain.push_back(link("D(phi) <= D", D.value, "certified-upper-bound"));
  r.chain.push_back(link("D(phi') = D(phi)", D.value, "certified-upper-bound"));
  r.chain.push_back(link("K = max ||phi'(g)|| over dhat(1,g) < 15C", K, kprov));
  r.chain.push_back(link("D(iota(phi')) <= 54 K + 66 D(phi')", D_iota, "certified-upper-bound"));
  if (D.value > 0) {
    r.constants.M = 66 + 54 * K / D.value;
    r.chain.push_back(link("54 K + 66 D(phi') <= M D(phi)", *r.constants.M * D.value, "certified-upper-bound"));
  }
  r.chain.push_back(link("D(psi) <= 2 D(iota(phi'))", D_psi, "certified-upper-bound"));
  r.chain.push_back(link("psi(h) = phi'(h) = phi(h)", r.phi_h, "exact"));

  nlohmann::json witness = {{"quasimorphism", phi.descriptor()},
                            {"phi(h)", qcext::to_string(r.phi_h)},
                            {"defect_upper", D.to_json()},
                            {"nice_generating_set", Y.to_json(H.intrinsic().alphabet())}};
  if (D_psi == 0) {
    // psi is then a homomorphism of G and vanishes on h.
    r.bound.lower = Witnessed{0, "exact", witness};
  } else {
    const Rational lower = abs_value(r.phi_h) / (2 * D_psi);
    r.bound.lower = Witnessed{lower, "exact", witness};
    r.chain.push_back(link("scl_G(h) >= |psi(h)| / (2 D(psi))", lower, "exact"));
    if (r.constants.M)
      r.chain.push_back(link("|phi(h)| / (4 M D(phi))", abs_value(r.phi_h) / (4 * *r.constants.M * D.value), "exact"));
  }
  if (r.bound.upper) r.chain.push_back(link("scl_G(h) <= upper", r.bound.upper->value, "certified-upper-bound"));
  return r;
}

nlohmann::json FreeDistReport::to_json() const {
  nlohmann::json rows_json = nlohmann::json::array();
  for (const auto& r : rows)
    rows_json.push_back({{"k", r.k},
                         {"scl_G_upper", r.scl_G_upper.to_json()},
                         {"scl_H_lower", r.scl_H_lower.to_json()},
                         {"scl_H_reference", {{"value", qcext::to_string(r.scl_H_reference)}, {"provenance", "reference"}}},
                         {"ratio_lower", {{"value", qcext::to_string(r.ratio_lower)}, {"provenance", "exact"}}}});
  return {{"instance", "H = <x, y, x^t, y^t> in F(x,y,t), h_k = [x,y]^-k [x^t,y^t]^k"},
          {"rows", rows_json},
          {"lower_strictly_increasing", lower_strictly_increasing}};
}

FreeDistReport free_dist_experiment(const std::vector<std::int64_t>& k_list) {
  auto F = GroupContext::free_group(std::vector<std::string>{"x", "y", "t"});
  auto F4 = GroupContext::free_group(std::vector<std::string>{"a", "b", "c", "d"});
  const FreeWord x = FreeWord::generator(0), y = FreeWord::generator(1), t = FreeWord::generator(2);
  // a, b, c, d -> x, y, x^t, y^t
  const std::vector<FreeWord> images{x, y, groups::conjugate(x, t), groups::conjugate(y, t)};
  auto image = [&](const FreeWord& w) {
    FreeWord out;
    for (groups::Letter l : w.letters()) {
      const FreeWord& s = images[groups::generator_of(l)];
      out *= l > 0 ? s : s.inverse();
    }
    return out;
  };
  const groups::Subgroup H = groups::Subgroup::whole(F4);
  const FreeWord a = FreeWord::generator(0), b = FreeWord::generator(1), c = FreeWord::generator(2),
                 d = FreeWord::generator(3);
  const QuasiCocycle psi = qc::brooks_homogenized(H, groups::commutator(c, d));

  FreeDistReport report;
  for (std::int64_t k : k_list) {
    if (k < 1) throw SchemaError("k must be positive");
    const FreeWord hk = groups::commutator(a, b).pow(-k) * groups::commutator(c, d).pow(k);
    const FreeWord gk = image(hk);
    if (!(gk == groups::commutator(x, y).pow(-k) * groups::commutator(groups::conjugate(x, t), groups::conjugate(y, t)).pow(k)))
      throw CheckFailure("subgroup embedding mismatch");
    const auto expr = parse_commutators(*F, "[[x,y]^" + std::to_string(k) + ", t]");
    FreeDistRow row{k, scl_upper(*F, gk, {{1, expr}}), bavard_lower(psi, hk), Rational(2 * k + 1, 2), 0};
    row.ratio_lower = row.scl_H_lower.value / row.scl_G_upper.value;
    if (!report.rows.empty() && !(row.scl_H_lower.value > report.rows.back().scl_H_lower.value))
      report.lower_strictly_increasing = false;
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace qcext::scl
