#include "qcext/embedding.hpp"

#include <algorithm>

#include "embedding/tube_search.hpp"
#include "qcext/errors.hpp"

namespace qcext::embedding {

using groups::FactorId;
using groups::FreeProductElement;
using nlohmann::json;

namespace {

std::int64_t h_rank(std::int64_t n) { return 2 * (n < 0 ? -n : n) + (n < 0 ? 1 : 0); }

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw SchemaError(std::string("budget field '") + key + "': " + e.what());
  }
}

GroupContext::Ptr factor_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind")) throw SchemaError("factor must be an object with a 'kind'");
  const std::string kind = j.at("kind").get<std::string>();
  try {
    if (kind == "free") return GroupContext::free_group(j.at("generators").get<std::vector<std::string>>());
    if (kind == "cyclic") return GroupContext::free_group(std::vector<std::string>{j.at("generator").get<std::string>()});
    if (kind == "finite")
      return GroupContext::finite(groups::FiniteGroup(j.at("elements").get<std::vector<std::string>>(),
                                                      j.at("table").get<std::vector<std::vector<std::uint32_t>>>()));
    if (kind == "finite_cyclic")
      return GroupContext::finite(groups::FiniteGroup::cyclic(j.at("order").get<std::uint32_t>(),
                                                              j.at("generator").get<std::string>()));
  } catch (const json::exception& e) {
    throw SchemaError(std::string("factor: ") + e.what());
  } catch (const ParseError& e) {
    throw SchemaError(e.what());
  }
  throw SchemaError("unknown factor kind '" + kind + "'");
}

json factor_to_json(const GroupContext& fc) {
  if (fc.kind() == GroupContext::Kind::FreeGroup) {
    if (fc.alphabet().size() == 1) return {{"kind", "cyclic"}, {"generator", fc.alphabet().name(0)}};
    return {{"kind", "free"}, {"generators", fc.alphabet().names()}};
  }
  return {{"kind", "finite"}, {"elements", fc.table().names()}, {"table", fc.table().table()}};
}

std::vector<std::string> default_names(std::size_t rank) {
  static const char* small[] = {"x", "y", "z"};
  std::vector<std::string> names;
  for (std::size_t i = 0; i < rank; ++i) names.push_back(rank <= 3 ? small[i] : "g" + std::to_string(i + 1));
  return names;
}

}  // namespace

json Budget::to_json() const {
  return {{"geodesic_slack", geodesic_slack},       {"max_certify_slack", max_certify_slack},
          {"max_vertices", max_vertices},           {"max_geodesics", max_geodesics},
          {"ball_radius_cap", ball_radius_cap},     {"max_ball_elements", max_ball_elements},
          {"max_power", max_power},                 {"oracle_length_cap", oracle_length_cap}};
}

Budget Budget::from_json(const json& j) {
  if (!j.is_object()) throw SchemaError("budget must be an object");
  static const char* known[] = {"geodesic_slack",  "max_certify_slack", "max_vertices", "max_geodesics",
                                "ball_radius_cap", "max_ball_elements", "max_power",    "oracle_length_cap"};
  for (const auto& [k, v] : j.items())
    if (std::find(std::begin(known), std::end(known), k) == std::end(known))
      throw SchemaError("unknown budget field '" + k + "'");
  Budget b;
  b.geodesic_slack = get_or(j, "geodesic_slack", b.geodesic_slack);
  b.max_certify_slack = get_or(j, "max_certify_slack", b.max_certify_slack);
  b.max_vertices = get_or(j, "max_vertices", b.max_vertices);
  b.max_geodesics = get_or(j, "max_geodesics", b.max_geodesics);
  b.ball_radius_cap = get_or(j, "ball_radius_cap", b.ball_radius_cap);
  b.max_ball_elements = get_or(j, "max_ball_elements", b.max_ball_elements);
  b.max_power = get_or(j, "max_power", b.max_power);
  b.oracle_length_cap = get_or(j, "oracle_length_cap", b.oracle_length_cap);
  if (b.geodesic_slack < 1) throw SchemaError("geodesic_slack must be at least 1");
  if (b.max_certify_slack < b.geodesic_slack) b.max_certify_slack = b.geodesic_slack;
  return b;
}

bool letter_less(const AlphabetLetter& a, const AlphabetLetter& b) {
  if (a.index() != b.index()) return a.index() < b.index();
  if (auto xa = std::get_if<XLetter>(&a))
    return groups::letter_rank(xa->letter) < groups::letter_rank(std::get<XLetter>(b).letter);
  const auto& ha = std::get<HLetter>(a);
  const auto& hb = std::get<HLetter>(b);
  if (ha.lambda != hb.lambda) return ha.lambda < hb.lambda;
  if (ha.power != hb.power) return h_rank(ha.power) < h_rank(hb.power);
  return ha.element < hb.element;
}

std::uint64_t RelativeDistance::value() const {
  if (infinite_) throw CheckFailure("infinite relative distance has no finite value");
  return value_;
}

bool RelativeDistance::exceeds(const Rational& threshold) const {
  return infinite_ || Rational(static_cast<unsigned long>(value_)) > threshold;
}

std::string RelativeDistance::to_string() const { return infinite_ ? "inf" : std::to_string(value_); }

std::partial_ordering operator<=>(const RelativeDistance& a, const RelativeDistance& b) {
  if (a.infinite_ || b.infinite_) return a.infinite_ <=> b.infinite_;
  return a.value_ <=> b.value_;
}

RelativeDistance operator+(const RelativeDistance& a, const RelativeDistance& b) {
  if (a.is_infinite() || b.is_infinite()) return RelativeDistance::infinite();
  return RelativeDistance::finite(a.value() + b.value());
}

EmbeddingSpec EmbeddingSpec::free_product(GroupContext::Ptr product, Rational C, Budget budget) {
  if (product->kind() != GroupContext::Kind::FreeProduct) throw SchemaError("free_product family needs A * B");
  if (C < 0) throw SchemaError("C must be nonnegative");
  EmbeddingSpec s;
  s.family_ = Family::FreeProductPair;
  s.C_ = C;
  s.budget_ = budget;
  s.subgroups_.push_back(groups::Subgroup::factor(product, FactorId::A));
  s.subgroups_.push_back(groups::Subgroup::factor(product, FactorId::B));
  s.group_ = std::move(product);
  return s;
}

EmbeddingSpec EmbeddingSpec::free_rel_cyclic(GroupContext::Ptr free_group, FreeWord w, Rational C, Budget budget) {
  if (free_group->kind() != GroupContext::Kind::FreeGroup) throw SchemaError("free_rel_cyclic family needs F(S)");
  if (C < 0) throw SchemaError("C must be nonnegative");
  if (w.is_identity()) throw SchemaError("w must be nontrivial");
  if (!w.is_cyclically_reduced()) throw SchemaError("w must be cyclically reduced");
  if (groups::is_proper_power(w)) throw SchemaError("w must not be a proper power");
  EmbeddingSpec s;
  s.family_ = Family::FreeRelCyclic;
  s.C_ = C;
  s.budget_ = budget;
  s.w_ = w;
  s.subgroups_.push_back(groups::Subgroup::cyclic(free_group, std::move(w)));
  s.group_ = std::move(free_group);
  return s;
}

EmbeddingSpec EmbeddingSpec::from_json(const json& j) {
  if (!j.is_object()) throw SchemaError("embedding must be a JSON object");
  if (!j.contains("family") || !j.at("family").is_string()) throw SchemaError("embedding needs a 'family' string");
  const std::string family = j.at("family").get<std::string>();
  Rational C = 0;
  if (j.contains("C")) {
    if (!j.at("C").is_string()) throw SchemaError("'C' must be a rational string such as \"1\" or \"3/2\"");
    try {
      C = parse_rational(j.at("C").get<std::string>());
    } catch (const ParseError& e) {
      throw SchemaError(e.what());
    }
  }
  Budget budget = j.contains("budget") ? Budget::from_json(j.at("budget")) : Budget{};
  if (family == "free_product") {
    if (!j.contains("factors") || !j.at("factors").is_array() || j.at("factors").size() != 2)
      throw SchemaError("free_product needs exactly two 'factors'");
    auto g = GroupContext::free_product(factor_from_json(j.at("factors")[0]), factor_from_json(j.at("factors")[1]));
    return free_product(std::move(g), C, budget);
  }
  if (family == "free_rel_cyclic") {
    std::vector<std::string> names;
    if (j.contains("generators"))
      names = j.at("generators").get<std::vector<std::string>>();
    else if (j.contains("rank"))
      names = default_names(j.at("rank").get<std::size_t>());
    else
      throw SchemaError("free_rel_cyclic needs 'generators' or 'rank'");
    if (!j.contains("w") || !j.at("w").is_string()) throw SchemaError("free_rel_cyclic needs a word 'w'");
    GroupContext::Ptr f;
    FreeWord w;
    try {
      f = GroupContext::free_group(names);
      w = groups::parse_word(f->alphabet(), j.at("w").get<std::string>());
    } catch (const ParseError& e) {
      throw SchemaError(e.what());
    }
    return free_rel_cyclic(std::move(f), std::move(w), C, budget);
  }
  throw SchemaError("unknown embedding family '" + family + "'");
}

json EmbeddingSpec::to_json() const {
  json j;
  if (family_ == Family::FreeProductPair) {
    j["family"] = "free_product";
    j["factors"] = json::array({factor_to_json(group_->factor(FactorId::A)), factor_to_json(group_->factor(FactorId::B))});
  } else {
    j["family"] = "free_rel_cyclic";
    j["generators"] = group_->alphabet().names();
    j["w"] = groups::format_word(group_->alphabet(), w_);
  }
  j["C"] = qcext::to_string(C_);
  j["budget"] = budget_.to_json();
  return j;
}

EmbeddingSpec EmbeddingSpec::with_C(Rational c) const {
  if (c < 0) throw SchemaError("C must be nonnegative");
  EmbeddingSpec s = *this;
  s.C_ = std::move(c);
  return s;
}

const FreeWord& EmbeddingSpec::w() const {
  if (family_ != Family::FreeRelCyclic) throw MixedContextError("w is defined for the cyclic family only");
  return w_;
}

std::size_t EmbeddingSpec::rank() const {
  if (family_ != Family::FreeRelCyclic) throw MixedContextError("rank is defined for the cyclic family only");
  return group_->alphabet().size();
}

std::optional<SubgroupId> EmbeddingSpec::subgroup_by_name(std::string_view name) const {
  for (SubgroupId i = 0; i < subgroups_.size(); ++i)
    if (subgroups_[i].name() == name) return i;
  return std::nullopt;
}

Coset EmbeddingSpec::coset(SubgroupId lambda, const Element& x) const {
  if (lambda >= subgroups_.size()) throw MixedContextError("unknown subgroup index");
  if (family_ == Family::FreeProductPair) {
    const auto& p = std::get<FreeProductElement>(x);
    auto syl = p.syllables();
    std::vector<groups::Syllable> prefix(syl.begin(), syl.end());
    if (!prefix.empty() && static_cast<SubgroupId>(prefix.back().factor) == lambda) prefix.pop_back();
    return {lambda, group_->from_syllables(std::move(prefix))};
  }
  const FreeWord& start = std::get<FreeWord>(x);
  FreeWord best = start;
  for (int dir : {1, -1}) {
    const FreeWord step = w_.pow(dir);
    FreeWord cand = start;
    std::size_t prev = start.length();
    for (;;) {
      cand *= step;
      if (cand.length() > prev) break;
      prev = cand.length();
      if (groups::shortlex_compare(cand, best) < 0) best = cand;
    }
  }
  return {lambda, best};
}

bool EmbeddingSpec::coset_contains(const Coset& c, const Element& g) const { return coset(c.lambda, g) == c; }

Coset EmbeddingSpec::translate(const Element& h, const Coset& c) const {
  return coset(c.lambda, group_->product(h, c.rep));
}

Element EmbeddingSpec::letter_element(const AlphabetLetter& a) const {
  if (auto x = std::get_if<XLetter>(&a)) return FreeWord::reduce(std::span<const groups::Letter>(&x->letter, 1));
  return std::get<HLetter>(a).element;
}

std::string EmbeddingSpec::format_letter(const AlphabetLetter& a) const {
  if (auto x = std::get_if<XLetter>(&a)) {
    const std::string& name = group_->alphabet().name(groups::generator_of(x->letter));
    return "X:" + name + (x->letter < 0 ? "^-1" : "");
  }
  const auto& h = std::get<HLetter>(a);
  if (family_ == Family::FreeProductPair) {
    const auto& sub = subgroups_.at(h.lambda);
    return sub.name() + ":" + sub.intrinsic().format(sub.to_intrinsic(h.element));
  }
  if (w_.length() == 1) return "H:" + group_->format(h.element);
  std::string base = "(" + groups::format_word(group_->alphabet(), w_) + ")";
  return "H:" + base + (h.power == 1 ? "" : "^" + std::to_string(h.power));
}

std::string EmbeddingSpec::describe() const {
  if (family_ == Family::FreeProductPair) return "free product A * B, C = " + qcext::to_string(C_);
  return "F(" + std::to_string(rank()) + ") rel <" + groups::format_word(group_->alphabet(), w_) +
         ">, C = " + qcext::to_string(C_);
}

RelativeDistance relative_distance(const EmbeddingSpec& spec, SubgroupId lambda, const Element& h1, const Element& h2) {
  if (!spec.in_subgroup(lambda, h1) || !spec.in_subgroup(lambda, h2))
    throw MixedContextError("relative distance needs elements of H_" + spec.subgroup_name(lambda));
  if (h1 == h2) return RelativeDistance::finite(0);
  if (spec.family() == Family::FreeProductPair) return RelativeDistance::infinite();

  const FreeWord u = std::get<FreeWord>(h1).inverse() * std::get<FreeWord>(h2);
  const std::int64_t n = *spec.subgroup(lambda).cyclic_exponent(u);
  {
    std::lock_guard lock(spec.cache_->mutex);
    auto it = spec.cache_->dhat_power.find(n);
    if (it != spec.cache_->dhat_power.end()) return RelativeDistance::finite(it->second);
  }
  const Budget& b = spec.budget();
  std::optional<std::uint32_t> previous;
  for (std::size_t slack = b.geodesic_slack; slack <= b.max_certify_slack + 1; ++slack) {
    detail::TubeProblem problem;
    problem.u = u.letters();
    problem.w = spec.w().letters();
    problem.rank = spec.rank();
    problem.tau = slack * spec.w().length();
    problem.max_power = b.max_power;
    problem.forbid_internal_h = true;
    problem.record_predecessors = false;
    problem.max_vertices = b.max_vertices;
    std::uint32_t d = detail::TubeSearch(problem).distance();
    if (previous && *previous == d) {
      std::lock_guard lock(spec.cache_->mutex);
      spec.cache_->dhat_power.emplace(n, d);
      return RelativeDistance::finite(d);
    }
    previous = d;
  }
  throw BudgetExhausted("relative distance did not stabilise within the certification slack");
}

BallListing check_local_finiteness(const EmbeddingSpec& spec, SubgroupId lambda, std::uint64_t radius) {
  BallListing out;
  const Element one = spec.group().identity();
  out.elements.push_back(one);
  out.distances.push_back(RelativeDistance::finite(0));
  if (spec.family() == Family::FreeProductPair || radius == 0) return out;

  // Two distinct cosets of <w> have axes overlapping in fewer than 2|w| edges, so
  // every admissible edge covers at most P = 2|w|-1 edges of [1,w^n], and
  // dhat(1,w^n) >= |n||w|/P. Powers beyond radius*P/|w| are out of the ball.
  const std::uint64_t m = spec.w().length();
  const std::uint64_t P = std::max<std::uint64_t>(1, 2 * m - 1);
  const std::uint64_t n_max = radius * P / m + 1;
  if (n_max > static_cast<std::uint64_t>(spec.budget().max_power))
    throw CapExceeded("local finiteness not confirmed at this budget");
  std::vector<std::pair<std::uint64_t, FreeWord>> found;
  for (std::uint64_t k = 1; k <= n_max; ++k) {
    for (int sign : {1, -1}) {
      FreeWord h = spec.w().pow(sign * static_cast<std::int64_t>(k));
      RelativeDistance d = relative_distance(spec, lambda, one, h);
      if (!d.is_infinite() && d.value() <= radius) found.emplace_back(d.value(), h);
    }
  }
  std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return groups::shortlex_compare(a.second, b.second) < 0;
  });
  if (out.elements.size() + found.size() > spec.budget().max_ball_elements)
    throw CapExceeded("local finiteness not confirmed at this budget");
  for (auto& [d, h] : found) {
    out.elements.emplace_back(h);
    out.distances.push_back(RelativeDistance::finite(d));
  }
  return out;
}

}  // namespace qcext::embedding
