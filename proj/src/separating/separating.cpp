#include "qcext/separating.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "qcext/errors.hpp"

namespace qcext::separating {

using embedding::Family;
using geodesics::CayleyPath;

bool SeparatingCosets::contains(const Coset& c) const {
  return std::any_of(cosets.begin(), cosets.end(), [&](const SeparatingCoset& s) { return s.coset == c; });
}

std::shared_ptr<const Separator::Local> Separator::local(const Element& u, SubgroupId lambda) const {
  if (lambda >= 2) throw MixedContextError("at most two subgroups are supported");
  {
    std::lock_guard lock(mutex_);
    auto it = cache_[lambda].find(u);
    if (it != cache_[lambda].end()) return it->second;
  }
  auto computed = compute(u, lambda);
  std::lock_guard lock(mutex_);
  return cache_[lambda].emplace(u, std::move(computed)).first->second;
}

std::shared_ptr<const Separator::Local> Separator::compute(const Element& u, SubgroupId lambda) const {
  const EmbeddingSpec& spec = engine_.spec();
  const auto& G = spec.group();
  const Element one = G.identity();
  auto out = std::make_shared<Local>();
  out->sep.lambda = lambda;
  if (G.is_identity(u)) return out;
  if (spec.in_subgroup(lambda, u)) {
    Coset c = spec.coset(lambda, one);
    out->sep.trivial = true;
    out->sep.cosets.push_back({c, 0});
    out->entrance_exit.push_back({c, {{one, u}}});
    return out;
  }

  auto geos = engine_.geodesics_from_identity(u);
  out->sep.exhaustive = geos->exhaustive;
  std::set<Coset> essential, penetrated;
  for (const CayleyPath& p : geos->paths) {
    for (const auto& comp : geodesics::components(p, lambda)) {
      Coset c = spec.coset(lambda, comp.entry);
      penetrated.insert(c);
      bool essential_here;
      if (spec.family() == Family::FreeProductPair) {
        essential_here = !(comp.entry == comp.exit);
      } else {
        Element step = G.product(G.inverse(comp.entry), comp.exit);
        essential_here = embedding::relative_distance(spec, lambda, one, step).exceeds(3 * spec.C());
      }
      if (essential_here) essential.insert(c);
    }
  }
  for (const Coset& c : penetrated)
    if (!essential.count(c)) out->sep.below_threshold.push_back(c);

  for (const Coset& c : essential) out->sep.cosets.push_back({c, engine_.distance_to_coset(one, c)});
  std::sort(out->sep.cosets.begin(), out->sep.cosets.end(), [](const SeparatingCoset& a, const SeparatingCoset& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    return a.coset < b.coset;
  });
  for (const SeparatingCoset& sc : out->sep.cosets) {
    std::set<EntranceExit> pairs;
    for (const CayleyPath& p : geos->paths) {
      auto comp = geodesics::find_component_in(spec, p, sc.coset);
      if (comp) pairs.emplace(comp->entry, comp->exit);
    }
    out->entrance_exit.push_back({sc.coset, std::vector<EntranceExit>(pairs.begin(), pairs.end())});
  }
  return out;
}

SeparatingCosets Separator::separating_cosets(const Element& f, const Element& g, SubgroupId lambda) const {
  const auto& G = spec().group();
  auto base = local(G.product(G.inverse(f), g), lambda);
  SeparatingCosets out = base->sep;
  for (auto& sc : out.cosets) sc.coset = spec().translate(f, sc.coset);
  for (auto& c : out.below_threshold) c = spec().translate(f, c);
  return out;
}

EntranceExitSet Separator::entrance_exit_set(const Element& f, const Element& g, const Coset& coset) const {
  const auto& G = spec().group();
  const Element f_inv = G.inverse(f);
  auto base = local(G.product(f_inv, g), coset.lambda);
  const Coset target = spec().translate(f_inv, coset);
  for (std::size_t i = 0; i < base->sep.cosets.size(); ++i) {
    if (!(base->sep.cosets[i].coset == target)) continue;
    EntranceExitSet out{coset, {}};
    for (const auto& [a, b] : base->entrance_exit[i].pairs) out.pairs.emplace_back(G.product(f, a), G.product(f, b));
    std::sort(out.pairs.begin(), out.pairs.end());
    return out;
  }
  throw CheckFailure("coset is not (f,g)-separating");
}

TrianglePartition Separator::triangle_partition(const Element& f, const Element& g, const Element& h,
                                                SubgroupId lambda) const {
  const SeparatingCosets s_fg = separating_cosets(f, g, lambda);
  const SeparatingCosets s_fh = separating_cosets(f, h, lambda);
  const SeparatingCosets s_hg = separating_cosets(h, g, lambda);
  const std::size_t n = s_fg.cosets.size();

  auto build = [&](std::size_t i) {
    // i is 1-based; i = 0 means the fixed geodesic from f to h meets no coset.
    TrianglePartition t;
    for (std::size_t j = 1; j <= n; ++j) {
      const Coset& c = s_fg.cosets[j - 1].coset;
      if (j < i)
        t.s_prime.push_back(c);
      else if (j > i + 1)
        t.s_double_prime.push_back(c);
      else
        t.F.push_back(c);
    }
    return t;
  };
  auto valid = [&](const TrianglePartition& t) {
    if (t.F.size() > 2) return false;
    for (const Coset& c : t.s_prime) {
      if (!s_fh.contains(c) || s_hg.contains(c)) return false;
      if (entrance_exit_set(f, g, c).pairs != entrance_exit_set(f, h, c).pairs) return false;
    }
    for (const Coset& c : t.s_double_prime) {
      if (!s_hg.contains(c) || s_fh.contains(c)) return false;
      if (entrance_exit_set(f, g, c).pairs != entrance_exit_set(h, g, c).pairs) return false;
    }
    return true;
  };

  if (n <= 2) {
    TrianglePartition t;
    for (const auto& sc : s_fg.cosets) t.F.push_back(sc.coset);
    return t;
  }
  const auto r_set = engine_.geodesics(f, h);
  const CayleyPath& r = r_set.paths.front();
  std::size_t i = 0;
  for (std::size_t j = 1; j <= n; ++j)
    if (geodesics::find_component_in(spec(), r, s_fg.cosets[j - 1].coset)) i = j;
  TrianglePartition t = build(i);
  if (valid(t)) return t;
  for (std::size_t k = 0; k <= n; ++k) {
    TrianglePartition alt = build(k);
    if (valid(alt)) {
      alt.split_from_proof = false;
      return alt;
    }
  }
  throw CheckFailure("triangle partition not found");
}

nlohmann::json Separator::to_json(const Element& f, const Element& g, SubgroupId lambda) const {
  const SeparatingCosets s = separating_cosets(f, g, lambda);
  nlohmann::json cosets = nlohmann::json::array();
  for (const auto& sc : s.cosets) {
    nlohmann::json pairs = nlohmann::json::array();
    for (const auto& [a, b] : entrance_exit_set(f, g, sc.coset).pairs)
      pairs.push_back({spec().format(a), spec().format(b)});
    cosets.push_back({{"lambda", spec().subgroup_name(lambda)},
                      {"rep", spec().format(sc.coset.rep)},
                      {"dist", sc.distance},
                      {"E", pairs}});
  }
  return {{"cosets", cosets}, {"trivial", s.trivial}, {"exhaustive", s.exhaustive}};
}

}  // namespace qcext::separating
