#include "qcext/geodesics.hpp"

#include <algorithm>
#include <deque>

#include "embedding/tube_search.hpp"
#include "qcext/errors.hpp"

namespace qcext::geodesics {

using embedding::Family;
using groups::FreeProductElement;

CayleyPath::CayleyPath(const EmbeddingSpec& spec, Element origin, std::vector<AlphabetLetter> edges)
    : edges_(std::move(edges)) {
  vertices_.reserve(edges_.size() + 1);
  vertices_.push_back(std::move(origin));
  for (const AlphabetLetter& a : edges_) vertices_.push_back(spec.group().product(vertices_.back(), spec.letter_element(a)));
}

CayleyPath CayleyPath::translated(const EmbeddingSpec& spec, const Element& h) const {
  return CayleyPath(spec, spec.group().product(h, origin()), edges_);
}

CayleyPath CayleyPath::reversed(const EmbeddingSpec& spec) const {
  std::vector<AlphabetLetter> rev;
  rev.reserve(edges_.size());
  for (auto it = edges_.rbegin(); it != edges_.rend(); ++it) {
    if (auto x = std::get_if<XLetter>(&*it)) {
      rev.push_back(XLetter{-x->letter});
    } else {
      const auto& h = std::get<HLetter>(*it);
      rev.push_back(HLetter{h.lambda, spec.group().inverse(h.element), -h.power});
    }
  }
  return CayleyPath(spec, end(), std::move(rev));
}

CayleyPath CayleyPath::concat(const EmbeddingSpec& spec, const CayleyPath& next) const {
  if (!(end() == next.origin())) throw CheckFailure("cannot concatenate paths with mismatched endpoints");
  std::vector<AlphabetLetter> all = edges_;
  all.insert(all.end(), next.edges_.begin(), next.edges_.end());
  return CayleyPath(spec, origin(), std::move(all));
}

nlohmann::json CayleyPath::labels_json(const EmbeddingSpec& spec) const {
  auto j = nlohmann::json::array();
  for (const AlphabetLetter& a : edges_) j.push_back(spec.format_letter(a));
  return j;
}

std::vector<PathComponent> components(const CayleyPath& path, SubgroupId lambda) {
  std::vector<PathComponent> out;
  const auto& edges = path.edges();
  std::size_t i = 0;
  while (i < edges.size()) {
    auto h = std::get_if<HLetter>(&edges[i]);
    if (!h || h->lambda != lambda) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < edges.size()) {
      auto hj = std::get_if<HLetter>(&edges[j]);
      if (!hj || hj->lambda != lambda) break;
      ++j;
    }
    out.push_back({lambda, i, j, path.vertices()[i], path.vertices()[j]});
    i = j;
  }
  return out;
}

std::vector<PathComponent> loop_components(const CayleyPath& loop, SubgroupId lambda) {
  auto out = components(loop, lambda);
  if (out.size() >= 2 && out.front().start == 0 && out.back().end == loop.length() && loop.origin() == loop.end()) {
    PathComponent merged{lambda, out.back().start, out.front().end, out.back().entry, out.front().exit};
    out.erase(out.begin());
    out.back() = merged;
  }
  return out;
}

BruteForceOracle::BruteForceOracle(const EmbeddingSpec& spec, OracleCaps caps) : caps_(caps) {
  if (spec.family() != Family::FreeRelCyclic) throw MixedContextError("the brute-force oracle serves the cyclic family");
  const FreeWord& w = spec.w();
  const std::size_t rank = spec.rank();
  std::vector<FreeWord> steps;
  for (std::size_t g = 0; g < rank; ++g) {
    steps.push_back(FreeWord::generator(g, 1));
    steps.push_back(FreeWord::generator(g, -1));
  }
  const FreeWord w_inv = w.inverse();
  std::deque<FreeWord> queue;
  dist_.emplace(FreeWord{}, 0);
  queue.push_back(FreeWord{});
  auto reject = [&](std::uint32_t layer) { first_cap_layer_ = std::min(first_cap_layer_, layer); };
  while (!queue.empty()) {
    FreeWord v = std::move(queue.front());
    queue.pop_front();
    const std::uint32_t d = dist_.at(v);
    auto visit = [&](FreeWord&& next) {
      if (dist_.emplace(next, d + 1).second) queue.push_back(std::move(next));
    };
    for (const FreeWord& s : steps) {
      FreeWord next = v * s;
      if (next.length() > caps_.max_S_length)
        reject(d);
      else
        visit(std::move(next));
    }
    for (const FreeWord* step : {&w, &w_inv}) {
      FreeWord cur = v;
      std::size_t prev = v.length();
      std::int64_t n = 1;
      for (; n <= caps_.max_power; ++n) {
        cur *= *step;
        if (cur.length() > caps_.max_S_length) {
          reject(d);
          if (cur.length() > prev) break;  // lengths along a coset are convex in n
        } else {
          visit(FreeWord(cur));
        }
        prev = cur.length();
      }
      if (n > caps_.max_power && (cur * *step).length() <= caps_.max_S_length) reject(d);
    }
  }
}

OracleAnswer BruteForceOracle::distance(const Element& f, const Element& g) const {
  FreeWord u = std::get<FreeWord>(f).inverse() * std::get<FreeWord>(g);
  auto it = dist_.find(u);
  if (it == dist_.end()) return {std::nullopt, true};
  bool touched = first_cap_layer_ != UINT32_MAX && it->second > first_cap_layer_ + 2;
  return {it->second, touched};
}

OracleAnswer brute_force_distance_oracle(const EmbeddingSpec& spec, const Element& f, const Element& g, OracleCaps caps) {
  return BruteForceOracle(spec, caps).distance(f, g);
}

GeodesicEngine::GeodesicEngine(EmbeddingSpec spec) : spec_(std::move(spec)) {}

void GeodesicEngine::set_oracle(std::shared_ptr<const BruteForceOracle> oracle) {
  std::lock_guard lock(mutex_);
  oracle_ = std::move(oracle);
  oracle_built_ = true;
}

std::shared_ptr<const BruteForceOracle> GeodesicEngine::oracle() const {
  std::lock_guard lock(mutex_);
  if (!oracle_built_) {
    oracle_built_ = true;
    const std::size_t cap = spec_.budget().oracle_length_cap;
    if (cap > 0 && spec_.family() == Family::FreeRelCyclic)
      oracle_ = std::make_shared<BruteForceOracle>(spec_, OracleCaps{cap, static_cast<std::int64_t>(cap)});
  }
  return oracle_;
}

namespace {

std::vector<AlphabetLetter> to_letters(const EmbeddingSpec& spec, const std::vector<embedding::detail::EdgeLabel>& labels) {
  std::vector<AlphabetLetter> out;
  out.reserve(labels.size());
  for (const auto& l : labels) {
    if (l.is_h)
      out.push_back(HLetter{0, spec.w().pow(l.value), l.value});
    else
      out.push_back(XLetter{static_cast<groups::Letter>(l.value)});
  }
  return out;
}

embedding::detail::TubeProblem tube_problem(const EmbeddingSpec& spec, const FreeWord& u, std::size_t slack) {
  embedding::detail::TubeProblem p;
  p.u = u.letters();
  p.w = spec.w().letters();
  p.rank = spec.rank();
  p.tau = slack * spec.w().length();
  p.max_power = spec.budget().max_power;
  p.max_vertices = spec.budget().max_vertices;
  return p;
}

}  // namespace

std::shared_ptr<const GeodesicSet> GeodesicEngine::compute(const Element& u) const {
  auto result = std::make_shared<GeodesicSet>();
  const Element one = spec_.group().identity();
  if (spec_.family() == Family::FreeProductPair) {
    std::vector<AlphabetLetter> edges;
    for (const auto& s : std::get<FreeProductElement>(u).syllables()) {
      Element e = spec_.group().from_syllables({s});
      edges.push_back(HLetter{static_cast<SubgroupId>(s.factor), std::move(e), 0});
    }
    result->distance = edges.size();
    result->paths.emplace_back(spec_, one, std::move(edges));
    result->exhaustive = true;
    return result;
  }

  const FreeWord& word = std::get<FreeWord>(u);
  const embedding::Budget& b = spec_.budget();
  std::vector<std::vector<embedding::detail::EdgeLabel>> labels;
  std::uint32_t d = 0;
  bool stable = false;
  for (std::size_t slack = b.geodesic_slack; slack <= b.max_certify_slack + 1; ++slack) {
    auto p = tube_problem(spec_, word, slack);
    embedding::detail::TubeSearch search(p);
    auto next = search.geodesics(b.max_geodesics);
    if (slack > b.geodesic_slack && next == labels && search.distance() == d) {
      stable = true;
      break;
    }
    labels = std::move(next);
    d = search.distance();
  }
  bool oracle_ok = false;
  if (auto o = oracle(); o && word.length() + spec_.w().length() <= o->caps().max_S_length) {
    OracleAnswer ans = o->distance(one, u);
    if (!ans.distance || *ans.distance != d)
      throw CheckFailure("geodesic engine and brute-force oracle disagree on " + spec_.format(u));
    oracle_ok = true;
  }
  result->distance = d;
  for (const auto& l : labels) result->paths.emplace_back(spec_, one, to_letters(spec_, l));
  result->exhaustive = stable && oracle_ok;
  return result;
}

std::shared_ptr<const GeodesicSet> GeodesicEngine::geodesics_from_identity(const Element& u) const {
  {
    std::lock_guard lock(mutex_);
    auto it = cache_.find(u);
    if (it != cache_.end()) return it->second;
  }
  auto computed = compute(u);
  std::lock_guard lock(mutex_);
  return cache_.emplace(u, std::move(computed)).first->second;
}

GeodesicSet GeodesicEngine::geodesics(const Element& f, const Element& g) const {
  const auto& G = spec_.group();
  auto base = geodesics_from_identity(G.product(G.inverse(f), g));
  GeodesicSet out;
  out.distance = base->distance;
  out.exhaustive = base->exhaustive;
  out.paths.reserve(base->paths.size());
  for (const CayleyPath& p : base->paths) out.paths.push_back(p.translated(spec_, f));
  return out;
}

std::size_t GeodesicEngine::distance(const Element& f, const Element& g) const {
  const auto& G = spec_.group();
  Element u = G.product(G.inverse(f), g);
  if (spec_.family() == Family::FreeProductPair) return std::get<FreeProductElement>(u).syllable_count();
  {
    std::lock_guard lock(mutex_);
    auto it = cache_.find(u);
    if (it != cache_.end()) return it->second->distance;
    auto jt = distance_cache_.find(u);
    if (jt != distance_cache_.end()) return jt->second;
  }
  auto p = tube_problem(spec_, std::get<FreeWord>(u), spec_.budget().geodesic_slack);
  p.record_predecessors = false;
  std::size_t d = embedding::detail::TubeSearch(p).distance();
  std::lock_guard lock(mutex_);
  distance_cache_.emplace(std::move(u), d);
  return d;
}

std::size_t GeodesicEngine::distance_to_coset(const Element& f, const Coset& c) const {
  const auto& G = spec_.group();
  Element y = G.product(G.inverse(f), c.rep);
  Coset local = spec_.coset(c.lambda, y);
  if (spec_.family() == Family::FreeProductPair) return std::get<FreeProductElement>(local.rep).syllable_count();
  // The nearest coset points to the projection of f onto the coset's axis are
  // the shortest representatives; scan a window around them.
  const Element one = G.identity();
  std::size_t best = SIZE_MAX;
  for (std::int64_t n = -3; n <= 3; ++n) {
    Element cand = G.product(local.rep, spec_.w().pow(n));
    best = std::min(best, distance(one, cand));
  }
  return best;
}

std::optional<PathComponent> find_component_in(const EmbeddingSpec& spec, const CayleyPath& path, const Coset& coset) {
  std::optional<PathComponent> hit;
  for (const PathComponent& c : components(path, coset.lambda)) {
    if (!spec.coset_contains(coset, c.entry)) continue;
    if (hit) throw CheckFailure("geodesic penetrates a coset twice");
    hit = c;
  }
  return hit;
}

std::optional<std::pair<Element, Element>> penetration(const GeodesicEngine& engine, const CayleyPath& geodesic,
                                                       const Coset& coset) {
  if (engine.distance(geodesic.origin(), geodesic.end()) != geodesic.length())
    throw CheckFailure("penetration query on a non-geodesic path");
  auto c = find_component_in(engine.spec(), geodesic, coset);
  if (!c) return std::nullopt;
  return std::make_pair(c->entry, c->exit);
}

}  // namespace qcext::geodesics
