#include "embedding/tube_search.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "qcext/errors.hpp"

namespace qcext::embedding::detail {

namespace {
constexpr std::uint32_t kUnseen = std::numeric_limits<std::uint32_t>::max();

std::int64_t h_rank(std::int64_t n) { return 2 * (n < 0 ? -n : n) + (n < 0 ? 1 : 0); }
}  // namespace

bool label_less(const EdgeLabel& a, const EdgeLabel& b) {
  if (a.is_h != b.is_h) return !a.is_h;
  if (!a.is_h) return groups::letter_rank(static_cast<Letter>(a.value)) < groups::letter_rank(static_cast<Letter>(b.value));
  return h_rank(a.value) < h_rank(b.value);
}

TubeSearch::TubeSearch(const TubeProblem& problem)
    : p_(problem), u_(problem.u.begin(), problem.u.end()), w_(problem.w.begin(), problem.w.end()) {
  for (auto it = w_.rbegin(); it != w_.rend(); ++it) w_inv_.push_back(-*it);
  p_.u = u_;
  p_.w = w_;
  nodes_.push_back({0, 0, 0});
  run();
}

std::uint32_t TubeSearch::child(std::uint32_t node, Letter s) {
  std::uint64_t k = (static_cast<std::uint64_t>(node) << 8) | static_cast<std::uint8_t>(s + 128);
  auto [it, fresh] = children_.try_emplace(k, static_cast<std::uint32_t>(nodes_.size()));
  if (fresh) nodes_.push_back({node, s, nodes_[node].depth + 1});
  return it->second;
}

bool TubeSearch::step(Vert v, Letter s, Vert& out) {
  if (v.node == 0) {
    if (v.pos < u_.size() && s == u_[v.pos]) {
      out = {v.pos + 1, 0};
      return true;
    }
    if (v.pos > 0 && s == -u_[v.pos - 1]) {
      out = {v.pos - 1, 0};
      return true;
    }
    if (p_.tau == 0) return false;
    out = {v.pos, child(0, s)};
    return true;
  }
  const Node& n = nodes_[v.node];
  if (s == -n.last) {
    out = {v.pos, n.parent};
    return true;
  }
  if (n.depth >= p_.tau) return false;
  out = {v.pos, child(v.node, s)};
  return true;
}

bool TubeSearch::in_subgroup(Vert v) const {
  std::vector<Letter> branch;
  for (std::uint32_t n = v.node; n != 0; n = nodes_[n].parent) branch.push_back(nodes_[n].last);
  std::vector<Letter> word(u_.begin(), u_.begin() + v.pos);
  word.insert(word.end(), branch.rbegin(), branch.rend());
  const std::size_t m = w_.size();
  if (word.size() % m != 0) return false;
  bool forward = true, backward = true;
  for (std::size_t i = 0; i < word.size(); ++i) {
    forward = forward && word[i] == w_[i % m];
    backward = backward && word[i] == w_inv_[i % m];
  }
  return forward || backward;
}

std::uint32_t TubeSearch::intern(Vert v, std::uint32_t dist, bool& fresh) {
  auto [it, inserted] = index_.try_emplace(key(v), static_cast<std::uint32_t>(verts_.size()));
  fresh = inserted;
  if (inserted) {
    if (p_.max_vertices && verts_.size() >= p_.max_vertices)
      throw BudgetExhausted("geodesic search exceeded " + std::to_string(p_.max_vertices) + " vertices");
    verts_.push_back(v);
    keys_.push_back(key(v));
    dist_.push_back(dist);
    if (p_.record_predecessors) preds_.emplace_back();
  }
  return it->second;
}

void TubeSearch::run() {
  bool fresh = false;
  intern({0, 0}, 0, fresh);
  const Vert goal{static_cast<std::uint32_t>(u_.size()), 0};
  if (u_.empty()) {
    target_ = 0;
    distance_ = 0;
    return;
  }
  const std::int64_t n_cap = std::max<std::int64_t>(
      1, std::min<std::int64_t>(p_.max_power,
                                static_cast<std::int64_t>((u_.size() + 2 * p_.tau) / w_.size()) + 1));
  std::vector<std::uint32_t> layer{0}, next;
  std::uint32_t d = 0;
  bool found = false;

  auto relax = [&](std::uint32_t from, Vert to, EdgeLabel label) -> bool {
    bool is_new = false;
    std::uint32_t idx = intern(to, d + 1, is_new);
    if (is_new) next.push_back(idx);
    if (dist_[idx] == d + 1 && p_.record_predecessors) preds_[idx].push_back({from, label});
    if (idx != 0 && verts_[idx].pos == goal.pos && verts_[idx].node == 0) {
      target_ = idx;
      found = true;
      if (!p_.record_predecessors) return true;
    }
    return false;
  };

  while (!layer.empty()) {
    for (std::uint32_t from : layer) {
      const Vert v = verts_[from];
      for (std::size_t g = 0; g < p_.rank; ++g) {
        for (int sign : {1, -1}) {
          Letter s = groups::make_letter(g, sign);
          Vert to;
          if (step(v, s, to) && relax(from, to, {false, s})) {
            distance_ = d + 1;
            return;
          }
        }
      }
      if (p_.forbid_internal_h && in_subgroup(v)) continue;
      for (int sign : {1, -1}) {
        const auto& word = sign > 0 ? w_ : w_inv_;
        Vert cur = v;
        bool inside = true;
        for (std::int64_t n = 1; n <= n_cap && inside; ++n) {
          for (Letter s : word) {
            Vert nxt;
            if (!step(cur, s, nxt)) {
              inside = false;
              break;
            }
            cur = nxt;
          }
          if (inside && relax(from, cur, {true, sign * n})) {
            distance_ = d + 1;
            return;
          }
        }
      }
    }
    if (found) {
      distance_ = d + 1;
      return;
    }
    layer.swap(next);
    next.clear();
    ++d;
  }
  throw CheckFailure("tube search exhausted without reaching the target");
}

std::vector<std::vector<EdgeLabel>> TubeSearch::geodesics(std::size_t max_count) const {
  if (!p_.record_predecessors) throw CheckFailure("geodesic enumeration needs recorded predecessors");
  if (distance_ == 0) return {{}};
  const std::size_t n = verts_.size();
  // Vertices on some geodesic, with forward edges.
  std::vector<char> on(n, 0);
  std::vector<std::vector<std::pair<EdgeLabel, std::uint32_t>>> succ(n);
  std::vector<std::uint32_t> stack{target_};
  on[target_] = 1;
  while (!stack.empty()) {
    std::uint32_t v = stack.back();
    stack.pop_back();
    for (const Edge& e : preds_[v]) {
      succ[e.from].push_back({e.label, v});
      if (!on[e.from]) {
        on[e.from] = 1;
        stack.push_back(e.from);
      }
    }
  }
  for (auto& s : succ)
    std::sort(s.begin(), s.end(), [](const auto& a, const auto& b) { return label_less(a.first, b.first); });

  // Path counts to the target, saturating past max_count.
  std::vector<std::uint64_t> count(n, kUnseen);
  std::vector<std::uint32_t> order;
  for (std::uint32_t v = 0; v < n; ++v)
    if (on[v]) order.push_back(v);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) { return dist_[a] > dist_[b]; });
  for (std::uint32_t v : order) {
    if (v == target_) {
      count[v] = 1;
      continue;
    }
    std::uint64_t c = 0;
    for (const auto& [label, to] : succ[v]) c = std::min<std::uint64_t>(c + count[to], max_count + 1);
    count[v] = c;
  }
  if (count[0] > max_count)
    throw BudgetExhausted("more than " + std::to_string(max_count) + " geodesics");

  std::vector<std::vector<EdgeLabel>> out;
  out.reserve(count[0]);
  std::vector<EdgeLabel> path;
  auto dfs = [&](auto&& self, std::uint32_t v) -> void {
    if (v == target_) {
      out.push_back(path);
      return;
    }
    for (const auto& [label, to] : succ[v]) {
      path.push_back(label);
      self(self, to);
      path.pop_back();
    }
  };
  dfs(dfs, 0);
  return out;
}

}  // namespace qcext::embedding::detail
