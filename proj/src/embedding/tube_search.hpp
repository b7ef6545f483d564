#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "qcext/groups/free_word.hpp"

namespace qcext::embedding::detail {

using groups::Letter;

struct TubeProblem {
  std::span<const Letter> u;  // target; the search runs from 1 to u
  std::span<const Letter> w;  // cyclically reduced generator of H
  std::size_t rank = 0;
  std::size_t tau = 0;  // admissible distance from the tree geodesic [1,u]
  std::int64_t max_power = 0;
  // Relative-metric mode: no H-edges leave vertices of H itself.
  bool forbid_internal_h = false;
  bool record_predecessors = true;
  std::size_t max_vertices = 0;
};

struct EdgeLabel {
  bool is_h;
  std::int64_t value;  // the letter for X-edges, the power n for H-edges
  friend bool operator==(const EdgeLabel&, const EdgeLabel&) = default;
};

bool label_less(const EdgeLabel& a, const EdgeLabel& b);

// Breadth-first search in the coned-off Cayley graph of F(S) rel <w>,
// restricted to the tube of radius tau around the tree geodesic [1,u].
// A vertex p_i b is stored as (i, trie node of b) where p_i is the length-i
// prefix of u and b is a reduced word leaving the geodesic at p_i.
class TubeSearch {
 public:
  explicit TubeSearch(const TubeProblem& problem);

  std::uint32_t distance() const { return distance_; }
  std::size_t vertex_count() const { return keys_.size(); }
  // All geodesics as label sequences, in label_less lexicographic order.
  // Throws BudgetExhausted beyond max_count.
  std::vector<std::vector<EdgeLabel>> geodesics(std::size_t max_count) const;

 private:
  struct Node {
    std::uint32_t parent;
    Letter last;
    std::uint32_t depth;
  };
  struct Vert {
    std::uint32_t pos;
    std::uint32_t node;
  };
  struct Edge {
    std::uint32_t from;
    EdgeLabel label;
  };

  static std::uint64_t key(Vert v) { return (static_cast<std::uint64_t>(v.pos) << 32) | v.node; }
  std::uint32_t child(std::uint32_t node, Letter s);
  bool step(Vert v, Letter s, Vert& out);
  bool in_subgroup(Vert v) const;
  std::uint32_t intern(Vert v, std::uint32_t dist, bool& fresh);
  void run();

  TubeProblem p_;
  std::vector<Letter> u_;
  std::vector<Letter> w_;
  std::vector<Letter> w_inv_;
  std::vector<Node> nodes_;
  std::unordered_map<std::uint64_t, std::uint32_t> children_;
  std::vector<Vert> verts_;
  std::vector<std::uint64_t> keys_;
  std::vector<std::uint32_t> dist_;
  std::vector<std::vector<Edge>> preds_;
  std::unordered_map<std::uint64_t, std::uint32_t> index_;
  std::uint32_t target_ = 0;
  std::uint32_t distance_ = 0;
};

}  // namespace qcext::embedding::detail
