#include "noness/random_networks.hpp"

#include <deque>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "noness/graph_builder.hpp"

namespace noness {

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("uniform_below: empty range");
  const std::uint64_t limit = (std::numeric_limits<std::uint64_t>::max() / n) * n;
  for (;;) {
    std::uint64_t x = rng();
    if (x < limit) return x % n;
  }
}

namespace {

std::string leaf_name(std::size_t index, std::size_t count) {
  std::string digits = std::to_string(index);
  std::string width = std::to_string(count);
  return "l" + std::string(width.size() - digits.size(), '0') + digits;
}

using ArcList = std::vector<std::pair<VertexId, VertexId>>;

// Grows the tree inside g, keeping arcs in sync with g's arc set.
void grow_tree(GraphBuilder& g, ArcList& arcs, std::size_t leaf_count,
               std::mt19937_64& rng) {
  if (leaf_count == 0) throw std::invalid_argument("random_tree: need at least one leaf");
  if (leaf_count == 1) {
    g.add_leaf(leaf_name(1, 1));
    return;
  }
  VertexId root = g.add_vertex();
  VertexId l1 = g.add_leaf(leaf_name(1, leaf_count));
  VertexId l2 = g.add_leaf(leaf_name(2, leaf_count));
  g.add_arc(root, l1);
  g.add_arc(root, l2);
  arcs = {{root, l1}, {root, l2}};
  for (std::size_t i = 3; i <= leaf_count; ++i) {
    std::size_t pick = uniform_below(rng, arcs.size());
    auto [u, v] = arcs[pick];
    VertexId s = g.subdivide(u, v);
    VertexId leaf = g.add_leaf(leaf_name(i, leaf_count));
    g.add_arc(s, leaf);
    arcs[pick] = {u, s};
    arcs.push_back({s, v});
    arcs.push_back({s, leaf});
  }
}

bool reaches(const GraphBuilder& g, VertexId from, VertexId to) {
  if (from == to) return true;
  std::vector<bool> seen(g.size(), false);
  std::deque<VertexId> queue{from};
  seen[from] = true;
  while (!queue.empty()) {
    VertexId v = queue.front();
    queue.pop_front();
    for (VertexId c : g.children(v)) {
      if (c == to) return true;
      if (!seen[c]) {
        seen[c] = true;
        queue.push_back(c);
      }
    }
  }
  return false;
}

}  // namespace

Network random_tree(std::size_t leaf_count, std::mt19937_64& rng) {
  GraphBuilder g;
  ArcList arcs;
  grow_tree(g, arcs, leaf_count, rng);
  return g.freeze();
}

Network random_tree_child(std::size_t leaf_count, std::size_t reticulation_count,
                          std::mt19937_64& rng) {
  GraphBuilder g;
  ArcList arcs;
  grow_tree(g, arcs, leaf_count, rng);

  auto is_reticulation = [&g](VertexId v) { return g.parents(v).size() == 2; };

  for (std::size_t placed = 0; placed < reticulation_count; ++placed) {
    bool ok = false;
    for (int attempt = 0; attempt < 500 && !ok; ++attempt) {
      if (arcs.size() < 2) break;
      std::size_t ia = uniform_below(rng, arcs.size());
      std::size_t ib = uniform_below(rng, arcs.size());
      if (ia == ib) continue;
      auto [u1, v1] = arcs[ia];
      auto [u2, v2] = arcs[ib];
      // s's children will be v1 and the new reticulation; t's child is v2
      if (is_reticulation(v1) || is_reticulation(v2)) continue;
      // u2 keeps a tree or leaf child after its arc to v2 is rerouted through
      // the reticulation (if u2 == u1, the fresh vertex s serves that role)
      if (u2 != u1) {
        bool keeps_one = false;
        for (VertexId c : g.children(u2))
          if (c != v2 && !is_reticulation(c)) keeps_one = true;
        if (!keeps_one) continue;
      }
      // the new arc (s,t) must not close a directed cycle
      if (reaches(g, v2, u1)) continue;

      VertexId s = g.subdivide(u1, v1);
      VertexId t = g.subdivide(u2, v2);
      g.add_arc(s, t);
      arcs[ia] = {u1, s};
      arcs[ib] = {u2, t};
      arcs.push_back({s, v1});
      arcs.push_back({t, v2});
      arcs.push_back({s, t});
      ok = true;
    }
    if (!ok)
      throw std::runtime_error("random_tree_child: no valid reticulation placement after 500 attempts (" +
                               std::to_string(placed) + " of " +
                               std::to_string(reticulation_count) + " placed)");
  }
  return g.freeze();
}

}  // namespace noness
