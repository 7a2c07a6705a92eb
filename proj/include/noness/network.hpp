#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace noness {

using VertexId = std::uint32_t;
inline constexpr VertexId kNoVertex = 0xffffffffu;

// Vertex roles in a rooted binary phylogenetic network:
//   root          in-degree 0, out-degree 2 (or the lone vertex of a 1-leaf network)
//   tree          in-degree 1, out-degree 2
//   reticulation  in-degree 2, out-degree 1
//   leaf          in-degree 1, out-degree 0, carries a label
enum class VertexKind : std::uint8_t { root, tree, reticulation, leaf };

const char* to_string(VertexKind kind);

struct Arc {
  VertexId tail = kNoVertex;
  VertexId head = kNoVertex;
  friend bool operator==(const Arc&, const Arc&) = default;
  friend auto operator<=>(const Arc&, const Arc&) = default;
};

// A directed graph as handed to validate(): arbitrary degrees, arbitrary
// labeling, not yet known to be a phylogenetic network.
struct RawNetwork {
  std::size_t vertex_count = 0;
  std::vector<Arc> arcs;
  std::vector<std::pair<VertexId, std::string>> leaf_labels;
};

struct Violation {
  std::string rule;     // stable rule id, e.g. "vertex-degree"
  std::string where;    // offending vertex ("v3") or arc ("3->7")
  std::string message;  // human-readable detail
};

struct ValidationReport {
  bool ok = true;
  std::vector<Violation> violations;
  std::string summary() const;
};

// Checks every structural rule of a rooted binary phylogenetic network:
// no parallel arcs, acyclic, unique root of out-degree 2, leaves are exactly
// the labeled out-degree-0 vertices with distinct labels, every other vertex
// is (1,2) or (2,1). A single labeled vertex with no arcs is the valid
// 1-leaf network.
ValidationReport validate(const RawNetwork& raw);

// Immutable rooted binary phylogenetic network with dense integer vertex ids.
// All query members are const and safe to share across threads; surgery
// functions below return new Network values.
class Network {
 public:
  // Throws std::invalid_argument (message = first violation) if raw is not a
  // valid network.
  static Network from_raw(const RawNetwork& raw);

  std::size_t vertex_count() const { return kind_.size(); }
  std::size_t arc_count() const { return arc_count_; }
  VertexId root() const { return root_; }
  VertexKind kind(VertexId v) const { return kind_[v]; }
  bool is_leaf(VertexId v) const { return kind_[v] == VertexKind::leaf; }
  bool is_reticulation(VertexId v) const { return kind_[v] == VertexKind::reticulation; }

  // Children are ordered by (label of smallest reachable leaf, vertex id);
  // parents by vertex id. Both orders are deterministic for a given value.
  std::span<const VertexId> parents(VertexId v) const;
  std::span<const VertexId> children(VertexId v) const;
  bool has_arc(VertexId u, VertexId v) const;
  // True iff the arc's head is a reticulation. Throws if (u,v) is not an arc.
  bool is_reticulation_arc(const Arc& a) const;
  std::vector<Arc> arcs() const;  // deterministic order
  std::vector<Arc> reticulation_arcs() const;

  std::size_t leaf_count() const { return leaves_.size(); }
  const std::vector<VertexId>& leaves() const { return leaves_; }  // sorted by label
  const std::string& leaf_label(VertexId v) const;
  std::optional<VertexId> leaf_by_label(std::string_view label) const;
  std::vector<std::string> leaf_labels_sorted() const;

  std::size_t reticulation_count() const { return reticulations_.size(); }
  const std::vector<VertexId>& reticulations() const { return reticulations_; }  // ascending
  std::vector<VertexId> reticulations_bfs() const;  // discovery order from the root

  bool is_tree() const { return reticulations_.empty(); }
  bool is_tree_child() const { return tree_child_; }

  const std::vector<VertexId>& topological_order() const { return topo_; }

  // Leaf with the lexicographically smallest label reachable from v.
  VertexId min_leaf_below(VertexId v) const { return min_leaf_[v]; }
  // End of the deterministic tree path from v: at every step descend to the
  // tree/leaf child whose reachable-leaf minimum is smallest (ties broken by
  // smaller vertex id). kNoVertex if the walk gets stuck on a vertex whose
  // children are all reticulations.
  VertexId tree_path_leaf(VertexId v) const { return det_leaf_[v]; }

 private:
  friend class GraphBuilder;
  Network() = default;
  void finalize();  // fills every cache; expects adjacency + labels + ids set

  struct Adjacency {
    std::array<VertexId, 2> parent{kNoVertex, kNoVertex};
    std::array<VertexId, 2> child{kNoVertex, kNoVertex};
    std::uint8_t parent_count = 0;
    std::uint8_t child_count = 0;
  };

  std::vector<VertexKind> kind_;
  std::vector<Adjacency> adj_;
  std::vector<std::string> label_;  // empty for non-leaves
  std::unordered_map<std::string, VertexId> label_to_leaf_;
  std::vector<VertexId> leaves_;
  std::vector<VertexId> reticulations_;
  std::vector<VertexId> topo_;
  std::vector<VertexId> min_leaf_;
  std::vector<VertexId> det_leaf_;
  VertexId root_ = kNoVertex;
  std::size_t arc_count_ = 0;
  bool tree_child_ = false;
};

// --- classification -------------------------------------------------------

bool is_tree_child(const Network& net);
// Tree-child with no shortcut arcs.
bool is_normal(const Network& net);
// Every biconnected component of the underlying undirected graph contains at
// most one reticulation.
bool is_level_one(const Network& net);
// True iff arc is a reticulation arc (u,v) and some other directed path runs
// from u to v. Throws std::invalid_argument on a tree arc or a non-arc.
bool is_shortcut(const Network& net, const Arc& arc);

// --- path queries ----------------------------------------------------------

// Directed path of length >= 0 (from == to counts).
bool has_directed_path(const Network& net, VertexId from, VertexId to);
// Directed path from `from` to `to` whose non-initial vertices are all tree
// vertices or leaves.
bool has_tree_path(const Network& net, VertexId from, VertexId to);
// The deterministic tree path from v to a leaf (see tree_path_leaf). Throws
// std::invalid_argument if the network is not tree-child.
std::vector<VertexId> tree_path_to_leaf(const Network& net, VertexId v);

// --- surgery ----------------------------------------------------------------

struct SurgeryResult {
  Network net;
  // old vertex id -> new vertex id, kNoVertex for vertices that were removed
  std::vector<VertexId> old_to_new;
};

// Removes a reticulation arc e = (u,v) from a tree-child network: delete e,
// then suppress u and v; if u is the root, delete the root together with both
// its incident arcs instead, making its other child the new root. The result
// is again a valid tree-child network.
Network delete_arc_tree_child(const Network& net, const Arc& e);
SurgeryResult delete_arc_tree_child_mapped(const Network& net, const Arc& e);

// Removes a reticulation arc from an arbitrary network: delete e, restrict to
// vertices and arcs that lie on a root-to-leaf path, then repeatedly suppress
// in-1/out-1 vertices and collapse parallel arcs until neither applies; if the
// root is left with out-degree 1 it is deleted as well. Validates its output.
Network full_simplification(const Network& net, const Arc& e);
SurgeryResult full_simplification_mapped(const Network& net, const Arc& e);

// --- comparison --------------------------------------------------------------

// Graph isomorphism respecting leaf labels (roots map to roots). Exact;
// backtracks over reticulation ambiguities.
bool isomorphic(const Network& a, const Network& b);

}  // namespace noness
