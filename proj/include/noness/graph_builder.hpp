#pragma once

#include <string>
#include <utility>
#include <vector>

#include "noness/network.hpp"

namespace noness {

// Mutable scratch graph used by the parser, the generators and the surgery
// routines. Degrees are unconstrained (parallel arcs are representable) until
// freeze(), which compacts the live vertices into a validated Network.
class GraphBuilder {
 public:
  GraphBuilder() = default;
  explicit GraphBuilder(const Network& net);

  VertexId add_vertex();
  VertexId add_leaf(std::string label);
  void set_label(VertexId v, std::string label);

  void add_arc(VertexId u, VertexId v);
  bool remove_arc(VertexId u, VertexId v);  // one occurrence; false if absent
  void remove_vertex(VertexId v);           // detaches all incident arcs
  // Replace the in-1/out-1 vertex v by an arc from its parent to its child.
  // May create a parallel arc; callers that forbid that must check first.
  void suppress(VertexId v);
  // Insert a fresh vertex s on the arc (u,v); returns s.
  VertexId subdivide(VertexId u, VertexId v);

  std::size_t size() const { return parents_.size(); }  // includes dead slots
  bool alive(VertexId v) const { return alive_[v]; }
  const std::vector<VertexId>& parents(VertexId v) const { return parents_[v]; }
  const std::vector<VertexId>& children(VertexId v) const { return children_[v]; }
  bool has_arc(VertexId u, VertexId v) const;
  const std::string& label(VertexId v) const { return label_[v]; }

  RawNetwork to_raw() const;  // compacts live vertices, preserving id order
  ValidationReport validate() const;
  Network freeze() const;  // throws std::invalid_argument if not a valid network
  std::pair<Network, std::vector<VertexId>> freeze_with_map() const;

 private:
  std::vector<std::vector<VertexId>> parents_;
  std::vector<std::vector<VertexId>> children_;
  std::vector<std::string> label_;
  std::vector<bool> alive_;
};

}  // namespace noness
