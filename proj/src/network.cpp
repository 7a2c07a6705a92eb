#include "noness/network.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "noness/graph_builder.hpp"

namespace noness {

const char* to_string(VertexKind kind) {
  switch (kind) {
    case VertexKind::root: return "root";
    case VertexKind::tree: return "tree";
    case VertexKind::reticulation: return "reticulation";
    case VertexKind::leaf: return "leaf";
  }
  return "?";
}

std::string ValidationReport::summary() const {
  if (ok) return "ok";
  std::ostringstream out;
  out << violations.size() << " violation(s)";
  std::size_t shown = 0;
  for (const auto& v : violations) {
    if (shown++ == 3) {
      out << "; ...";
      break;
    }
    out << "; " << v.rule << " at " << v.where << ": " << v.message;
  }
  return out.str();
}

// --- validate ---------------------------------------------------------------

ValidationReport validate(const RawNetwork& raw) {
  ValidationReport rep;
  auto add = [&rep](std::string rule, std::string where, std::string message) {
    rep.ok = false;
    rep.violations.push_back({std::move(rule), std::move(where), std::move(message)});
  };
  auto vname = [](VertexId v) { return "v" + std::to_string(v); };
  auto aname = [](const Arc& a) {
    return std::to_string(a.tail) + "->" + std::to_string(a.head);
  };

  const std::size_t n = raw.vertex_count;
  if (n == 0) {
    add("empty", "-", "network has no vertices");
    return rep;
  }

  bool ids_ok = true;
  for (const Arc& a : raw.arcs) {
    if (a.tail >= n || a.head >= n) {
      add("arc-endpoints", aname(a), "arc references a vertex outside 0.." + std::to_string(n - 1));
      ids_ok = false;
    }
  }
  for (const auto& [v, label] : raw.leaf_labels) {
    if (v >= n) {
      add("leaf-label", vname(v), "label on a vertex outside 0.." + std::to_string(n - 1));
      ids_ok = false;
    }
  }
  if (!ids_ok) return rep;  // the structural checks below need valid indices

  // parallel arcs and self-loops
  {
    std::vector<Arc> sorted = raw.arcs;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      if (sorted[i].tail == sorted[i].head)
        add("acyclic", aname(sorted[i]), "self-loop");
      if (i > 0 && sorted[i] == sorted[i - 1] && (i == 1 || sorted[i] != sorted[i - 2]))
        add("parallel-arcs", aname(sorted[i]), "more than one arc joins this vertex pair");
    }
  }

  // labels
  std::vector<const std::string*> label_of(n, nullptr);
  {
    std::vector<std::pair<std::string, VertexId>> seen;
    for (const auto& [v, label] : raw.leaf_labels) {
      if (label.empty()) add("leaf-label", vname(v), "empty label");
      if (label_of[v] != nullptr)
        add("leaf-label", vname(v), "vertex labeled more than once");
      label_of[v] = &label;
      seen.emplace_back(label, v);
    }
    std::sort(seen.begin(), seen.end());
    for (std::size_t i = 1; i < seen.size(); ++i)
      if (seen[i].first == seen[i - 1].first && !seen[i].first.empty())
        add("leaf-label", vname(seen[i].second),
            "duplicate leaf label '" + seen[i].first + "'");
  }

  std::vector<std::uint32_t> indeg(n, 0), outdeg(n, 0);
  for (const Arc& a : raw.arcs) {
    ++outdeg[a.tail];
    ++indeg[a.head];
  }

  // the 1-leaf network: a single labeled vertex, no arcs
  if (n == 1 && raw.arcs.empty()) {
    if (label_of[0] == nullptr)
      add("leaf-label", vname(0), "single vertex must carry a leaf label");
    return rep;
  }

  std::vector<VertexId> roots;
  for (VertexId v = 0; v < n; ++v)
    if (indeg[v] == 0) roots.push_back(v);
  if (roots.size() != 1) {
    std::string which;
    for (VertexId v : roots) which += (which.empty() ? "" : ",") + vname(v);
    add("root-count", which.empty() ? "-" : which,
        "expected exactly one in-degree-0 vertex, found " + std::to_string(roots.size()));
  }

  for (VertexId v = 0; v < n; ++v) {
    const auto in = indeg[v];
    const auto out = outdeg[v];
    if (out == 0) {
      if (in != 1)
        add("leaf-degree", vname(v),
            "out-degree-0 vertex has in-degree " + std::to_string(in) + ", expected 1");
      if (label_of[v] == nullptr) add("leaf-label", vname(v), "out-degree-0 vertex has no label");
    } else {
      if (label_of[v] != nullptr)
        add("leaf-label", vname(v), "label on a vertex with out-degree > 0");
      if (in == 0) {
        if (out != 2)
          add("root-degree", vname(v),
              "root has out-degree " + std::to_string(out) + ", expected 2");
      } else if (!((in == 1 && out == 2) || (in == 2 && out == 1))) {
        add("vertex-degree", vname(v),
            "degrees (" + std::to_string(in) + "," + std::to_string(out) +
                "), expected (1,2) or (2,1)");
      }
    }
  }

  // acyclicity (Kahn)
  {
    std::vector<std::uint32_t> deg = indeg;
    std::vector<std::vector<VertexId>> child(n);
    for (const Arc& a : raw.arcs) child[a.tail].push_back(a.head);
    std::deque<VertexId> queue;
    for (VertexId v = 0; v < n; ++v)
      if (deg[v] == 0) queue.push_back(v);
    std::size_t processed = 0;
    while (!queue.empty()) {
      VertexId v = queue.front();
      queue.pop_front();
      ++processed;
      for (VertexId c : child[v])
        if (--deg[c] == 0) queue.push_back(c);
    }
    if (processed < n)
      add("acyclic", "-",
          std::to_string(n - processed) + " vertex(es) lie on or below a directed cycle");
  }

  return rep;
}

// --- Network ----------------------------------------------------------------

Network Network::from_raw(const RawNetwork& raw) {
  ValidationReport rep = validate(raw);
  if (!rep.ok) throw std::invalid_argument("invalid network: " + rep.summary());

  Network net;
  const std::size_t n = raw.vertex_count;
  net.kind_.resize(n);
  net.adj_.resize(n);
  net.label_.resize(n);
  for (const Arc& a : raw.arcs) {
    Adjacency& t = net.adj_[a.tail];
    Adjacency& h = net.adj_[a.head];
    t.child[t.child_count++] = a.head;
    h.parent[h.parent_count++] = a.tail;
  }
  for (const auto& [v, label] : raw.leaf_labels) net.label_[v] = label;
  net.arc_count_ = raw.arcs.size();
  net.finalize();
  return net;
}

void Network::finalize() {
  const std::size_t n = adj_.size();

  for (VertexId v = 0; v < n; ++v) {
    const Adjacency& a = adj_[v];
    if (a.child_count == 0)
      kind_[v] = VertexKind::leaf;
    else if (a.parent_count == 0)
      kind_[v] = VertexKind::root;
    else if (a.parent_count == 2)
      kind_[v] = VertexKind::reticulation;
    else
      kind_[v] = VertexKind::tree;
    if (a.parent_count == 0) root_ = v;
  }

  // topological order (Kahn, smallest-id-first queue discipline is not
  // required for correctness, plain FIFO keeps it deterministic)
  topo_.clear();
  topo_.reserve(n);
  {
    std::vector<std::uint8_t> deg(n);
    for (VertexId v = 0; v < n; ++v) deg[v] = adj_[v].parent_count;
    std::deque<VertexId> queue;
    for (VertexId v = 0; v < n; ++v)
      if (deg[v] == 0) queue.push_back(v);
    while (!queue.empty()) {
      VertexId v = queue.front();
      queue.pop_front();
      topo_.push_back(v);
      for (std::uint8_t i = 0; i < adj_[v].child_count; ++i)
        if (--deg[adj_[v].child[i]] == 0) queue.push_back(adj_[v].child[i]);
    }
  }

  // smallest reachable leaf per vertex, by label
  min_leaf_.assign(n, kNoVertex);
  auto leaf_less = [this](VertexId a, VertexId b) {
    if (a == b) return false;
    if (a == kNoVertex) return false;
    if (b == kNoVertex) return true;
    return label_[a] < label_[b];
  };
  for (auto it = topo_.rbegin(); it != topo_.rend(); ++it) {
    VertexId v = *it;
    if (kind_[v] == VertexKind::leaf) {
      min_leaf_[v] = v;
      continue;
    }
    for (std::uint8_t i = 0; i < adj_[v].child_count; ++i) {
      VertexId m = min_leaf_[adj_[v].child[i]];
      if (leaf_less(m, min_leaf_[v])) min_leaf_[v] = m;
    }
  }

  // deterministic adjacency orders: children by (min-leaf label, id),
  // parents by id
  for (VertexId v = 0; v < n; ++v) {
    Adjacency& a = adj_[v];
    if (a.child_count == 2) {
      VertexId c0 = a.child[0], c1 = a.child[1];
      bool swap_them = false;
      if (min_leaf_[c0] == min_leaf_[c1])
        swap_them = c1 < c0;
      else
        swap_them = leaf_less(min_leaf_[c1], min_leaf_[c0]);
      if (swap_them) std::swap(a.child[0], a.child[1]);
    }
    if (a.parent_count == 2 && a.parent[1] < a.parent[0])
      std::swap(a.parent[0], a.parent[1]);
  }

  // end of the deterministic tree path from each vertex
  det_leaf_.assign(n, kNoVertex);
  for (auto it = topo_.rbegin(); it != topo_.rend(); ++it) {
    VertexId v = *it;
    if (kind_[v] == VertexKind::leaf) {
      det_leaf_[v] = v;
      continue;
    }
    VertexId best = kNoVertex;
    for (std::uint8_t i = 0; i < adj_[v].child_count; ++i) {
      VertexId c = adj_[v].child[i];
      if (kind_[c] == VertexKind::reticulation) continue;
      if (best == kNoVertex || leaf_less(min_leaf_[c], min_leaf_[best]) ||
          (min_leaf_[c] == min_leaf_[best] && c < best))
        best = c;
    }
    if (best != kNoVertex) det_leaf_[v] = det_leaf_[best];
  }

  tree_child_ = true;
  for (VertexId v = 0; v < n; ++v) {
    if (kind_[v] == VertexKind::leaf) continue;
    bool has_tree_or_leaf_child = false;
    for (std::uint8_t i = 0; i < adj_[v].child_count; ++i)
      if (kind_[adj_[v].child[i]] != VertexKind::reticulation) has_tree_or_leaf_child = true;
    if (!has_tree_or_leaf_child) {
      tree_child_ = false;
      break;
    }
  }

  leaves_.clear();
  reticulations_.clear();
  label_to_leaf_.clear();
  for (VertexId v = 0; v < n; ++v) {
    if (kind_[v] == VertexKind::leaf) {
      leaves_.push_back(v);
      label_to_leaf_.emplace(label_[v], v);
    } else if (kind_[v] == VertexKind::reticulation) {
      reticulations_.push_back(v);
    }
  }
  std::sort(leaves_.begin(), leaves_.end(),
            [this](VertexId a, VertexId b) { return label_[a] < label_[b]; });
}

std::span<const VertexId> Network::parents(VertexId v) const {
  const Adjacency& a = adj_[v];
  return {a.parent.data(), a.parent_count};
}

std::span<const VertexId> Network::children(VertexId v) const {
  const Adjacency& a = adj_[v];
  return {a.child.data(), a.child_count};
}

bool Network::has_arc(VertexId u, VertexId v) const {
  for (VertexId c : children(u))
    if (c == v) return true;
  return false;
}

bool Network::is_reticulation_arc(const Arc& a) const {
  if (!has_arc(a.tail, a.head))
    throw std::invalid_argument("is_reticulation_arc: (" + std::to_string(a.tail) + "," +
                                std::to_string(a.head) + ") is not an arc");
  return kind_[a.head] == VertexKind::reticulation;
}

std::vector<Arc> Network::arcs() const {
  std::vector<Arc> out;
  out.reserve(arc_count_);
  for (VertexId v = 0; v < vertex_count(); ++v)
    for (VertexId c : children(v)) out.push_back({v, c});
  return out;
}

std::vector<Arc> Network::reticulation_arcs() const {
  std::vector<Arc> out;
  for (VertexId r : reticulations_)
    for (VertexId p : parents(r)) out.push_back({p, r});
  return out;
}

const std::string& Network::leaf_label(VertexId v) const {
  if (kind_[v] != VertexKind::leaf)
    throw std::invalid_argument("leaf_label: v" + std::to_string(v) + " is not a leaf");
  return label_[v];
}

std::optional<VertexId> Network::leaf_by_label(std::string_view label) const {
  auto it = label_to_leaf_.find(std::string(label));
  if (it == label_to_leaf_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> Network::leaf_labels_sorted() const {
  std::vector<std::string> out;
  out.reserve(leaves_.size());
  for (VertexId v : leaves_) out.push_back(label_[v]);
  return out;
}

std::vector<VertexId> Network::reticulations_bfs() const {
  std::vector<VertexId> order;
  std::vector<bool> seen(vertex_count(), false);
  std::deque<VertexId> queue{root_};
  seen[root_] = true;
  while (!queue.empty()) {
    VertexId v = queue.front();
    queue.pop_front();
    if (kind_[v] == VertexKind::reticulation) order.push_back(v);
    for (VertexId c : children(v)) {
      if (!seen[c]) {
        seen[c] = true;
        queue.push_back(c);
      }
    }
  }
  return order;
}

// --- classification -----------------------------------------------------------

bool is_tree_child(const Network& net) { return net.is_tree_child(); }

bool is_normal(const Network& net) {
  if (!net.is_tree_child()) return false;
  for (const Arc& a : net.reticulation_arcs())
    if (is_shortcut(net, a)) return false;
  return true;
}

namespace {

// Biconnected components of the underlying undirected graph (iterative
// Hopcroft-Tarjan). Returns one component id per arc of net.arcs().
std::vector<std::uint32_t> biconnected_component_ids(const Network& net,
                                                     const std::vector<Arc>& arcs,
                                                     std::uint32_t& component_count) {
  const std::size_t n = net.vertex_count();
  std::vector<std::vector<std::pair<VertexId, std::uint32_t>>> adj(n);
  for (std::uint32_t i = 0; i < arcs.size(); ++i) {
    adj[arcs[i].tail].emplace_back(arcs[i].head, i);
    adj[arcs[i].head].emplace_back(arcs[i].tail, i);
  }

  std::vector<std::uint32_t> comp(arcs.size(), 0);
  std::vector<std::uint32_t> disc(n, 0), low(n, 0);
  std::uint32_t timer = 1;
  component_count = 0;

  struct Frame {
    VertexId v;
    std::uint32_t parent_edge;
    std::size_t next;
  };
  std::vector<Frame> stack;
  std::vector<std::uint32_t> edge_stack;
  constexpr std::uint32_t kNoEdge = 0xffffffffu;

  for (VertexId start = 0; start < n; ++start) {
    if (disc[start] != 0) continue;
    stack.push_back({start, kNoEdge, 0});
    disc[start] = low[start] = timer++;
    while (!stack.empty()) {
      Frame& f = stack.back();
      if (f.next < adj[f.v].size()) {
        auto [w, eid] = adj[f.v][f.next++];
        if (eid == f.parent_edge) continue;
        if (disc[w] == 0) {
          edge_stack.push_back(eid);
          disc[w] = low[w] = timer++;
          stack.push_back({w, eid, 0});
        } else if (disc[w] < disc[f.v]) {
          edge_stack.push_back(eid);
          low[f.v] = std::min(low[f.v], disc[w]);
        }
      } else {
        Frame done = f;
        stack.pop_back();
        if (stack.empty()) continue;
        Frame& parent = stack.back();
        low[parent.v] = std::min(low[parent.v], low[done.v]);
        if (low[done.v] >= disc[parent.v]) {
          // everything above (and including) the tree edge into done.v forms
          // one biconnected component
          std::uint32_t id = component_count++;
          while (true) {
            std::uint32_t eid = edge_stack.back();
            edge_stack.pop_back();
            comp[eid] = id;
            if (eid == done.parent_edge) break;
          }
        }
      }
    }
  }
  return comp;
}

}  // namespace

bool is_level_one(const Network& net) {
  if (net.reticulation_count() <= 1) return true;
  std::vector<Arc> arcs = net.arcs();
  std::uint32_t component_count = 0;
  std::vector<std::uint32_t> comp = biconnected_component_ids(net, arcs, component_count);

  // index arcs so each reticulation can look up the component of its in-arcs
  std::unordered_map<std::uint64_t, std::uint32_t> arc_comp;
  arc_comp.reserve(arcs.size());
  for (std::uint32_t i = 0; i < arcs.size(); ++i)
    arc_comp[(std::uint64_t(arcs[i].tail) << 32) | arcs[i].head] = comp[i];

  std::vector<std::uint32_t> reticulations_in(component_count, 0);
  for (VertexId r : net.reticulations()) {
    auto ps = net.parents(r);
    std::uint32_t c0 = arc_comp.at((std::uint64_t(ps[0]) << 32) | r);
    std::uint32_t c1 = arc_comp.at((std::uint64_t(ps[1]) << 32) | r);
    assert(c0 == c1);  // both in-arcs of a reticulation share a cycle
    (void)c1;
    if (++reticulations_in[c0] > 1) return false;
  }
  return true;
}

bool is_shortcut(const Network& net, const Arc& arc) {
  if (!net.is_reticulation_arc(arc))
    throw std::invalid_argument("is_shortcut: (" + std::to_string(arc.tail) + "," +
                                std::to_string(arc.head) + ") is a tree arc");
  // a second directed path from tail to head must leave through the other child
  std::vector<bool> seen(net.vertex_count(), false);
  std::deque<VertexId> queue;
  seen[arc.tail] = true;
  for (VertexId c : net.children(arc.tail)) {
    if (c == arc.head) continue;
    if (!seen[c]) {
      seen[c] = true;
      queue.push_back(c);
    }
  }
  while (!queue.empty()) {
    VertexId v = queue.front();
    queue.pop_front();
    if (v == arc.head) return true;
    for (VertexId c : net.children(v)) {
      if (!seen[c]) {
        seen[c] = true;
        queue.push_back(c);
      }
    }
  }
  return false;
}

// --- path queries -------------------------------------------------------------

bool has_directed_path(const Network& net, VertexId from, VertexId to) {
  if (from == to) return true;
  std::vector<bool> seen(net.vertex_count(), false);
  std::deque<VertexId> queue{from};
  seen[from] = true;
  while (!queue.empty()) {
    VertexId v = queue.front();
    queue.pop_front();
    for (VertexId c : net.children(v)) {
      if (c == to) return true;
      if (!seen[c]) {
        seen[c] = true;
        queue.push_back(c);
      }
    }
  }
  return false;
}

bool has_tree_path(const Network& net, VertexId from, VertexId to) {
  if (from == to) return true;
  // walk upward from `to`: every non-initial vertex of a tree path is a tree
  // vertex or leaf, so it has a unique parent and the path is forced
  VertexId cur = to;
  while (true) {
    VertexKind k = net.kind(cur);
    if (k != VertexKind::tree && k != VertexKind::leaf) return false;
    VertexId parent = net.parents(cur)[0];
    if (parent == from) return true;
    cur = parent;
  }
}

std::vector<VertexId> tree_path_to_leaf(const Network& net, VertexId v) {
  if (!net.is_tree_child())
    throw std::invalid_argument("tree_path_to_leaf: network is not tree-child");
  std::vector<VertexId> path{v};
  VertexId cur = v;
  while (net.kind(cur) != VertexKind::leaf) {
    VertexId best = kNoVertex;
    for (VertexId c : net.children(cur)) {
      if (net.is_reticulation(c)) continue;
      if (best == kNoVertex) {
        best = c;
        continue;
      }
      VertexId mc = net.min_leaf_below(c), mb = net.min_leaf_below(best);
      if (mc == mb ? c < best : net.leaf_label(mc) < net.leaf_label(mb)) best = c;
    }
    assert(best != kNoVertex);
    path.push_back(best);
    cur = best;
  }
  return path;
}

// --- surgery --------------------------------------------------------------------

SurgeryResult delete_arc_tree_child_mapped(const Network& net, const Arc& e) {
  if (!net.is_tree_child())
    throw std::invalid_argument("delete_arc_tree_child: network is not tree-child");
  if (!net.is_reticulation_arc(e))
    throw std::invalid_argument("delete_arc_tree_child: (" + std::to_string(e.tail) + "," +
                                std::to_string(e.head) + ") is a tree arc");

  GraphBuilder g(net);
  g.remove_arc(e.tail, e.head);
  if (e.tail == net.root()) {
    // the root loses one child; drop it with both incident arcs and let the
    // other child take over as root
    g.remove_vertex(e.tail);
  } else {
    g.suppress(e.tail);
  }
  g.suppress(e.head);
  auto [result, map] = g.freeze_with_map();
  return {std::move(result), std::move(map)};
}

Network delete_arc_tree_child(const Network& net, const Arc& e) {
  return delete_arc_tree_child_mapped(net, e).net;
}

SurgeryResult full_simplification_mapped(const Network& net, const Arc& e) {
  if (!net.is_reticulation_arc(e))
    throw std::invalid_argument("full_simplification: (" + std::to_string(e.tail) + "," +
                                std::to_string(e.head) + ") is a tree arc");

  GraphBuilder g(net);
  g.remove_arc(e.tail, e.head);
  const std::size_t n = g.size();

  // keep only vertices and arcs on some root-to-leaf path
  std::vector<bool> down(n, false), up(n, false);
  {
    std::deque<VertexId> queue{net.root()};
    down[net.root()] = true;
    while (!queue.empty()) {
      VertexId v = queue.front();
      queue.pop_front();
      for (VertexId c : g.children(v))
        if (!down[c]) {
          down[c] = true;
          queue.push_back(c);
        }
    }
    std::deque<VertexId> rqueue;
    for (VertexId v = 0; v < n; ++v)
      if (!g.label(v).empty()) {
        up[v] = true;
        rqueue.push_back(v);
      }
    while (!rqueue.empty()) {
      VertexId v = rqueue.front();
      rqueue.pop_front();
      for (VertexId p : g.parents(v))
        if (!up[p]) {
          up[p] = true;
          rqueue.push_back(p);
        }
    }
  }
  for (VertexId v = 0; v < n; ++v) {
    if (!g.alive(v)) continue;
    if (down[v] && up[v]) continue;
    if (!g.label(v).empty())
      throw std::logic_error("full_simplification: a leaf became unreachable");
    g.remove_vertex(v);
  }

  // suppress in-1/out-1 vertices and collapse parallel arcs to a fixed point
  std::deque<VertexId> work;
  std::vector<bool> queued(n, false);
  auto enqueue = [&](VertexId v) {
    if (v < n && g.alive(v) && !queued[v]) {
      queued[v] = true;
      work.push_back(v);
    }
  };
  for (VertexId v = 0; v < n; ++v) enqueue(v);
  while (!work.empty()) {
    VertexId v = work.front();
    work.pop_front();
    queued[v] = false;
    if (!g.alive(v)) continue;

    // collapse parallel out-arcs, keeping one arc per distinct head
    const auto& kids = g.children(v);
    for (std::size_t i = 0; i < kids.size(); ++i) {
      for (std::size_t j = i + 1; j < kids.size(); ++j) {
        if (kids[j] == kids[i]) {
          VertexId c = kids[i];
          g.remove_arc(v, c);
          enqueue(v);
          enqueue(c);
          j = kids.size();  // the vectors shifted; rescan via the requeue
          i = kids.size();
        }
      }
    }
    if (!g.alive(v) || queued[v]) continue;

    if (g.parents(v).size() == 1 && g.children(v).size() == 1 && g.label(v).empty()) {
      VertexId p = g.parents(v)[0], c = g.children(v)[0];
      g.suppress(v);
      enqueue(p);
      enqueue(c);
    }
  }

  // a root left with a single child is dropped; the child becomes the root
  if (g.children(net.root()).size() == 1) g.remove_vertex(net.root());

  auto [result, map] = g.freeze_with_map();
  return {std::move(result), std::move(map)};
}

Network full_simplification(const Network& net, const Arc& e) {
  return full_simplification_mapped(net, e).net;
}

// --- isomorphism ------------------------------------------------------------------

namespace {

class IsoMatcher {
 public:
  IsoMatcher(const Network& a, const Network& b)
      : a_(a), b_(b), ma_(a.vertex_count(), kNoVertex), mb_(b.vertex_count(), kNoVertex) {}

  bool run() { return match(a_.root(), b_.root()); }

 private:
  bool match(VertexId x, VertexId y) {
    if (ma_[x] != kNoVertex || mb_[y] != kNoVertex) return ma_[x] == y;
    if (a_.kind(x) != b_.kind(y)) return false;
    if (a_.kind(x) == VertexKind::leaf) {
      if (a_.leaf_label(x) != b_.leaf_label(y)) return false;
      assign(x, y);
      return true;
    }
    // cheap invariant: the smallest reachable leaf must agree
    if (a_.leaf_label(a_.min_leaf_below(x)) != b_.leaf_label(b_.min_leaf_below(y)))
      return false;

    std::size_t mark = trail_.size();
    assign(x, y);
    auto cx = a_.children(x);
    auto cy = b_.children(y);
    if (cx.size() == 1) {
      if (match(cx[0], cy[0])) return true;
      rollback(mark);
      return false;
    }
    std::size_t inner = trail_.size();
    if (match(cx[0], cy[0]) && match(cx[1], cy[1])) return true;
    rollback(inner);
    if (match(cx[0], cy[1]) && match(cx[1], cy[0])) return true;
    rollback(mark);
    return false;
  }

  void assign(VertexId x, VertexId y) {
    ma_[x] = y;
    mb_[y] = x;
    trail_.push_back({x, y});
  }

  void rollback(std::size_t mark) {
    while (trail_.size() > mark) {
      auto [x, y] = trail_.back();
      trail_.pop_back();
      ma_[x] = kNoVertex;
      mb_[y] = kNoVertex;
    }
  }

  const Network& a_;
  const Network& b_;
  std::vector<VertexId> ma_, mb_;
  std::vector<std::pair<VertexId, VertexId>> trail_;
};

}  // namespace

bool isomorphic(const Network& a, const Network& b) {
  if (a.vertex_count() != b.vertex_count() || a.arc_count() != b.arc_count() ||
      a.leaf_count() != b.leaf_count() || a.reticulation_count() != b.reticulation_count())
    return false;
  if (a.leaf_labels_sorted() != b.leaf_labels_sorted()) return false;
  return IsoMatcher(a, b).run();
}

// --- GraphBuilder --------------------------------------------------------------------

GraphBuilder::GraphBuilder(const Network& net) {
  const std::size_t n = net.vertex_count();
  parents_.resize(n);
  children_.resize(n);
  label_.resize(n);
  alive_.assign(n, true);
  for (VertexId v = 0; v < n; ++v) {
    auto ps = net.parents(v);
    auto cs = net.children(v);
    parents_[v].assign(ps.begin(), ps.end());
    children_[v].assign(cs.begin(), cs.end());
    if (net.kind(v) == VertexKind::leaf) label_[v] = net.leaf_label(v);
  }
}

VertexId GraphBuilder::add_vertex() {
  parents_.emplace_back();
  children_.emplace_back();
  label_.emplace_back();
  alive_.push_back(true);
  return static_cast<VertexId>(parents_.size() - 1);
}

VertexId GraphBuilder::add_leaf(std::string label) {
  VertexId v = add_vertex();
  label_[v] = std::move(label);
  return v;
}

void GraphBuilder::set_label(VertexId v, std::string label) { label_[v] = std::move(label); }

void GraphBuilder::add_arc(VertexId u, VertexId v) {
  assert(alive_[u] && alive_[v]);
  children_[u].push_back(v);
  parents_[v].push_back(u);
}

namespace {
bool erase_one(std::vector<VertexId>& list, VertexId v) {
  auto it = std::find(list.begin(), list.end(), v);
  if (it == list.end()) return false;
  list.erase(it);
  return true;
}
}  // namespace

bool GraphBuilder::remove_arc(VertexId u, VertexId v) {
  if (!erase_one(children_[u], v)) return false;
  bool ok = erase_one(parents_[v], u);
  assert(ok);
  (void)ok;
  return true;
}

void GraphBuilder::remove_vertex(VertexId v) {
  assert(alive_[v]);
  for (VertexId c : children_[v]) erase_one(parents_[c], v);
  for (VertexId p : parents_[v]) erase_one(children_[p], v);
  children_[v].clear();
  parents_[v].clear();
  label_[v].clear();
  alive_[v] = false;
}

void GraphBuilder::suppress(VertexId v) {
  assert(alive_[v] && parents_[v].size() == 1 && children_[v].size() == 1);
  VertexId p = parents_[v][0], c = children_[v][0];
  remove_arc(p, v);
  remove_arc(v, c);
  add_arc(p, c);
  alive_[v] = false;
  label_[v].clear();
}

VertexId GraphBuilder::subdivide(VertexId u, VertexId v) {
  bool had = remove_arc(u, v);
  assert(had);
  (void)had;
  VertexId s = add_vertex();
  add_arc(u, s);
  add_arc(s, v);
  return s;
}

bool GraphBuilder::has_arc(VertexId u, VertexId v) const {
  return std::find(children_[u].begin(), children_[u].end(), v) != children_[u].end();
}

RawNetwork GraphBuilder::to_raw() const {
  RawNetwork raw;
  std::vector<VertexId> new_id(parents_.size(), kNoVertex);
  VertexId next = 0;
  for (VertexId v = 0; v < parents_.size(); ++v)
    if (alive_[v]) new_id[v] = next++;
  raw.vertex_count = next;
  for (VertexId v = 0; v < parents_.size(); ++v) {
    if (!alive_[v]) continue;
    for (VertexId c : children_[v]) raw.arcs.push_back({new_id[v], new_id[c]});
    if (!label_[v].empty()) raw.leaf_labels.emplace_back(new_id[v], label_[v]);
  }
  return raw;
}

ValidationReport GraphBuilder::validate() const { return noness::validate(to_raw()); }

Network GraphBuilder::freeze() const { return Network::from_raw(to_raw()); }

std::pair<Network, std::vector<VertexId>> GraphBuilder::freeze_with_map() const {
  std::vector<VertexId> map(parents_.size(), kNoVertex);
  VertexId next = 0;
  for (VertexId v = 0; v < parents_.size(); ++v)
    if (alive_[v]) map[v] = next++;
  return {Network::from_raw(to_raw()), std::move(map)};
}

}  // namespace noness
