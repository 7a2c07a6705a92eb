#include "noness/display_oracle.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <unordered_set>

#include "noness/graph_builder.hpp"
#include "noness/newick.hpp"

namespace noness {

namespace {

void check_cap(const Network& net, std::size_t cap) {
  std::size_t k = net.reticulation_count();
  if (k > cap || k > 63) throw cap_exceeded(k, std::min<std::size_t>(cap, 63));
}

void check_choice(const Network& net, std::uint64_t choice) {
  std::size_t k = net.reticulation_count();
  if (k < 64 && choice >= (std::uint64_t(1) << k))
    throw std::invalid_argument("choice " + std::to_string(choice) + " out of range for " +
                                std::to_string(k) + " reticulations");
}

// Applies the cleanup rules to a fixed point: suppress in-1/out-1, delete
// unlabeled in-1/out-0, delete in-0/out-1.
void cleanup_subdivision(GraphBuilder& g) {
  std::deque<VertexId> work;
  std::vector<char> queued(g.size(), 0);
  auto enqueue = [&](VertexId v) {
    if (g.alive(v) && !queued[v]) {
      queued[v] = 1;
      work.push_back(v);
    }
  };
  for (VertexId v = 0; v < g.size(); ++v)
    if (g.alive(v)) enqueue(v);
  while (!work.empty()) {
    VertexId v = work.front();
    work.pop_front();
    queued[v] = 0;
    if (!g.alive(v)) continue;
    std::size_t in = g.parents(v).size();
    std::size_t out = g.children(v).size();
    if (in == 1 && out == 1 && g.label(v).empty()) {
      VertexId p = g.parents(v)[0], c = g.children(v)[0];
      g.suppress(v);
      enqueue(p);
      enqueue(c);
    } else if (in == 1 && out == 0 && g.label(v).empty()) {
      VertexId p = g.parents(v)[0];
      g.remove_vertex(v);
      enqueue(p);
    } else if (in == 0 && out == 1) {
      VertexId c = g.children(v)[0];
      g.remove_vertex(v);
      enqueue(c);
    }
  }
}

}  // namespace

std::uint64_t embedding_count(const Network& net, std::size_t cap) {
  check_cap(net, cap);
  return std::uint64_t(1) << net.reticulation_count();
}

std::vector<Arc> embedding_arcs(const Network& net, std::uint64_t choice) {
  check_choice(net, choice);
  std::vector<Arc> dropped;
  const auto& retics = net.reticulations();
  for (std::size_t i = 0; i < retics.size(); ++i)
    dropped.push_back({net.parents(retics[i])[1 - ((choice >> i) & 1)], retics[i]});
  std::vector<Arc> arcs;
  arcs.reserve(net.arc_count() - retics.size());
  for (const Arc& a : net.arcs())
    if (std::find(dropped.begin(), dropped.end(), a) == dropped.end()) arcs.push_back(a);
  std::sort(arcs.begin(), arcs.end());
  return arcs;
}

std::vector<Embedding> enumerate_embeddings(const Network& net, std::size_t cap) {
  std::uint64_t total = embedding_count(net, cap);
  std::vector<Embedding> out;
  out.reserve(total);
  for (std::uint64_t choice = 0; choice < total; ++choice)
    out.push_back({choice, embedding_arcs(net, choice)});
  return out;
}

ResolvedEmbedding resolve_embedding(const Network& net, std::uint64_t choice) {
  check_choice(net, choice);
  const std::size_t n = net.vertex_count();

  GraphBuilder g(net);
  {
    const auto& retics = net.reticulations();
    for (std::size_t i = 0; i < retics.size(); ++i) {
      VertexId other = net.parents(retics[i])[1 - ((choice >> i) & 1)];
      g.remove_arc(other, retics[i]);
    }
  }

  // Leaves below each vertex in the surviving graph (a tree on all vertices:
  // every non-root keeps in-degree exactly one).
  std::vector<std::uint32_t> count(n, 0);
  const auto& topo = net.topological_order();
  for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
    VertexId v = *it;
    if (!g.label(v).empty()) {
      count[v] = 1;
      continue;
    }
    for (VertexId c : g.children(v)) count[v] += count[c];
  }

  // Top of the embedded subdivision: the lowest vertex above all of X.
  const std::uint32_t all = static_cast<std::uint32_t>(net.leaf_count());
  VertexId top = net.root();
  assert(count[top] == all);
  for (;;) {
    VertexId next = kNoVertex;
    for (VertexId c : g.children(top))
      if (count[c] == all) next = c;
    if (next == kNoVertex) break;
    top = next;
  }

  // The subdivision's arcs: surviving arcs below top that still lead to a leaf.
  std::vector<Arc> skeleton;
  std::deque<VertexId> stack{top};
  while (!stack.empty()) {
    VertexId v = stack.back();
    stack.pop_back();
    for (VertexId c : g.children(v)) {
      if (count[c] == 0) continue;
      skeleton.push_back({v, c});
      stack.push_back(c);
    }
  }
  std::sort(skeleton.begin(), skeleton.end());

  cleanup_subdivision(g);
  Network tree = g.freeze();
  if (!tree.is_tree() || tree.leaf_count() != net.leaf_count())
    throw std::logic_error("resolve_embedding: resolution did not produce an X-tree");
  return {std::move(tree), std::move(skeleton)};
}

std::set<std::string> DisplayMultiset::distinct() const {
  std::set<std::string> out;
  for (const auto& entry : multiplicity) out.insert(entry.first);
  return out;
}

DisplayMultiset display_multiset(const Network& net, std::size_t cap) {
  std::uint64_t total = embedding_count(net, cap);
  DisplayMultiset ms;
  ms.total_count = total;
  for (std::uint64_t choice = 0; choice < total; ++choice) {
    ResolvedEmbedding r = resolve_embedding(net, choice);
    ++ms.multiplicity[canonical_tree_string(r.tree)];
  }
  return ms;
}

Network restrict_tree(const Network& tree, const std::vector<std::string>& labels) {
  if (!tree.is_tree())
    throw std::invalid_argument("restrict_tree: input has reticulations");
  if (labels.empty()) throw std::invalid_argument("restrict_tree: empty label set");
  std::unordered_set<std::string> keep;
  for (const std::string& label : labels) {
    if (!tree.leaf_by_label(label))
      throw std::invalid_argument("restrict_tree: '" + label + "' is not a leaf of the tree");
    keep.insert(label);
  }
  GraphBuilder g(tree);
  for (VertexId leaf : tree.leaves())
    if (!keep.count(tree.leaf_label(leaf))) g.remove_vertex(leaf);
  cleanup_subdivision(g);
  return g.freeze();
}

bool displays(const Network& net, const Network& tree, std::size_t cap) {
  if (!tree.is_tree()) throw std::invalid_argument("displays: second argument must be a tree");
  std::vector<std::string> sub = tree.leaf_labels_sorted();
  for (const std::string& label : sub)
    if (!net.leaf_by_label(label))
      throw std::invalid_argument("displays: leaf '" + label +
                                  "' does not occur in the network");
  std::uint64_t total = embedding_count(net, cap);
  const std::string target = canonical_tree_string(tree);
  std::set<std::string> seen;  // full trees already restricted
  for (std::uint64_t choice = 0; choice < total; ++choice) {
    Network full = resolve_embedding(net, choice).tree;
    if (!seen.insert(canonical_tree_string(full)).second) continue;
    if (canonical_tree_string(restrict_tree(full, sub)) == target) return true;
  }
  return false;
}

bool is_essential_bruteforce(const Network& net, const Arc& e, std::size_t cap) {
  if (!net.is_reticulation_arc(e))
    throw std::invalid_argument("is_essential_bruteforce: (" + std::to_string(e.tail) + "," +
                                std::to_string(e.head) + ") is a tree arc");
  Network minus =
      net.is_tree_child() ? delete_arc_tree_child(net, e) : full_simplification(net, e);
  std::set<std::string> before = display_multiset(net, cap).distinct();
  std::set<std::string> after = display_multiset(minus, cap).distinct();
  for (const std::string& t : before)
    if (!after.count(t)) return true;
  return false;
}

bool is_essential_by_definition(const Network& net, const Arc& e, std::size_t cap) {
  if (!net.has_arc(e.tail, e.head))
    throw std::invalid_argument("is_essential_by_definition: (" + std::to_string(e.tail) +
                                "," + std::to_string(e.head) + ") is not an arc");
  std::uint64_t total = embedding_count(net, cap);
  // for each displayed tree: do all embeddings producing it use e?
  std::map<std::string, bool> always_uses;
  for (std::uint64_t choice = 0; choice < total; ++choice) {
    ResolvedEmbedding r = resolve_embedding(net, choice);
    bool uses = std::binary_search(r.skeleton.begin(), r.skeleton.end(), e);
    auto [it, inserted] = always_uses.emplace(canonical_tree_string(r.tree), uses);
    if (!inserted) it->second = it->second && uses;
  }
  for (const auto& entry : always_uses)
    if (entry.second) return true;
  return false;
}

bool display_sets_equal(const Network& a, const Network& b, std::size_t cap) {
  if (a.leaf_labels_sorted() != b.leaf_labels_sorted())
    throw std::invalid_argument("display_sets_equal: leaf sets differ");
  return display_multiset(a, cap).distinct() == display_multiset(b, cap).distinct();
}

}  // namespace noness
