#include "noness/gadget.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

#include "noness/graph_builder.hpp"

namespace noness {

namespace {

std::string fresh_label(std::string base, const std::vector<std::string>& taken) {
  while (std::find(taken.begin(), taken.end(), base) != taken.end()) base += '_';
  return base;
}

// Pastes a disconnected copy of src into g. Leaves are pasted unlabeled:
// every copy leaf is merged into a label chain before the gadget freezes.
std::vector<VertexId> paste_copy(GraphBuilder& g, const Network& src) {
  std::vector<VertexId> map(src.vertex_count());
  for (VertexId v = 0; v < src.vertex_count(); ++v) map[v] = g.add_vertex();
  for (const Arc& a : src.arcs()) g.add_arc(map[a.tail], map[a.head]);
  return map;
}

}  // namespace

std::string to_string(RefinementOrder order) {
  return order == RefinementOrder::copy_index ? "copy_index" : "reversed";
}

GadgetInstance build_gadget(const Network& n1, const Network& n2,
                            RefinementOrder order) {
  const std::vector<std::string> labels = n1.leaf_labels_sorted();
  if (labels != n2.leaf_labels_sorted())
    throw std::invalid_argument("build_gadget: inputs are on different leaf sets");
  const std::size_t n = labels.size();

  GraphBuilder g;

  // caterpillar spine; spine[0] will parent the two joined copies
  std::vector<VertexId> spine(n + 1);
  for (VertexId& s : spine) s = g.add_vertex();
  for (std::size_t i = 1; i <= n; ++i) g.add_arc(spine[i], spine[i - 1]);

  // one copy of the first input, n+1 copies of the second
  std::vector<std::vector<VertexId>> copy_map;
  std::vector<VertexId> roots;
  copy_map.push_back(paste_copy(g, n1));
  roots.push_back(copy_map[0][n1.root()]);
  for (std::size_t c = 1; c <= n + 1; ++c) {
    copy_map.push_back(paste_copy(g, n2));
    roots.push_back(copy_map[c][n2.root()]);
  }
  g.add_arc(spine[0], roots[0]);
  g.add_arc(spine[0], roots[1]);
  for (std::size_t c = 2; c <= n + 1; ++c) g.add_arc(spine[c - 1], roots[c]);

  // join the two lowest copies through a new reticulation above leaf x,
  // then hang leaf y just above the first copy's side
  const std::string x_label = fresh_label("x", labels);
  const std::string y_label = fresh_label("y", labels);
  VertexId v0 = g.subdivide(spine[0], roots[0]);
  VertexId v1 = g.subdivide(spine[0], roots[1]);
  VertexId px = g.add_vertex();
  VertexId x = g.add_leaf(x_label);
  g.add_arc(v0, px);
  g.add_arc(v1, px);
  g.add_arc(px, x);
  VertexId py = g.subdivide(spine[0], v0);
  VertexId y = g.add_leaf(y_label);
  g.add_arc(py, y);

  // merge equally-labeled leaves across all copies into one reticulation
  // chain per label, feeding a single fresh leaf
  std::vector<std::vector<VertexId>> chains;
  for (const std::string& label : labels) {
    std::vector<VertexId> sources;
    for (std::size_t c = 0; c <= n + 1; ++c) {
      const Network& src = c == 0 ? n1 : n2;
      VertexId pasted = copy_map[c][*src.leaf_by_label(label)];
      sources.push_back(g.parents(pasted)[0]);
      g.remove_vertex(pasted);
      copy_map[c][*src.leaf_by_label(label)] = kNoVertex;
    }
    if (order == RefinementOrder::reversed)
      std::reverse(sources.begin(), sources.end());

    std::vector<VertexId> chain;
    chain.push_back(g.add_vertex());
    g.add_arc(sources[0], chain.back());
    g.add_arc(sources[1], chain.back());
    for (std::size_t j = 2; j < sources.size(); ++j) {
      VertexId next = g.add_vertex();
      g.add_arc(chain.back(), next);
      g.add_arc(sources[j], next);
      chain.push_back(next);
    }
    g.add_arc(chain.back(), g.add_leaf(label));
    chains.push_back(std::move(chain));
  }

  auto [net, idmap] = g.freeze_with_map();
  auto tr = [&idmap](VertexId b) { return b == kNoVertex ? kNoVertex : idmap[b]; };
  auto tr_all = [&tr](const std::vector<VertexId>& vs) {
    std::vector<VertexId> mapped;
    for (VertexId v : vs) mapped.push_back(tr(v));
    return mapped;
  };

  std::vector<GadgetCopy> second_copies;
  for (std::size_t c = 1; c <= n + 1; ++c)
    second_copies.push_back({tr(copy_map[c][n2.root()]), tr_all(copy_map[c])});
  std::vector<std::vector<VertexId>> mapped_chains;
  for (const std::vector<VertexId>& chain : chains)
    mapped_chains.push_back(tr_all(chain));

  return {std::move(net),
          {tr(v0), tr(px)},
          {tr(copy_map[0][n1.root()]), tr_all(copy_map[0])},
          std::move(second_copies),
          tr_all(spine),
          std::move(mapped_chains),
          tr(v0),
          tr(v1),
          tr(px),
          tr(py),
          tr(x),
          tr(y),
          x_label,
          y_label};
}

bool display_set_containment_bruteforce(const Network& n1, const Network& n2,
                                        std::size_t cap) {
  if (n1.leaf_labels_sorted() != n2.leaf_labels_sorted())
    throw std::invalid_argument(
        "display_set_containment: inputs are on different leaf sets");
  const DisplayMultiset inner = display_multiset(n1, cap);
  const DisplayMultiset outer = display_multiset(n2, cap);
  return std::all_of(inner.multiplicity.begin(), inner.multiplicity.end(),
                     [&outer](const auto& entry) {
                       return outer.multiplicity.count(entry.first) != 0;
                     });
}

bool verify_reduction(const Network& n1, const Network& n2,
                      RefinementOrder order, std::size_t cap) {
  GadgetInstance gadget = build_gadget(n1, n2, order);
  if (gadget.net.reticulation_count() > cap)
    throw cap_exceeded(gadget.net.reticulation_count(), cap);
  bool contained = display_set_containment_bruteforce(n1, n2, cap);
  bool essential =
      is_essential_bruteforce(gadget.net, gadget.distinguished_arc, cap);
  return contained == !essential;
}

}  // namespace noness
