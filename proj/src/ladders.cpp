#include "noness/ladders.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

#include "noness/random_networks.hpp"

namespace noness {

namespace {

// One spine position: the lower or upper parent of rung `index` (1-based).
struct SpineRef {
  bool lower;
  std::size_t index;
};

// The spine from the topmost upper parent down to the lowest lower parent:
// u_k, u_{k-1}, l_k, u_{k-2}, l_{k-1}, ..., u_1, l_2, l_1 (u = upper,
// l = lower). For k = 1 this degenerates to u_1, l_1.
std::vector<SpineRef> spine_sequence(std::size_t k) {
  std::vector<SpineRef> seq;
  seq.push_back({false, k});
  for (std::size_t i = k - 1; i >= 1; --i) {
    seq.push_back({false, i});
    seq.push_back({true, i + 1});
  }
  seq.push_back({true, 1});
  return seq;
}

VertexId resolve(const LadderEmbedding& lad, SpineRef r) {
  return r.lower ? lad.lower_parents[r.index - 1] : lad.upper_parents[r.index - 1];
}

// The unique child of v other than skip; v must have exactly two children.
VertexId other_child(const Network& net, VertexId v, VertexId skip) {
  auto kids = net.children(v);
  return kids[0] == skip ? kids[1] : kids[0];
}

}  // namespace

std::string to_string(Tightness t) {
  switch (t) {
    case Tightness::tight: return "tight";
    case Tightness::nearly_tight_plus: return "nearly_tight_plus";
    case Tightness::nearly_tight_minus: return "nearly_tight_minus";
    case Tightness::loose_up: return "loose_up";
    case Tightness::loose_down: return "loose_down";
  }
  return "?";
}

std::string to_string(RungPolicy p) {
  return p == RungPolicy::delete_first ? "first" : "last";
}

bool check_ladder(const Network& net, const LadderEmbedding& cand) {
  const std::size_t k = cand.reticulations.size();
  if (k == 0 || cand.leaves.size() != k + 1 || cand.lower_parents.size() != k ||
      cand.upper_parents.size() != k)
    throw std::invalid_argument("check_ladder: candidate field sizes are inconsistent");
  std::vector<VertexId> all;
  for (const auto* list :
       {&cand.leaves, &cand.reticulations, &cand.lower_parents, &cand.upper_parents})
    all.insert(all.end(), list->begin(), list->end());
  for (VertexId v : all)
    if (v >= net.vertex_count())
      throw std::invalid_argument("check_ladder: vertex id v" + std::to_string(v) +
                                  " out of range");
  std::sort(all.begin(), all.end());
  if (std::adjacent_find(all.begin(), all.end()) != all.end())
    throw std::invalid_argument("check_ladder: embedding is not injective");
  for (VertexId leaf : cand.leaves)
    if (!net.is_leaf(leaf))
      throw std::invalid_argument("check_ladder: v" + std::to_string(leaf) + " is not a leaf");

  // tree paths from the lowest lower parent and from every rung
  // reticulation down to their leaves
  if (!has_tree_path(net, cand.lower_parents[0], cand.leaves[0])) return false;
  for (std::size_t j = 0; j < k; ++j)
    if (!has_tree_path(net, cand.reticulations[j], cand.leaves[j + 1])) return false;

  // both rungs of every reticulation are arcs (two distinct in-arcs force
  // the reticulation kind, so no extra kind check is needed)
  for (std::size_t j = 0; j < k; ++j)
    if (!net.has_arc(cand.lower_parents[j], cand.reticulations[j]) ||
        !net.has_arc(cand.upper_parents[j], cand.reticulations[j]))
      return false;

  // the spine condition of the declared class; with one rung the single
  // spine arc is both top and bottom, so the four relaxed classes coincide
  const auto seq = spine_sequence(k);
  const std::size_t arc_count = seq.size() - 1;
  for (std::size_t t = 0; t < arc_count; ++t) {
    VertexId from = resolve(cand, seq[t]);
    VertexId to = resolve(cand, seq[t + 1]);
    const bool top = t == 0;
    const bool bottom = t == arc_count - 1;
    bool ok = false;
    switch (cand.tightness) {
      case Tightness::tight:
        ok = net.has_arc(from, to);
        break;
      case Tightness::nearly_tight_plus:
        ok = top ? has_directed_path(net, from, to) : net.has_arc(from, to);
        break;
      case Tightness::nearly_tight_minus:
        ok = bottom ? has_directed_path(net, from, to) : net.has_arc(from, to);
        break;
      case Tightness::loose_up:
        ok = top ? has_directed_path(net, from, to) : has_tree_path(net, from, to);
        break;
      case Tightness::loose_down:
        ok = bottom ? has_directed_path(net, from, to) : has_tree_path(net, from, to);
        break;
    }
    if (!ok) return false;
  }
  return true;
}

std::optional<LadderEmbedding> find_tight_ladder(const Network& net, VertexId w) {
  if (!is_tree_child(net))
    throw std::invalid_argument("find_tight_ladder: network is not tree-child");
  if (w >= net.vertex_count() || !net.is_reticulation(w))
    throw std::invalid_argument("find_tight_ladder: v" + std::to_string(w) +
                                " is not a reticulation");

  // orient w's parents: the upper one reaches the lower one
  VertexId first = net.parents(w)[0];
  VertexId second = net.parents(w)[1];
  VertexId lower, upper;
  if (has_directed_path(net, first, second)) {
    upper = first;
    lower = second;
  } else if (has_directed_path(net, second, first)) {
    upper = second;
    lower = first;
  } else {
    return std::nullopt;  // incomparable parents: no ladder has w as its lowest rung
  }

  LadderEmbedding lad;
  lad.tightness = Tightness::tight;
  lad.reticulations.push_back(w);
  lad.lower_parents.push_back(lower);
  lad.upper_parents.push_back(upper);
  lad.leaves.push_back(net.tree_path_leaf(lower));
  lad.leaves.push_back(net.tree_path_leaf(w));

  for (;;) {
    const std::size_t i = lad.reticulations.size();  // rungs found so far
    const VertexId top_upper = lad.upper_parents[i - 1];
    // the spine vertex the ladder must reconnect to for the spine to close
    // one step below the current upper parent
    const VertexId below = i == 1 ? lad.lower_parents[0] : lad.upper_parents[i - 2];
    const VertexId across = other_child(net, top_upper, lad.reticulations[i - 1]);

    // spine closes: for one rung the lower parent is itself the upper
    // parent's other child (tree-child rules out a non-tree vertex there);
    // for more rungs an arc down to the previous upper parent suffices
    if (i == 1 ? across == below : net.has_arc(top_upper, below)) return lad;

    // extension: across must be a tree vertex sitting over both the spine
    // vertex below and a fresh rung reticulation
    if (net.kind(across) != VertexKind::tree) return std::nullopt;
    if (!net.has_arc(across, below)) return std::nullopt;
    const VertexId next = other_child(net, across, below);
    if (!net.is_reticulation(next)) return std::nullopt;
    if (std::find(lad.reticulations.begin(), lad.reticulations.end(), next) !=
        lad.reticulations.end())
      throw std::logic_error("find_tight_ladder: revisited a reticulation");

    lad.lower_parents.push_back(across);
    lad.reticulations.push_back(next);
    lad.upper_parents.push_back(net.parents(next)[0] == across ? net.parents(next)[1]
                                                               : net.parents(next)[0]);
    lad.leaves.push_back(net.tree_path_leaf(next));
  }
}

std::vector<LadderEmbedding> all_tight_ladders(const Network& net) {
  if (!is_tree_child(net))
    throw std::invalid_argument("all_tight_ladders: network is not tree-child");
  std::vector<LadderEmbedding> out;
  std::set<std::vector<VertexId>> seen;
  for (VertexId w : net.reticulations_bfs()) {
    auto lad = find_tight_ladder(net, w);
    if (!lad) continue;
    std::vector<VertexId> key = lad->reticulations;
    std::sort(key.begin(), key.end());
    if (seen.insert(std::move(key)).second) out.push_back(std::move(*lad));
  }
  return out;
}

std::set<Arc> nonessential_arcs(const Network& net) {
  std::set<Arc> out;
  for (const LadderEmbedding& lad : all_tight_ladders(net)) {
    out.insert(lad.first_rung());
    out.insert(lad.last_rung());
  }
  return out;
}

SimplificationTrace simplify(const Network& net, RungPolicy policy,
                             std::optional<std::uint64_t> shuffle_seed) {
  if (!is_tree_child(net))
    throw std::invalid_argument("simplify: network is not tree-child");

  std::vector<VertexId> seeds = net.reticulations_bfs();
  if (shuffle_seed) {
    std::mt19937_64 rng(*shuffle_seed);
    for (std::size_t i = seeds.size(); i > 1; --i)
      std::swap(seeds[i - 1], seeds[uniform_below(rng, i)]);
  }

  Network current = net;
  std::vector<SimplificationStep> steps;
  for (VertexId& seed : seeds) {
    if (seed == kNoVertex || !current.is_reticulation(seed)) continue;
    auto lad = find_tight_ladder(current, seed);
    if (!lad) continue;
    Arc target = policy == RungPolicy::delete_first ? lad->first_rung() : lad->last_rung();
    SimplificationStep step{std::move(*lad), target, {}};
    for (VertexId leaf : step.ladder.leaves)
      step.leaf_labels.push_back(current.leaf_label(leaf));
    SurgeryResult res = delete_arc_tree_child_mapped(current, target);
    current = std::move(res.net);
    for (VertexId& pending : seeds)
      if (pending != kNoVertex) pending = res.old_to_new[pending];
    steps.push_back(std::move(step));
  }

  // deleting one rung per ladder must leave no ladder behind
  for (VertexId w : current.reticulations_bfs())
    if (find_tight_ladder(current, w))
      throw std::logic_error("simplify: a tight caterpillar ladder survived");

  return {std::move(steps), std::move(current), policy};
}

}  // namespace noness
