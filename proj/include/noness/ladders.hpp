#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "noness/network.hpp"

namespace noness {

// How strictly a caterpillar ladder is embedded. The spine of the abstract
// ladder zig-zags from the topmost upper parent down to the lowest lower
// parent; `tight` requires every spine arc to be an arc of the network.
// The relaxed classes each exempt one end of the spine (a directed path
// suffices there) and, for the loose classes, allow the remaining spine arcs
// to be tree paths instead of single arcs:
//   nearly_tight_plus   top spine arc relaxed to a directed path
//   nearly_tight_minus  bottom spine arc relaxed to a directed path
//   loose_up            like plus, and the other spine arcs may be tree paths
//   loose_down          like minus, and the other spine arcs may be tree paths
// With one rung the spine is a single arc which counts as both its top and
// bottom, so the four relaxed classes coincide.
enum class Tightness {
  tight,
  nearly_tight_plus,
  nearly_tight_minus,
  loose_up,
  loose_down,
};

std::string to_string(Tightness t);

// An embedding of the caterpillar ladder with rung reticulations
// v_1, ..., v_k into a network. Index j runs 0-based over the rungs. Each
// rung reticulation has two parents on the spine: the upper parent, from
// which the spine continues toward the next rung, and the lower parent,
// reachable from the upper one. leaves[0] hangs off the lowest lower parent
// by a tree path; leaves[j+1] hangs off reticulations[j] by a tree path.
// The rungs of reticulations[j] are the two arcs into it; the ladder's
// first rung leaves the lowest lower parent and its last rung leaves the
// topmost upper parent.
struct LadderEmbedding {
  std::vector<VertexId> leaves;         // k+1 leaves, outermost (lowest) first
  std::vector<VertexId> reticulations;  // the k rung reticulations, bottom-up
  std::vector<VertexId> lower_parents;  // lower parent of reticulations[j]
  std::vector<VertexId> upper_parents;  // upper parent of reticulations[j]
  Tightness tightness = Tightness::tight;

  std::size_t rung_count() const { return reticulations.size(); }  // k
  Arc lower_rung(std::size_t j) const { return {lower_parents[j], reticulations[j]}; }
  Arc upper_rung(std::size_t j) const { return {upper_parents[j], reticulations[j]}; }
  Arc first_rung() const { return lower_rung(0); }
  Arc last_rung() const { return upper_rung(rung_count() - 1); }

  bool operator==(const LadderEmbedding&) const = default;
};

// True iff cand's vertices embed a caterpillar ladder of cand's declared
// tightness class: the tree paths to the leaves exist, both rungs of every
// reticulation are arcs, and the spine condition of the class holds.
// Throws std::invalid_argument if cand is malformed: sizes inconsistent or
// k = 0, a vertex id out of range, a listed leaf that is not a leaf, or a
// repeated vertex (the embedding must be injective).
bool check_ladder(const Network& net, const LadderEmbedding& cand);

// Searches for a tight caterpillar ladder whose lowest rung reticulation is
// w. Seeds the ladder at w, orients w's parents by reachability (no
// directed path either way means no ladder), then extends upward one rung
// at a time until the spine closes (returning the tight ladder) or the
// next vertex pattern is missing (returning nullopt). Only the lowest rung
// reticulation of a ladder seeds successfully, so callers scan all
// reticulations. Deterministic: leaves are picked by tree_path_leaf.
// Throws std::invalid_argument if net is not tree-child or w is not a
// reticulation.
std::optional<LadderEmbedding> find_tight_ladder(const Network& net, VertexId w);

// One representative per distinct tight ladder, found by seeding
// find_tight_ladder at every reticulation in BFS order. Ladders that share
// any reticulation share all of them, so representatives are deduplicated
// by reticulation set. Throws std::invalid_argument if net is not
// tree-child.
std::vector<LadderEmbedding> all_tight_ladders(const Network& net);

// The non-essential reticulation arcs of a tree-child network: exactly the
// first and last rungs of its tight caterpillar ladders. Throws
// std::invalid_argument if net is not tree-child.
std::set<Arc> nonessential_arcs(const Network& net);

// Which rung simplify removes from each ladder it finds. Either choice
// yields a network displaying the same set of trees.
enum class RungPolicy { delete_first, delete_last };

std::string to_string(RungPolicy p);

struct SimplificationStep {
  // The ladder and deleted rung, in the vertex ids of the intermediate
  // network they were found in (ids shift after every deletion). The
  // ladder's leaf labels are recorded because labels are stable.
  LadderEmbedding ladder;
  Arc deleted;
  std::vector<std::string> leaf_labels;  // outermost first
};

struct SimplificationTrace {
  std::vector<SimplificationStep> steps;
  Network result;
  RungPolicy policy = RungPolicy::delete_first;
};

// Removes all non-essential reticulation arcs: visits the input's
// reticulations in BFS order (shuffled instead when shuffle_seed is given;
// the deletion count and the result's display set do not depend on the
// order) and, for each tight ladder found, deletes the rung selected by
// policy. The result is a tree-child network on the same leaf set that
// displays the same set of trees and has no non-essential arcs; one rung is
// deleted per distinct tight ladder of the input. O(|X|^3) overall.
// Throws std::invalid_argument if net is not tree-child.
SimplificationTrace simplify(const Network& net,
                             RungPolicy policy = RungPolicy::delete_first,
                             std::optional<std::uint64_t> shuffle_seed = std::nullopt);

}  // namespace noness
