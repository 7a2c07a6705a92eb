#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "noness/network.hpp"

namespace noness {

// Every brute-force routine below enumerates all 2^k per-reticulation
// choices. The cap bounds k; raise it knowingly.
inline constexpr std::size_t kDefaultEnumerationCap = 20;

class cap_exceeded : public std::runtime_error {
 public:
  cap_exceeded(std::size_t reticulation_count, std::size_t cap)
      : std::runtime_error("brute force over " + std::to_string(reticulation_count) +
                           " reticulations needs 2^" + std::to_string(reticulation_count) +
                           " enumerations, above the cap of 2^" + std::to_string(cap)),
        reticulation_count_(reticulation_count),
        cap_(cap) {}
  std::size_t reticulation_count() const { return reticulation_count_; }
  std::size_t cap() const { return cap_; }

 private:
  std::size_t reticulation_count_;
  std::size_t cap_;
};

// One per-reticulation in-arc selection. Bit i of choice (least significant
// first) picks parents(reticulations()[i])[bit] as the surviving in-arc.
struct Embedding {
  std::uint64_t choice = 0;
  std::vector<Arc> arcs;  // arcs surviving the deletion, sorted
};

// 2^k; throws cap_exceeded when the network has more than cap reticulations.
std::uint64_t embedding_count(const Network& net, std::size_t cap = kDefaultEnumerationCap);

// The arcs surviving choice: every arc except the non-chosen in-arc of each
// reticulation. Sorted. (For tree-child networks this is exactly all tree
// arcs plus one in-arc per reticulation.)
std::vector<Arc> embedding_arcs(const Network& net, std::uint64_t choice);

// All 2^k embeddings in binary-counter order of choice. Materializes the
// whole list; meant for small k. The per-choice helpers above stream.
std::vector<Embedding> enumerate_embeddings(const Network& net,
                                            std::size_t cap = kDefaultEnumerationCap);

struct ResolvedEmbedding {
  Network tree;               // the displayed X-tree
  std::vector<Arc> skeleton;  // original-net arcs of the tree's embedding, sorted
};

// Deletes the non-chosen in-arc of every reticulation, then repeatedly
// suppresses in-1/out-1 vertices, deletes unlabeled in-1/out-0 vertices and
// deletes in-0/out-1 vertices until none remains. The result is always a
// phylogenetic tree on all of X. skeleton holds the arcs of the embedded
// subdivision of that tree: the surviving arcs that lie on a path from the
// subdivision's top vertex down to a leaf.
ResolvedEmbedding resolve_embedding(const Network& net, std::uint64_t choice);

struct DisplayMultiset {
  std::map<std::string, std::uint64_t> multiplicity;  // canonical tree -> choices
  std::uint64_t total_count = 0;                      // = 2^k
  std::set<std::string> distinct() const;
};

// Canonical strings of all displayed trees with choice multiplicities.
DisplayMultiset display_multiset(const Network& net, std::size_t cap = kDefaultEnumerationCap);

// The minimal subtree of tree connecting the leaves named in labels, with
// in-1/out-1 vertices suppressed. labels must be a nonempty subset of tree's
// leaf labels (duplicates are ignored); throws std::invalid_argument
// otherwise or when tree has reticulations.
Network restrict_tree(const Network& tree, const std::vector<std::string>& labels);

// True iff some embedding of net resolves to a tree whose restriction to
// tree's leaf set equals tree. tree must be a phylogenetic tree on a subset
// of net's leaf set; throws std::invalid_argument otherwise.
bool displays(const Network& net, const Network& tree,
              std::size_t cap = kDefaultEnumerationCap);

// True iff net displays a tree that net-minus-e does not display, where
// net-minus-e is delete_arc_tree_child(net, e) for tree-child networks and
// full_simplification(net, e) otherwise. e must be a reticulation arc.
bool is_essential_bruteforce(const Network& net, const Arc& e,
                             std::size_t cap = kDefaultEnumerationCap);

// The definitional route, valid for any arc e: true iff some displayed tree's
// embeddings all use e (i.e. for some tree, every choice resolving to it has
// e in its skeleton). Agrees with is_essential_bruteforce on reticulation
// arcs.
bool is_essential_by_definition(const Network& net, const Arc& e,
                                std::size_t cap = kDefaultEnumerationCap);

// Set equality (multiplicities ignored) of the displayed trees. The two
// networks must be on the same leaf set.
bool display_sets_equal(const Network& a, const Network& b,
                        std::size_t cap = kDefaultEnumerationCap);

}  // namespace noness
