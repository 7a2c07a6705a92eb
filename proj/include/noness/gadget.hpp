#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "noness/display_oracle.hpp"
#include "noness/network.hpp"

namespace noness {

// How the merged parent arcs are threaded into each per-label reticulation
// chain: copy_index feeds the first input's arc in at the top of the chain
// and the remaining copies in order; reversed feeds them in bottom-up. Both
// orders produce a valid network with the same contracted shape.
enum class RefinementOrder { copy_index, reversed };

std::string to_string(RefinementOrder order);

// One input network embedded inside a coupling gadget.
struct GadgetCopy {
  // Root of the copy inside the gadget, or kNoVertex when the input was a
  // single labeled vertex (its only vertex is merged into a label chain).
  VertexId root = kNoVertex;
  // Gadget id per source-network id; kNoVertex for the merged leaves.
  std::vector<VertexId> vertices;
};

// A network on X ∪ {x, y} that couples two networks on X so that one
// designated reticulation arc is non-essential exactly when every tree
// displayed by the first input is also displayed by the second. The gadget
// hangs one copy of the first input and |X|+1 copies of the second off a
// caterpillar spine, merges equally-labeled leaves across copies into
// per-label reticulation chains, and joins the two lowest copies through a
// fresh reticulation above a new leaf x (plus a sibling leaf y).
struct GadgetInstance {
  Network net;
  Arc distinguished_arc;  // the candidate arc; its head is x's parent

  GadgetCopy first_copy;                // the embedded first input
  std::vector<GadgetCopy> second_copies;  // |X|+1 copies of the second input

  // Caterpillar internals, bottom-up; spine[0] is the vertex whose subtree
  // holds both joined copies, spine.back() is the gadget root.
  std::vector<VertexId> spine;
  // Per label (in leaf_labels_sorted order of the inputs): the reticulation
  // chain the merged leaves feed into, topmost first; the chain's last
  // vertex is the parent of the surviving leaf with that label.
  std::vector<std::vector<VertexId>> merge_chains;

  VertexId first_parent = kNoVertex;   // parent of the first copy's root
  VertexId second_parent = kNoVertex;  // parent of the lowest second copy's root
  VertexId x_parent = kNoVertex;       // the joining reticulation, above x
  VertexId y_parent = kNoVertex;       // above y and first_parent
  VertexId x_leaf = kNoVertex;
  VertexId y_leaf = kNoVertex;
  std::string x_label;  // "x", with "_" appended until fresh
  std::string y_label;
};

// Builds the coupling gadget for two networks on the same leaf set.
// Deterministic: equal inputs and order give an identical instance. The
// result validates as a network on X ∪ {x_label, y_label} and has
// r1 + (|X|+1)·r2 + 1 + |X|·(|X|+1) reticulations, so brute-force checks
// are only feasible for tiny inputs. Throws std::invalid_argument if the
// inputs' leaf sets differ.
GadgetInstance build_gadget(const Network& n1, const Network& n2,
                            RefinementOrder order = RefinementOrder::copy_index);

// True iff every tree displayed by n1 is also displayed by n2 (sets, not
// multiplicities). Throws std::invalid_argument on leaf-set mismatch and
// cap_exceeded if either network has more than cap reticulations.
bool display_set_containment_bruteforce(const Network& n1, const Network& n2,
                                        std::size_t cap = kDefaultEnumerationCap);

// Exercises the gadget's defining equivalence on one input pair: builds the
// gadget and returns whether
//   display_set_containment_bruteforce(n1, n2)
//     == !is_essential_bruteforce(gadget.net, gadget.distinguished_arc).
// A sound construction returns true for every pair. Throws cap_exceeded
// before enumerating if the gadget's reticulation count exceeds cap.
bool verify_reduction(const Network& n1, const Network& n2,
                      RefinementOrder order = RefinementOrder::copy_index,
                      std::size_t cap = kDefaultEnumerationCap);

}  // namespace noness
