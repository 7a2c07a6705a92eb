#pragma once

#include <cstdint>
#include <random>

#include "noness/network.hpp"

namespace noness {

// Uniform draw from [0, n) by rejection sampling; byte-identical across
// platforms for a fixed mt19937_64 state, which
// std::uniform_int_distribution does not guarantee.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n);

// Random rooted binary tree on leaf_count leaves labeled l1, l2, ...
// (zero-padded to a common width), grown by repeatedly subdividing a random
// arc and hanging a fresh leaf off the new vertex.
Network random_tree(std::size_t leaf_count, std::mt19937_64& rng);

// Random tree-child network: a random tree plus reticulation_count
// reticulations. Each reticulation is inserted by subdividing two distinct
// arcs with fresh vertices s and t and adding the arc (s,t); candidate arc
// pairs are redrawn until the result stays acyclic and tree-child. Throws
// std::runtime_error once no placement can be found (in particular whenever
// reticulation_count > leaf_count - 1).
Network random_tree_child(std::size_t leaf_count, std::size_t reticulation_count,
                          std::mt19937_64& rng);

}  // namespace noness
