#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "noness/network.hpp"

namespace noness {

// Syntax error with the byte offset of the offending character in the text
// handed to the parser. What offset() points into (a single line or a whole
// document) is stated on each parsing function.
class parse_error : public std::runtime_error {
 public:
  parse_error(const std::string& message, std::size_t offset)
      : std::runtime_error(message + " (offset " + std::to_string(offset) + ")"),
        message_(message),
        offset_(offset) {}
  // The message without the offset suffix that what() appends.
  const std::string& message() const { return message_; }
  std::size_t offset() const { return offset_; }

 private:
  std::string message_;
  std::size_t offset_;
};

// Parses one network in extended Newick and validates it:
//   (left,right)   tree vertex with two children
//   (child)#H7     defines reticulation #H7 around its single child
//   #H7            further reference to that reticulation
//   label          leaf; either a run without ()[]{space},;:#' or a
//                  single-quoted string where '' stands for one quote
// Whitespace between tokens is ignored; the network ends with ';'.
// Throws parse_error (offset into text) on syntax errors, including hybrid
// tags that are defined twice or never defined, and std::invalid_argument
// when the parsed graph is not a valid network (wrong degrees, duplicate
// leaf labels, directed cycles, ...).
Network parse_network(std::string_view text);

// As parse_network but skips both the undefined-tag check and validation;
// useful for reporting validate() findings on malformed input.
RawNetwork parse_raw(std::string_view text);

// One network per line; blank and whitespace-only lines are skipped. Thrown
// errors are prefixed with "line N: " and carry offsets relative to that
// line.
std::vector<Network> parse_document(std::string_view text);

// Serializes in the dialect above, with no trailing newline. Children are
// emitted in stored order (smallest-reachable-leaf label, then vertex id),
// hybrid tags are numbered 1,2,... in traversal encounter order, and each
// reticulation is printed in full at its first visit. Deterministic for a
// given Network value; parse_network(to_newick(n)) is isomorphic to n.
std::string to_newick(const Network& net);

// Canonical leaf-label-only form for trees: at every vertex the two child
// strings are emitted in lexicographic order, so two trees produce the same
// string iff they are isomorphic. Throws std::invalid_argument if the
// network has reticulations.
std::string canonical_tree_string(const Network& net);

}  // namespace noness
