// Release gate: nine end-to-end checks over random corpora, each printed as
// one [PASS]/[FAIL] line with the measured quantities. Exits nonzero if any
// check fails. Runtime bounds are asserted where a check carries one.
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "noness/display_oracle.hpp"
#include "noness/gadget.hpp"
#include "noness/graph_builder.hpp"
#include "noness/ladders.hpp"
#include "noness/network.hpp"
#include "noness/newick.hpp"
#include "noness/random_networks.hpp"
#include "support/generators.hpp"

using namespace noness;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Failure {
  std::string message;
};

void require(bool ok, const std::string& message) {
  if (!ok) throw Failure{message};
}

std::string fmt(const char* spec, double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, value);
  return buf;
}

// The non-essential reticulation arcs found by exhaustive display-set
// comparison, independent of the ladder characterization.
std::set<Arc> nonessential_by_bruteforce(const Network& net) {
  std::set<Arc> out;
  for (const Arc& e : net.reticulation_arcs())
    if (!is_essential_bruteforce(net, e)) out.insert(e);
  return out;
}

// True when no reticulation's two parents are joined by an arc, i.e. the
// shortest underlying cycle has length at least four.
bool girth_at_least_4(const Network& net) {
  for (VertexId r : net.reticulations()) {
    auto ps = net.parents(r);
    if (net.has_arc(ps[0], ps[1]) || net.has_arc(ps[1], ps[0])) return false;
  }
  return true;
}

// Recursive tree isomorphism by child pairing; deliberately avoids the
// canonical string so the two can cross-check each other.
bool iso_trees(const Network& a, VertexId u, const Network& b, VertexId v) {
  const bool leaf_a = a.is_leaf(u), leaf_b = b.is_leaf(v);
  if (leaf_a != leaf_b) return false;
  if (leaf_a) return a.leaf_label(u) == b.leaf_label(v);
  auto ca = a.children(u);
  auto cb = b.children(v);
  return (iso_trees(a, ca[0], b, cb[0]) && iso_trees(a, ca[1], b, cb[1])) ||
         (iso_trees(a, ca[0], b, cb[1]) && iso_trees(a, ca[1], b, cb[0]));
}

bool iso_trees(const Network& a, const Network& b) {
  return iso_trees(a, a.root(), b, b.root());
}

// Backtracking vertex bijection for general networks. Reticulations are
// reached from both parents, so the partial map enforces global consistency
// and is rolled back around each failed child pairing.
struct IsoState {
  std::vector<VertexId> fwd, rev;
};

bool match(const Network& a, const Network& b, VertexId u, VertexId v,
           IsoState& st) {
  if (st.fwd[u] != kNoVertex || st.rev[v] != kNoVertex)
    return st.fwd[u] == v && st.rev[v] == u;
  if (a.kind(u) != b.kind(v)) return false;
  if (a.is_leaf(u)) {
    if (a.leaf_label(u) != b.leaf_label(v)) return false;
    st.fwd[u] = v;
    st.rev[v] = u;
    return true;
  }
  const IsoState save = st;
  st.fwd[u] = v;
  st.rev[v] = u;
  auto ca = a.children(u);
  auto cb = b.children(v);
  if (ca.size() == 1) {
    if (match(a, b, ca[0], cb[0], st)) return true;
  } else {
    if (match(a, b, ca[0], cb[0], st) && match(a, b, ca[1], cb[1], st)) return true;
    st = save;
    st.fwd[u] = v;
    st.rev[v] = u;
    if (match(a, b, ca[0], cb[1], st) && match(a, b, ca[1], cb[0], st)) return true;
  }
  st = save;
  return false;
}

bool isomorphic_networks(const Network& a, const Network& b) {
  if (a.vertex_count() != b.vertex_count() || a.arc_count() != b.arc_count() ||
      a.reticulation_count() != b.reticulation_count() ||
      a.leaf_labels_sorted() != b.leaf_labels_sorted())
    return false;
  IsoState st{std::vector<VertexId>(a.vertex_count(), kNoVertex),
              std::vector<VertexId>(b.vertex_count(), kNoVertex)};
  return match(a, b, a.root(), b.root(), st);
}

// Rebuilds the tree under a random vertex permutation with arcs inserted in
// random order, so only the structure survives.
Network shuffled_copy(const Network& t, std::mt19937_64& rng) {
  std::vector<VertexId> perm(t.vertex_count());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<VertexId>(i);
  for (std::size_t i = perm.size(); i > 1; --i)
    std::swap(perm[i - 1], perm[uniform_below(rng, i)]);
  GraphBuilder g;
  for (std::size_t i = 0; i < perm.size(); ++i) g.add_vertex();
  for (VertexId v = 0; v < t.vertex_count(); ++v)
    if (t.is_leaf(v)) g.set_label(perm[v], t.leaf_label(v));
  std::vector<Arc> arcs = t.arcs();
  for (std::size_t i = arcs.size(); i > 1; --i)
    std::swap(arcs[i - 1], arcs[uniform_below(rng, i)]);
  for (const Arc& a : arcs) g.add_arc(perm[a.tail], perm[a.head]);
  return g.freeze();
}

// A balanced tree over m two-rung caterpillar ladders plus pad plain leaves;
// |X| = 3m + pad and simplify must delete exactly one rung per ladder.
Network glued_ladders(std::size_t leaf_count) {
  const std::size_t m = leaf_count / 3, pad = leaf_count - 3 * m;
  GraphBuilder g;
  std::vector<VertexId> tops;
  for (std::size_t i = 0; i < m; ++i) {
    const std::string tag = std::to_string(i);
    tops.push_back(
        testsupport::append_caterpillar_ladder(g, {"a" + tag, "b" + tag, "c" + tag})
            .top);
  }
  for (std::size_t i = 0; i < pad; ++i) tops.push_back(g.add_leaf("p" + std::to_string(i)));
  while (tops.size() > 1) {
    std::vector<VertexId> next;
    for (std::size_t i = 0; i + 1 < tops.size(); i += 2) {
      VertexId join = g.add_vertex();
      g.add_arc(join, tops[i]);
      g.add_arc(join, tops[i + 1]);
      next.push_back(join);
    }
    if (tops.size() % 2) next.push_back(tops.back());
    tops = std::move(next);
  }
  return g.freeze();
}

void check_size_bounds(const Network& net) {
  const std::size_t n = net.leaf_count();
  require(net.vertex_count() <= 4 * n,
          "vertex count " + std::to_string(net.vertex_count()) +
              " exceeds 4 * " + std::to_string(n));
  require(n == 1 || net.arc_count() <= 5 * n - 5,
          "arc count " + std::to_string(net.arc_count()) + " exceeds 5 * " +
              std::to_string(n) + " - 5");
}

}  // namespace

int main() {
  int failures = 0;
  const auto gate = [&failures](int number, const char* name, auto&& body) {
    Clock::time_point t0 = Clock::now();
    std::string detail;
    bool ok = true;
    try {
      body(detail);
    } catch (const Failure& f) {
      ok = false;
      detail = f.message;
    } catch (const std::exception& e) {
      ok = false;
      detail = std::string("unexpected error: ") + e.what();
    }
    if (!ok) ++failures;
    std::printf("[%s] %d. %s — %s (%s s)\n", ok ? "PASS" : "FAIL", number, name,
                detail.c_str(), fmt("%.1f", seconds_since(t0)).c_str());
    std::fflush(stdout);
  };

  // Shared corpora, filled by the checks that build them.
  std::vector<Network> corpus;       // random tree-child networks
  std::vector<Network> class_nets;   // normal and girth-4 level-1 networks

  gate(1, "characterization matches brute force on random tree-child networks",
       [&](std::string& detail) {
         Clock::time_point t0 = Clock::now();
         std::mt19937_64 rng(20260816);
         std::size_t arcs_checked = 0;
         for (int i = 0; i < 200; ++i) {
           const std::size_t leaves = 4 + uniform_below(rng, 5);
           const std::size_t kmax = std::min<std::size_t>(6, leaves - 1);
           const std::size_t k = 1 + uniform_below(rng, kmax);
           Network net = random_tree_child(leaves, k, rng);
           arcs_checked += net.reticulation_arcs().size();
           require(nonessential_arcs(net) == nonessential_by_bruteforce(net),
                   "mismatch on network " + std::to_string(i) + ": " +
                       to_newick(net));
           corpus.push_back(std::move(net));
         }
         const double elapsed = seconds_since(t0);
         require(elapsed < 60.0, "corpus took " + fmt("%.1f", elapsed) + " s");
         detail = std::to_string(corpus.size()) + " networks, " +
                  std::to_string(arcs_checked) + " reticulation arcs, 0 mismatches";
       });

  gate(2, "outer rungs are non-essential, interior rungs essential",
       [&](std::string& detail) {
         require(!corpus.empty(), "corpus unavailable");
         std::size_t ladders = 0, rungs = 0;
         for (const Network& net : corpus) {
           for (const LadderEmbedding& lad : all_tight_ladders(net)) {
             ++ladders;
             const std::size_t k = lad.rung_count();
             for (std::size_t j = 0; j < k; ++j) {
               for (bool lower : {true, false}) {
                 const Arc rung = lower ? lad.lower_rung(j) : lad.upper_rung(j);
                 const bool outer = (lower && j == 0) || (!lower && j == k - 1);
                 ++rungs;
                 require(is_essential_bruteforce(net, rung) == !outer,
                         "rung " + std::to_string(j) + " of a ladder in " +
                             to_newick(net));
               }
             }
           }
         }
         require(ladders > 0, "corpus produced no tight ladders");
         detail = std::to_string(ladders) + " ladders, " + std::to_string(rungs) +
                  " rungs split correctly";
       });

  gate(3, "simplification is sound and order-independent",
       [&](std::string& detail) {
         require(!corpus.empty(), "corpus unavailable");
         std::size_t deletions = 0;
         for (const Network& net : corpus) {
           SimplificationTrace first = simplify(net, RungPolicy::delete_first);
           SimplificationTrace last = simplify(net, RungPolicy::delete_last);
           for (const SimplificationTrace* t : {&first, &last}) {
             require(t->result.is_tree_child(), "result not tree-child");
             require(nonessential_arcs(t->result).empty(),
                     "result still has non-essential arcs");
             require(display_sets_equal(net, t->result),
                     "display set changed: " + to_newick(net));
           }
           const std::size_t want = first.steps.size();
           deletions += want;
           require(want == all_tight_ladders(net).size(),
                   "one deletion per ladder violated");
           for (RungPolicy policy :
                {RungPolicy::delete_first, RungPolicy::delete_last})
             for (std::uint64_t seed : {1u, 2u, 3u})
               require(simplify(net, policy, seed).steps.size() == want,
                       "deletion count depends on visit order: " + to_newick(net));
         }
         detail = std::to_string(deletions) +
                  " deletions, invariant over 8 policy/order variants";
       });

  gate(4, "stacked reticulations display two trees with lopsided multiplicity",
       [&](std::string& detail) {
         const std::string heavy =
             canonical_tree_string(parse_network("((a,b),c);"));
         const std::string light =
             canonical_tree_string(parse_network("(a,(b,c));"));
         for (std::size_t k = 1; k <= 10; ++k) {
           const DisplayMultiset ms = display_multiset(testsupport::stack_network(k));
           const std::uint64_t total = std::uint64_t{1} << k;
           require(ms.total_count == total, "embedding total wrong at k=" +
                                                std::to_string(k));
           require(ms.multiplicity.size() == 2,
                   "distinct tree count wrong at k=" + std::to_string(k));
           require(ms.multiplicity.at(heavy) == total - 1,
                   "heavy multiplicity wrong at k=" + std::to_string(k));
           require(ms.multiplicity.at(light) == 1,
                   "light multiplicity wrong at k=" + std::to_string(k));
         }
         detail = "k = 1..10, multiplicities {2^k - 1, 1} exact";
       });

  gate(5, "normal and girth-4 level-1 networks have no non-essential arcs",
       [&](std::string& detail) {
         std::mt19937_64 rng(5150);
         std::size_t attempts = 0;
         const auto sample = [&](std::size_t want, std::size_t max_k, auto&& accept) {
           std::vector<Network> out;
           while (out.size() < want) {
             require(++attempts < 100000, "rejection sampling stalled");
             const std::size_t leaves = 4 + uniform_below(rng, 5);
             const std::size_t k =
                 1 + uniform_below(rng, std::min(max_k, leaves - 1));
             Network net = random_tree_child(leaves, k, rng);
             if (accept(net)) out.push_back(std::move(net));
           }
           return out;
         };
         std::vector<Network> normals =
             sample(100, 3, [](const Network& n) { return is_normal(n); });
         std::vector<Network> level1s = sample(100, 2, [](const Network& n) {
           return is_level_one(n) && girth_at_least_4(n);
         });
         for (std::vector<Network>* batch : {&normals, &level1s})
           for (Network& net : *batch) {
             require(nonessential_arcs(net).empty(),
                     "characterization found a non-essential arc: " + to_newick(net));
             require(nonessential_by_bruteforce(net).empty(),
                     "brute force found a non-essential arc: " + to_newick(net));
             class_nets.push_back(std::move(net));
           }
         detail = "100 normal + 100 level-1 networks (" +
                  std::to_string(attempts) + " draws), all arcs essential";
       });

  gate(6, "tree-child networks respect the size bounds", [&](std::string& detail) {
    require(!corpus.empty(), "corpus unavailable");
    std::size_t checked = 0;
    for (const Network& net : corpus) {
      check_size_bounds(net);
      ++checked;
    }
    for (const Network& net : class_nets) {
      check_size_bounds(net);
      ++checked;
    }
    for (std::size_t k = 1; k <= 6; ++k) {
      check_size_bounds(testsupport::caterpillar_ladder(k).net);
      ++checked;
    }
    detail = std::to_string(checked) +
             " networks within |V| <= 4|X| and arcs <= 5|X| - 5";
  });

  gate(7, "coupling gadget verdict matches display-set containment",
       [&](std::string& detail) {
         Clock::time_point t0 = Clock::now();
         std::mt19937_64 rng(40916);
         const auto make = [&](std::size_t leaves, bool reticulated) {
           return reticulated && leaves >= 2 ? random_tree_child(leaves, 1, rng)
                                             : random_tree(leaves, rng);
         };
         std::size_t pairs = 0;
         for (int i = 0; i < 49; ++i) {
           const std::size_t leaves = 1 + i % 3;
           const bool first_retic = uniform_below(rng, 2) == 1;
           // keep three-leaf seconds tree-shaped: a reticulation there makes
           // the gadget's display enumeration the dominant cost
           const bool second_retic = leaves <= 2 && uniform_below(rng, 2) == 1;
           const RefinementOrder order =
               i % 2 ? RefinementOrder::reversed : RefinementOrder::copy_index;
           Network a = make(leaves, first_retic);
           Network b = make(leaves, second_retic);
           require(verify_reduction(a, b, order),
                   "reduction failed on pair " + std::to_string(i) + ": " +
                       to_newick(a) + " vs " + to_newick(b));
           ++pairs;
         }
         // two heavyweight pairs with a reticulated three-leaf second input
         for (bool first_retic : {false, true}) {
           Network a = make(3, first_retic);
           Network b = random_tree_child(3, 1, rng);
           require(verify_reduction(a, b), "reduction failed on a heavy pair: " +
                                               to_newick(a) + " vs " + to_newick(b));
           ++pairs;
         }
         const double elapsed = seconds_since(t0);
         require(elapsed < 120.0, "pairs took " + fmt("%.1f", elapsed) + " s");
         detail = std::to_string(pairs) + " pairs verified in " +
                  fmt("%.1f", elapsed) + " s";
       });

  gate(8, "simplification scales gently from 250 to 1000 leaves",
       [&](std::string& detail) {
         std::mt19937_64 rng(8080);
         const std::size_t sizes[] = {250, 500, 1000};
         const auto timed = [](const std::vector<Network>& nets, int reps) {
           Clock::time_point t0 = Clock::now();
           for (int r = 0; r < reps; ++r)
             for (const Network& net : nets) (void)simplify(net);
           return seconds_since(t0) * 1000.0;
         };
         double random_ms[3], glued_ms[3], glued_single_s[3];
         for (int s = 0; s < 3; ++s) {
           std::vector<Network> nets;
           for (int i = 0; i < 3; ++i)
             nets.push_back(random_tree_child(sizes[s], sizes[s] / 4, rng));
           for (const Network& net : nets) check_size_bounds(net);
           random_ms[s] = timed(nets, 20);
           Network glued = glued_ladders(sizes[s]);
           check_size_bounds(glued);
           Clock::time_point t0 = Clock::now();
           SimplificationTrace trace = simplify(glued);
           glued_single_s[s] = seconds_since(t0);
           require(trace.steps.size() == sizes[s] / 3,
                   "glued workload deleted the wrong rung count");
           glued_ms[s] = glued_single_s[s] * 1000.0;
         }
         for (const double* t : {random_ms, glued_ms}) {
           // 1 ms floor on the denominator: below that the growth is noise
           require(t[1] <= 10.0 * std::max(t[0], 1.0), "250 -> 500 grew over 10x");
           require(t[2] <= 10.0 * std::max(t[1], 1.0), "500 -> 1000 grew over 10x");
         }
         require(glued_single_s[2] < 30.0 && random_ms[2] / 20.0 < 30000.0,
                 "1000-leaf simplify exceeded 30 s");
         detail = "random 3x20 runs " + fmt("%.1f", random_ms[0]) + "/" +
                  fmt("%.1f", random_ms[1]) + "/" + fmt("%.1f", random_ms[2]) +
                  " ms; ladder-heavy single runs " + fmt("%.1f", glued_ms[0]) +
                  "/" + fmt("%.1f", glued_ms[1]) + "/" + fmt("%.1f", glued_ms[2]) +
                  " ms";
       });

  gate(9, "serialization round-trips and canonical form matches isomorphism",
       [&](std::string& detail) {
         std::mt19937_64 rng(90909);
         for (int i = 0; i < 1000; ++i) {
           const std::size_t leaves = 1 + uniform_below(rng, 10);
           const std::size_t kmax =
               leaves >= 2 ? std::min<std::size_t>(6, leaves - 1) : 0;
           const std::size_t k = kmax ? uniform_below(rng, kmax + 1) : 0;
           Network net = k ? random_tree_child(leaves, k, rng)
                           : random_tree(leaves, rng);
           const std::string s = to_newick(net);
           require(isomorphic_networks(net, parse_network(s)),
                   "round trip failed: " + s);
         }
         std::size_t iso_pairs = 0, other_pairs = 0;
         for (int i = 0; i < 1000; ++i) {
           const std::size_t leaves = 3 + uniform_below(rng, 6);
           Network t1 = random_tree(leaves, rng);
           Network t2 = i % 3 == 0 ? shuffled_copy(t1, rng) : random_tree(leaves, rng);
           const bool same_canon =
               canonical_tree_string(t1) == canonical_tree_string(t2);
           const bool iso = iso_trees(t1, t2);
           require(same_canon == iso, "canonical form disagrees with isomorphism: " +
                                          to_newick(t1) + " vs " + to_newick(t2));
           if (i % 3 == 0)
             require(iso, "shuffled copy not isomorphic: " + to_newick(t1));
           (iso ? iso_pairs : other_pairs) += 1;
         }
         require(iso_pairs > 0 && other_pairs > 0, "pair corpus one-sided");
         detail = "1000 round trips; 1000 tree pairs (" + std::to_string(iso_pairs) +
                  " isomorphic, " + std::to_string(other_pairs) + " not), full agreement";
       });

  if (failures == 0) {
    std::printf("all 9 checks passed\n");
    return 0;
  }
  std::printf("%d of 9 checks failed\n", failures);
  return 1;
}
