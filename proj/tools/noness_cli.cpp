#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "noness/display_oracle.hpp"
#include "noness/gadget.hpp"
#include "noness/ladders.hpp"
#include "noness/network.hpp"
#include "noness/newick.hpp"
#include "noness/random_networks.hpp"

using namespace noness;

namespace {

// Exit codes: 0 clean, 1 domain errors (invalid networks, failed checks,
// exceeded caps), 2 usage, I/O, or syntax errors.
constexpr int kOk = 0;
constexpr int kDomainError = 1;
constexpr int kUsageError = 2;

struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw io_error("cannot read " + path);
  return std::move(buf).str();
}

// FNV-1a over the raw input bytes; stable across platforms.
std::string digest(std::string_view bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char out[17];
  std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(h));
  return out;
}

std::string quote(std::string_view text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

std::string arc_str(const Arc& a) {
  return std::to_string(a.tail) + "->" + std::to_string(a.head);
}

std::string join_arcs(const std::vector<Arc>& arcs) {
  std::string out;
  for (const Arc& a : arcs) {
    if (!out.empty()) out += ',';
    out += arc_str(a);
  }
  return out;
}

std::string leaf_list(const Network& net, const std::vector<VertexId>& leaves) {
  std::string out;
  for (VertexId v : leaves) {
    if (!out.empty()) out += ',';
    out += net.leaf_label(v);
  }
  return out;
}

// One input line per network, as parse_document sees them.
struct InputLine {
  std::size_t line_no;  // 1-based
  std::string text;
};

std::vector<InputLine> split_lines(std::string_view text) {
  std::vector<InputLine> out;
  std::size_t line_no = 0, pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    ++line_no;
    if (line.find_first_not_of(" \t\r") != std::string_view::npos)
      out.push_back({line_no, std::string(line)});
    if (eol == text.size()) break;
    pos = eol + 1;
  }
  return out;
}

const char* yes_no(bool b) { return b ? "yes" : "no"; }

void print_header(const std::string& command, const std::string& path,
                  const std::string& bytes, const std::string& extra = {}) {
  std::cout << "command=" << command << " input=" << path
            << " digest=" << digest(bytes);
  if (!extra.empty()) std::cout << ' ' << extra;
  std::cout << '\n';
}

// --- validate ---------------------------------------------------------------

int cmd_validate(const std::string& path) {
  const std::string bytes = read_file(path);
  print_header("validate", path, bytes);
  std::size_t ok = 0, invalid = 0, syntax = 0, index = 0;
  for (const InputLine& line : split_lines(bytes)) {
    ++index;
    std::cout << "net=" << index << " line=" << line.line_no;
    RawNetwork raw;
    try {
      raw = parse_raw(line.text);
    } catch (const parse_error& e) {
      std::cout << " error=" << quote(e.what()) << '\n';
      ++syntax;
      continue;
    }
    ValidationReport report = validate(raw);
    if (!report.ok) {
      std::cout << " ok=no violations=" << report.violations.size() << '\n';
      for (const Violation& v : report.violations)
        std::cout << "net=" << index << " violation="
                  << quote(v.rule + ": " + v.where + ": " + v.message) << '\n';
      ++invalid;
      continue;
    }
    Network net = Network::from_raw(raw);
    std::cout << " ok=yes vertices=" << net.vertex_count()
              << " arcs=" << net.arc_count() << " leaves=" << net.leaf_count()
              << " reticulations=" << net.reticulation_count()
              << " tree_child=" << yes_no(net.is_tree_child())
              << " normal=" << yes_no(is_normal(net))
              << " level_one=" << yes_no(is_level_one(net)) << '\n';
    ++ok;
  }
  std::cout << "total=" << index << " ok=" << ok << " invalid=" << invalid
            << " syntax_errors=" << syntax << '\n';
  if (syntax > 0) return kUsageError;
  return invalid > 0 ? kDomainError : kOk;
}

// --- ladders ----------------------------------------------------------------

int cmd_ladders(const std::string& path) {
  const std::string bytes = read_file(path);
  print_header("ladders", path, bytes);
  std::vector<Network> nets = parse_document(bytes);
  std::size_t total = 0, errors = 0;
  for (std::size_t i = 0; i < nets.size(); ++i) {
    try {
      std::vector<LadderEmbedding> ladders = all_tight_ladders(nets[i]);
      std::cout << "net=" << i + 1 << " ladders=" << ladders.size() << '\n';
      for (std::size_t j = 0; j < ladders.size(); ++j) {
        const LadderEmbedding& lad = ladders[j];
        std::vector<Arc> lower, upper;
        for (std::size_t r = 0; r < lad.rung_count(); ++r) {
          lower.push_back(lad.lower_rung(r));
          upper.push_back(lad.upper_rung(r));
        }
        std::cout << "net=" << i + 1 << " ladder=" << j + 1
                  << " rungs=" << lad.rung_count()
                  << " leaves=" << quote(leaf_list(nets[i], lad.leaves))
                  << " lower_rungs=" << quote(join_arcs(lower))
                  << " upper_rungs=" << quote(join_arcs(upper))
                  << " first_rung=" << arc_str(lad.first_rung())
                  << " last_rung=" << arc_str(lad.last_rung()) << '\n';
        ++total;
      }
    } catch (const std::invalid_argument& e) {
      std::cout << "net=" << i + 1 << " error=" << quote(e.what()) << '\n';
      ++errors;
    }
  }
  std::cout << "total=" << nets.size() << " ladders=" << total
            << " errors=" << errors << '\n';
  return errors > 0 ? kDomainError : kOk;
}

// --- simplify ---------------------------------------------------------------

int cmd_simplify(const std::string& path, const std::string& rung) {
  const std::string bytes = read_file(path);
  const RungPolicy policy =
      rung == "last" ? RungPolicy::delete_last : RungPolicy::delete_first;
  print_header("simplify", path, bytes, "rung=" + rung);
  std::vector<Network> nets = parse_document(bytes);
  std::size_t deletions = 0, errors = 0;
  for (std::size_t i = 0; i < nets.size(); ++i) {
    try {
      SimplificationTrace trace = simplify(nets[i], policy);
      std::cout << "net=" << i + 1 << " deletions=" << trace.steps.size()
                << " reticulations_before=" << nets[i].reticulation_count()
                << " reticulations_after=" << trace.result.reticulation_count()
                << " newick=" << to_newick(trace.result) << '\n';
      for (std::size_t s = 0; s < trace.steps.size(); ++s) {
        const SimplificationStep& step = trace.steps[s];
        std::cout << "net=" << i + 1 << " step=" << s + 1
                  << " rungs=" << step.ladder.rung_count() << " leaves=";
        std::string labels;
        for (const std::string& l : step.leaf_labels) {
          if (!labels.empty()) labels += ',';
          labels += l;
        }
        std::cout << quote(labels) << " deleted=" << arc_str(step.deleted)
                  << '\n';
      }
      deletions += trace.steps.size();
    } catch (const std::invalid_argument& e) {
      std::cout << "net=" << i + 1 << " error=" << quote(e.what()) << '\n';
      ++errors;
    }
  }
  std::cout << "total=" << nets.size() << " deletions=" << deletions
            << " errors=" << errors << '\n';
  return errors > 0 ? kDomainError : kOk;
}

// --- oracle -----------------------------------------------------------------

int oracle_essential(const std::vector<Network>& nets, std::size_t cap) {
  std::size_t essential = 0, nonessential = 0, errors = 0;
  for (std::size_t i = 0; i < nets.size(); ++i) {
    try {
      for (const Arc& e : nets[i].reticulation_arcs()) {
        bool is_essential = is_essential_bruteforce(nets[i], e, cap);
        std::cout << "net=" << i + 1 << " arc=" << arc_str(e)
                  << " essential=" << yes_no(is_essential) << '\n';
        ++(is_essential ? essential : nonessential);
      }
    } catch (const std::exception& e) {
      std::cout << "net=" << i + 1 << " error=" << quote(e.what()) << '\n';
      ++errors;
    }
  }
  std::cout << "total=" << nets.size() << " essential=" << essential
            << " nonessential=" << nonessential << " errors=" << errors << '\n';
  return errors > 0 ? kDomainError : kOk;
}

// Every network is compared against the file's first.
int oracle_display_equal(const std::vector<Network>& nets, std::size_t cap) {
  std::size_t equal = 0, unequal = 0, errors = 0;
  for (std::size_t i = 0; i < nets.size(); ++i) {
    if (i == 0) {
      std::cout << "net=1 reference=yes\n";
      continue;
    }
    try {
      bool eq = display_sets_equal(nets[0], nets[i], cap);
      std::cout << "net=" << i + 1 << " equal=" << yes_no(eq) << '\n';
      ++(eq ? equal : unequal);
    } catch (const std::exception& e) {
      std::cout << "net=" << i + 1 << " error=" << quote(e.what()) << '\n';
      ++errors;
    }
  }
  std::cout << "total=" << nets.size() << " equal=" << equal
            << " unequal=" << unequal << " errors=" << errors << '\n';
  return errors > 0 ? kDomainError : kOk;
}

// Ladder-based non-essential arcs against the brute-force display oracle.
int oracle_characterization(const std::vector<Network>& nets, std::size_t cap) {
  std::size_t agree = 0, disagree = 0, errors = 0;
  for (std::size_t i = 0; i < nets.size(); ++i) {
    try {
      std::set<Arc> predicted = nonessential_arcs(nets[i]);
      std::set<Arc> observed;
      for (const Arc& e : nets[i].reticulation_arcs())
        if (!is_essential_bruteforce(nets[i], e, cap)) observed.insert(e);
      bool same = predicted == observed;
      std::cout << "net=" << i + 1 << " predicted=" << predicted.size()
                << " bruteforce=" << observed.size()
                << " agree=" << yes_no(same) << '\n';
      ++(same ? agree : disagree);
    } catch (const std::exception& e) {
      std::cout << "net=" << i + 1 << " error=" << quote(e.what()) << '\n';
      ++errors;
    }
  }
  std::cout << "total=" << nets.size() << " agree=" << agree
            << " disagree=" << disagree << " errors=" << errors << '\n';
  if (disagree > 0 || errors > 0) return kDomainError;
  return kOk;
}

int cmd_oracle(const std::string& path, const std::string& check,
               std::size_t cap) {
  const std::string bytes = read_file(path);
  print_header("oracle", path, bytes,
               "check=" + check + " cap=" + std::to_string(cap));
  std::vector<Network> nets = parse_document(bytes);
  if (check == "essential") return oracle_essential(nets, cap);
  if (check == "display-equal") return oracle_display_equal(nets, cap);
  return oracle_characterization(nets, cap);
}

// --- gadget -----------------------------------------------------------------

Network single_network(const std::string& path, const std::string& bytes) {
  std::vector<Network> nets = parse_document(bytes);
  if (nets.size() != 1)
    throw std::invalid_argument(path + " must hold exactly one network, found " +
                                std::to_string(nets.size()));
  return std::move(nets[0]);
}

int cmd_gadget(const std::string& path1, const std::string& path2,
               const std::string& order_name, bool verify, std::size_t cap) {
  const std::string bytes1 = read_file(path1);
  const std::string bytes2 = read_file(path2);
  const RefinementOrder order = order_name == "reversed"
                                    ? RefinementOrder::reversed
                                    : RefinementOrder::copy_index;
  std::cout << "command=gadget input=" << path1 << " digest=" << digest(bytes1)
            << " input2=" << path2 << " digest2=" << digest(bytes2)
            << " order=" << to_string(order) << '\n';
  Network n1 = single_network(path1, bytes1);
  Network n2 = single_network(path2, bytes2);
  GadgetInstance gi = build_gadget(n1, n2, order);
  std::cout << "vertices=" << gi.net.vertex_count()
            << " reticulations=" << gi.net.reticulation_count()
            << " leaves=" << gi.net.leaf_count() << " x=" << gi.x_label
            << " y=" << gi.y_label
            << " distinguished_arc=" << arc_str(gi.distinguished_arc) << '\n';
  std::cout << "newick=" << to_newick(gi.net) << '\n';
  if (!verify) return kOk;
  bool holds = verify_reduction(n1, n2, order, cap);
  std::cout << "verify=" << (holds ? "holds" : "fails") << '\n';
  return holds ? kOk : kDomainError;
}

// --- random -----------------------------------------------------------------

int cmd_random(std::size_t leaves, std::size_t reticulations,
               std::uint64_t seed, std::size_t count) {
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < count; ++i)
    std::cout << to_newick(random_tree_child(leaves, reticulations, rng))
              << '\n';
  return kOk;
}

std::size_t default_cap() {
  const char* env = std::getenv("NONESS_CAP");
  if (env == nullptr || *env == '\0') return kDefaultEnumerationCap;
  char* end = nullptr;
  unsigned long long v = std::strtoull(env, &end, 10);
  if (end == env || *end != '\0')
    throw CLI::ValidationError("NONESS_CAP", std::string("not a number: ") + env);
  return static_cast<std::size_t>(v);
}

}  // namespace

int main(int argc, char** argv) {
  const auto start = std::chrono::steady_clock::now();

  CLI::App app{"tools for non-essential reticulation arcs in rooted binary "
               "phylogenetic networks"};
  app.require_subcommand(1);
  app.fallthrough();  // lets --timing appear after the subcommand
  bool timing = false;
  app.add_flag("--timing", timing,
               "append a wall_ms=... line (omitted by default so reports are "
               "byte-stable)");

  std::string path, path2, rung = "first", check = "characterization",
                    order = "copy_index";
  std::size_t cap = 0, leaves = 0, reticulations = 0, count = 1;
  std::uint64_t seed = 0;
  bool verify = false;

  CLI::App* validate_cmd = app.add_subcommand(
      "validate", "parse and classify each network (one per line)");
  validate_cmd->add_option("path", path, "eNewick file")->required();

  CLI::App* ladders_cmd = app.add_subcommand(
      "ladders", "list the tight caterpillar ladders of tree-child networks");
  ladders_cmd->add_option("path", path, "eNewick file")->required();

  CLI::App* simplify_cmd = app.add_subcommand(
      "simplify",
      "delete one rung per tight caterpillar ladder until none remain");
  simplify_cmd->add_option("path", path, "eNewick file")->required();
  simplify_cmd->add_option("--rung", rung, "which rung to delete")
      ->check(CLI::IsMember({"first", "last"}))
      ->capture_default_str();

  CLI::App* oracle_cmd = app.add_subcommand(
      "oracle", "brute-force display-set checks (exponential in reticulations)");
  oracle_cmd->add_option("path", path, "eNewick file")->required();
  oracle_cmd->add_option("--check", check, "which verdict to compute")
      ->check(CLI::IsMember({"essential", "display-equal", "characterization"}))
      ->capture_default_str();
  CLI::Option* oracle_cap =
      oracle_cmd->add_option("--cap", cap,
                             "max reticulations to enumerate over (default: "
                             "NONESS_CAP or 20)");

  CLI::App* gadget_cmd = app.add_subcommand(
      "gadget", "couple two networks so one arc encodes display-set containment");
  gadget_cmd->add_option("path1", path, "eNewick file with one network")
      ->required();
  gadget_cmd->add_option("path2", path2, "eNewick file with one network")
      ->required();
  gadget_cmd->add_option("--order", order, "how merged arcs thread the chains")
      ->check(CLI::IsMember({"copy_index", "reversed"}))
      ->capture_default_str();
  gadget_cmd->add_flag("--verify", verify,
                       "brute-force the containment-vs-essentiality equivalence");
  CLI::Option* gadget_cap =
      gadget_cmd->add_option("--cap", cap,
                             "max reticulations to enumerate over (default: "
                             "NONESS_CAP or 20)");

  CLI::App* random_cmd = app.add_subcommand(
      "random", "emit random tree-child networks, one eNewick line each");
  random_cmd->add_option("--leaves", leaves, "leaf count")->required();
  random_cmd->add_option("--reticulations", reticulations, "reticulation count")
      ->capture_default_str();
  random_cmd->add_option("--seed", seed, "generator seed")
      ->capture_default_str();
  random_cmd->add_option("--count", count, "how many networks")
      ->capture_default_str();

  int rc = kOk;
  try {
    app.parse(argc, argv);
    if (oracle_cap->count() == 0 && gadget_cap->count() == 0) cap = default_cap();

    if (*validate_cmd) rc = cmd_validate(path);
    if (*ladders_cmd) rc = cmd_ladders(path);
    if (*simplify_cmd) rc = cmd_simplify(path, rung);
    if (*oracle_cmd) rc = cmd_oracle(path, check, cap);
    if (*gadget_cmd) rc = cmd_gadget(path, path2, order, verify, cap);
    if (*random_cmd) rc = cmd_random(leaves, reticulations, seed, count);
  } catch (const CLI::ParseError& e) {
    int cli_rc = app.exit(e);
    return cli_rc == 0 ? kOk : kUsageError;
  } catch (const io_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const parse_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDomainError;
  }

  if (timing) {
    const auto wall = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - start);
    std::cout << "wall_ms=" << wall.count() << '\n';
  }
  return rc;
}
