#include "noness/newick.hpp"

#include <charconv>
#include <map>
#include <set>
#include <unordered_map>

#include "noness/graph_builder.hpp"

namespace noness {

namespace {

bool is_label_char(char c) {
  switch (c) {
    case '(':
    case ')':
    case '[':
    case ']':
    case '{':
    case '}':
    case ',':
    case ';':
    case ':':
    case '#':
    case '\'':
    case ' ':
    case '\t':
    case '\r':
    case '\n':
      return false;
    default:
      return true;
  }
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  RawNetwork run(bool check_tags) {
    VertexId top = parse_subtree();
    (void)top;
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != ';') fail("expected ';'");
    ++pos_;
    skip_ws();
    if (pos_ < text_.size()) fail("trailing characters after ';'");
    if (check_tags) {
      for (const auto& entry : hybrid_vertex_)
        if (!defined_.count(entry.first))
          throw parse_error("hybrid tag #H" + std::to_string(entry.first) + " is never defined",
                            first_use_.at(entry.first));
    }
    return g_.to_raw();
  }

 private:
  [[noreturn]] void fail(const std::string& message) const {
    throw parse_error(message, pos_);
  }

  void skip_ws() {
    while (pos_ < text_.size() &&
           (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\r' ||
            text_[pos_] == '\n'))
      ++pos_;
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  VertexId parse_subtree() {
    skip_ws();
    if (pos_ >= text_.size()) fail("expected a leaf label, '(' or '#'");
    char c = text_[pos_];
    if (c == '(') return parse_group();
    if (c == '#') {
      std::size_t at = pos_;
      return hybrid(hybrid_tag(), at);
    }
    if (c == ':') fail("branch lengths are not supported");
    return g_.add_leaf(parse_label());
  }

  VertexId parse_group() {
    ++pos_;  // '('
    std::vector<VertexId> kids{parse_subtree()};
    skip_ws();
    while (peek() == ',') {
      ++pos_;
      kids.push_back(parse_subtree());
      skip_ws();
    }
    std::size_t close = pos_;
    if (peek() != ')') fail("expected ',' or ')'");
    ++pos_;
    skip_ws();
    if (peek() == '#') {
      std::size_t tag_at = pos_;
      unsigned long long tag = hybrid_tag();
      if (kids.size() != 1) {
        pos_ = tag_at;
        fail("a hybrid definition takes exactly one child");
      }
      if (defined_.count(tag)) {
        pos_ = tag_at;
        fail("hybrid tag #H" + std::to_string(tag) + " defined twice");
      }
      defined_.insert(tag);
      VertexId v = hybrid(tag, tag_at);
      g_.add_arc(v, kids[0]);
      return v;
    }
    if (kids.size() != 2) {
      pos_ = close;
      if (kids.size() == 1) fail("expected ',' (tree vertices have two children)");
      fail("more than two children in '(...)'");
    }
    VertexId v = g_.add_vertex();
    g_.add_arc(v, kids[0]);
    g_.add_arc(v, kids[1]);
    return v;
  }

  unsigned long long hybrid_tag() {
    ++pos_;  // '#'
    if (peek() != 'H') fail("expected 'H' after '#'");
    ++pos_;
    const char* begin = text_.data() + pos_;
    const char* end = text_.data() + text_.size();
    unsigned long long tag = 0;
    auto [ptr, ec] = std::from_chars(begin, end, tag);
    if (ptr == begin) fail("expected a number after '#H'");
    if (ec != std::errc()) fail("hybrid tag number out of range");
    pos_ += static_cast<std::size_t>(ptr - begin);
    return tag;
  }

  VertexId hybrid(unsigned long long tag, std::size_t at) {
    auto it = hybrid_vertex_.find(tag);
    if (it != hybrid_vertex_.end()) return it->second;
    VertexId v = g_.add_vertex();
    hybrid_vertex_.emplace(tag, v);
    first_use_.emplace(tag, at);
    return v;
  }

  std::string parse_label() {
    if (peek() == '\'') {
      std::size_t start = pos_;
      ++pos_;
      std::string label;
      while (true) {
        if (pos_ >= text_.size()) {
          pos_ = start;
          fail("unterminated quoted label");
        }
        char c = text_[pos_++];
        if (c == '\'') {
          if (peek() == '\'') {
            label += '\'';
            ++pos_;
          } else {
            break;
          }
        } else {
          label += c;
        }
      }
      return label;
    }
    std::size_t start = pos_;
    while (pos_ < text_.size() && is_label_char(text_[pos_])) ++pos_;
    if (pos_ == start) fail("expected a leaf label, '(' or '#'");
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  GraphBuilder g_;
  std::map<unsigned long long, VertexId> hybrid_vertex_;
  std::map<unsigned long long, std::size_t> first_use_;
  std::set<unsigned long long> defined_;
};

}  // namespace

RawNetwork parse_raw(std::string_view text) { return Parser(text).run(false); }

Network parse_network(std::string_view text) {
  return Network::from_raw(Parser(text).run(true));
}

std::vector<Network> parse_document(std::string_view text) {
  std::vector<Network> nets;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    std::string_view line = text.substr(
        start, end == std::string_view::npos ? text.size() - start : end - start);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    bool blank = true;
    for (char c : line)
      if (c != ' ' && c != '\t') blank = false;
    if (!blank) {
      try {
        nets.push_back(parse_network(line));
      } catch (const parse_error& e) {
        throw parse_error("line " + std::to_string(line_no) + ": " + e.message(), e.offset());
      } catch (const std::invalid_argument& e) {
        throw std::invalid_argument("line " + std::to_string(line_no) + ": " + e.what());
      }
    }
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return nets;
}

namespace {

void append_label(std::string& out, const std::string& label) {
  bool quote = label.empty();
  for (char c : label)
    if (!is_label_char(c)) quote = true;
  if (!quote) {
    out += label;
    return;
  }
  out += '\'';
  for (char c : label) {
    out += c;
    if (c == '\'') out += '\'';
  }
  out += '\'';
}

void write_newick(const Network& net, VertexId v, std::string& out,
                  std::unordered_map<VertexId, unsigned>& tag, unsigned& next_tag) {
  if (net.is_leaf(v)) {
    append_label(out, net.leaf_label(v));
    return;
  }
  if (net.is_reticulation(v)) {
    auto it = tag.find(v);
    if (it != tag.end()) {
      out += "#H" + std::to_string(it->second);
      return;
    }
    unsigned t = next_tag++;
    tag.emplace(v, t);
    out += '(';
    write_newick(net, net.children(v)[0], out, tag, next_tag);
    out += ")#H" + std::to_string(t);
    return;
  }
  out += '(';
  write_newick(net, net.children(v)[0], out, tag, next_tag);
  out += ',';
  write_newick(net, net.children(v)[1], out, tag, next_tag);
  out += ')';
}

}  // namespace

std::string to_newick(const Network& net) {
  std::string out;
  std::unordered_map<VertexId, unsigned> tag;
  unsigned next_tag = 1;
  write_newick(net, net.root(), out, tag, next_tag);
  out += ';';
  return out;
}

namespace {

std::string canonical_subtree(const Network& net, VertexId v) {
  if (net.is_leaf(v)) {
    std::string out;
    append_label(out, net.leaf_label(v));
    return out;
  }
  std::string a = canonical_subtree(net, net.children(v)[0]);
  std::string b = canonical_subtree(net, net.children(v)[1]);
  if (b < a) a.swap(b);
  return "(" + a + "," + b + ")";
}

}  // namespace

std::string canonical_tree_string(const Network& net) {
  if (!net.is_tree())
    throw std::invalid_argument("canonical_tree_string: network has reticulations");
  return canonical_subtree(net, net.root()) + ";";
}

}  // namespace noness
