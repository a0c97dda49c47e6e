#pragma once

#include <cctype>
#include <map>
#include <string>
#include <vector>

namespace testing {

// Recursive-descent recognizer for the Graphviz DOT language:
//
//   graph     : [strict] (graph | digraph) [ID] '{' stmt_list '}'
//   stmt_list : [stmt [';'] stmt_list]
//   stmt      : node_stmt | edge_stmt | attr_stmt | ID '=' ID | subgraph
//   attr_stmt : (graph | node | edge) attr_list
//   attr_list : '[' [a_list] ']' [attr_list]
//   a_list    : ID '=' ID [(';' | ',')] [a_list]
//   edge_stmt : (node_id | subgraph) edgeRHS [attr_list]
//   edgeRHS   : edgeop (node_id | subgraph) [edgeRHS]
//   node_stmt : node_id [attr_list]
//   node_id   : ID [port]
//   subgraph  : [subgraph [ID]] '{' stmt_list '}'
//
// Ports are not supported. Edges between plain node ids are collected with
// their label attribute.
struct DotEdge {
  std::string from, to, label;
};

class DotChecker {
public:
  explicit DotChecker(std::string text) : s_(std::move(text)) {}

  bool parse() {
    try {
      graph();
      skip();
      return pos_ == s_.size();
    } catch (const Fail&) {
      return false;
    }
  }

  const std::vector<DotEdge>& edges() const { return edges_; }
  bool directed() const { return directed_; }

private:
  struct Fail {};

  void skip() {
    for (;;) {
      while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
        ++pos_;
      if (s_.compare(pos_, 2, "//") == 0 || (pos_ < s_.size() && s_[pos_] == '#')) {
        while (pos_ < s_.size() && s_[pos_] != '\n')
          ++pos_;
      } else if (s_.compare(pos_, 2, "/*") == 0) {
        auto end = s_.find("*/", pos_ + 2);
        if (end == std::string::npos)
          throw Fail{};
        pos_ = end + 2;
      } else {
        return;
      }
    }
  }

  bool peek(const std::string& t) {
    skip();
    return s_.compare(pos_, t.size(), t) == 0;
  }

  bool accept(const std::string& t) {
    if (!peek(t))
      return false;
    pos_ += t.size();
    return true;
  }

  void expect(const std::string& t) {
    if (!accept(t))
      throw Fail{};
  }

  static bool keyword(const std::string& id, const char* k) {
    if (id.size() != std::char_traits<char>::length(k))
      return false;
    for (std::size_t i = 0; i < id.size(); ++i)
      if (std::tolower(static_cast<unsigned char>(id[i])) != k[i])
        return false;
    return true;
  }

  std::string id() {
    skip();
    if (pos_ >= s_.size())
      throw Fail{};
    char c = s_[pos_];
    std::size_t start = pos_;
    if (c == '"') {
      ++pos_;
      while (pos_ < s_.size() && s_[pos_] != '"')
        pos_ += s_[pos_] == '\\' ? 2 : 1;
      if (pos_ >= s_.size())
        throw Fail{};
      ++pos_;
      return s_.substr(start + 1, pos_ - start - 2);
    }
    if (c == '<') {
      int depth = 0;
      do {
        if (pos_ >= s_.size())
          throw Fail{};
        depth += s_[pos_] == '<' ? 1 : s_[pos_] == '>' ? -1 : 0;
        ++pos_;
      } while (depth > 0);
      return s_.substr(start, pos_ - start);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        ++pos_;
      return s_.substr(start, pos_ - start);
    }
    // Numeral: [-]?(.[0-9]+ | [0-9]+(.[0-9]*)?)
    if (c == '-')
      ++pos_;
    bool digits = false;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      ++pos_;
      digits = true;
    }
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        ++pos_;
        digits = true;
      }
    }
    if (!digits)
      throw Fail{};
    return s_.substr(start, pos_ - start);
  }

  void graph() {
    std::string kind = id();
    if (keyword(kind, "strict"))
      kind = id();
    if (keyword(kind, "digraph"))
      directed_ = true;
    else if (!keyword(kind, "graph"))
      throw Fail{};
    if (!peek("{"))
      id();
    expect("{");
    stmt_list();
    expect("}");
  }

  void stmt_list() {
    while (!peek("}")) {
      stmt();
      accept(";");
    }
  }

  void attr_list() {
    last_attrs_.clear();
    while (accept("[")) {
      while (!accept("]")) {
        std::string k = id();
        expect("=");
        last_attrs_[k] = id();
        if (!accept(";"))
          accept(",");
      }
    }
  }

  // Returns the node id, or "" for a subgraph operand.
  std::string operand() {
    if (peek("{")) {
      subgraph_body();
      return "";
    }
    std::string a = id();
    if (keyword(a, "subgraph")) {
      if (!peek("{"))
        id();
      subgraph_body();
      return "";
    }
    return a;
  }

  void subgraph_body() {
    expect("{");
    stmt_list();
    expect("}");
  }

  void stmt() {
    if (peek("{")) {
      subgraph_body();
      edge_rhs("");
      return;
    }
    std::string a = id();
    if (keyword(a, "graph") || keyword(a, "node") || keyword(a, "edge")) {
      if (!peek("["))
        throw Fail{};
      attr_list();
      return;
    }
    if (keyword(a, "subgraph")) {
      if (!peek("{"))
        id();
      subgraph_body();
      edge_rhs("");
      return;
    }
    if (accept("=")) {
      id();
      return;
    }
    edge_rhs(a);
  }

  void edge_rhs(std::string from) {
    const char* op = directed_ ? "->" : "--";
    std::size_t first = edges_.size();
    while (accept(op)) {
      std::string to = operand();
      if (!from.empty() && !to.empty())
        edges_.push_back({from, to, ""});
      from = to;
    }
    attr_list();
    if (auto it = last_attrs_.find("label"); it != last_attrs_.end())
      for (std::size_t i = first; i < edges_.size(); ++i)
        edges_[i].label = it->second;
  }

  std::string s_;
  std::size_t pos_ = 0;
  bool directed_ = false;
  std::vector<DotEdge> edges_;
  std::map<std::string, std::string> last_attrs_;
};

} // namespace testing
