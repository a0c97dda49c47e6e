#include "bratteli/bratteli.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

// A failed library call or unreadable input: exit code 1.
struct DomainError {
  std::string message;
};

void check(bd_status s) {
  if (s != BD_OK)
    throw DomainError{bd_last_error()};
}

struct Text {
  char* p = nullptr;
  ~Text() { bd_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

template <class T, void (*F)(T*)>
struct Owned {
  T* p = nullptr;
  Owned() = default;
  Owned(const Owned&) = delete;
  Owned(Owned&& o) noexcept : p(o.p) { o.p = nullptr; }
  Owned& operator=(Owned&& o) noexcept {
    std::swap(p, o.p);
    return *this;
  }
  ~Owned() { F(p); }
};

using Diagram = Owned<bd_diagram, bd_diagram_free>;
using Clopen = Owned<bd_clopen, bd_clopen_free>;
using Measure = Owned<bd_measure, bd_measure_free>;
using Element = Owned<bd_element, bd_element_free>;
using Character = Owned<bd_character, bd_character_free>;
using Rperm = Owned<bd_rperm, bd_rperm_free>;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw DomainError{"ParseError: cannot read " + path};
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Json read_json(const std::string& path) {
  try {
    return Json::parse(read_file(path));
  } catch (const Json::parse_error&) {
    // Let the library report the position.
    Diagram d;
    check(bd_diagram_from_json(read_file(path).c_str(), &d.p));
    throw DomainError{"ParseError: " + path};
  }
}

Diagram load_diagram(const std::string& path) {
  Diagram d;
  check(bd_diagram_from_json(read_file(path).c_str(), &d.p));
  return d;
}

Element load_element(const Diagram& d, const std::string& path) {
  Element g;
  check(bd_element_from_json(d.p, read_file(path).c_str(), &g.p));
  return g;
}

Clopen load_set(const Diagram& d, const std::string& path) {
  Clopen a;
  check(bd_clopen_from_json(d.p, read_file(path).c_str(), &a.p));
  return a;
}

Measure load_measure(const Diagram& d, const std::string& ref) {
  Measure mu;
  if (ref == "builtin")
    check(bd_measure_builtin(d.p, &mu.p));
  else
    check(bd_measure_from_json(d.p, read_file(ref).c_str(), &mu.p));
  return mu;
}

// Measure references given as file paths are inlined, relative to the
// character file.
Character load_character(const Diagram& d, const std::string& path) {
  Json j = read_json(path);
  if (j.is_object() && j.contains("terms") && j["terms"].is_array())
    for (auto& term : j["terms"])
      if (term.is_object() && term.contains("measure") && term["measure"].is_string() && term["measure"] != "builtin") {
        fs::path ref = term["measure"].get<std::string>();
        if (ref.is_relative())
          ref = fs::path(path).parent_path() / ref;
        term["measure"] = read_json(ref.string());
      }
  Character chi;
  check(bd_character_from_json(d.p, j.dump().c_str(), &chi.p));
  return chi;
}

Rperm load_rperm(const std::string& path) {
  Rperm r;
  check(bd_rperm_from_json(read_file(path).c_str(), &r.p));
  return r;
}

struct Output {
  bool decimal = false;
  int digits = 12;

  Json value(const std::string& v) const {
    if (!decimal)
      return v;
    Text t;
    check(bd_value_decimal(v.c_str(), digits, &t.p));
    return t.str();
  }

  // Exact values in a report become decimals; counts stay integral.
  void convert(Json& j, const std::string& key = "") const {
    static const std::regex exact(R"(^-?\d+(/\d+)?$|^\[-?\d+(/\d+)?,-?\d+(/\d+)?\]$)");
    if (j.is_object()) {
      for (auto it = j.begin(); it != j.end(); ++it)
        convert(it.value(), it.key());
    } else if (j.is_array()) {
      for (auto& x : j)
        convert(x, key);
    } else if (j.is_string() && key != "counts" && key != "path_counts") {
      auto s = j.get<std::string>();
      if (std::regex_match(s, exact))
        j = value(s);
    }
  }

  void print(Json j) const {
    if (decimal)
      convert(j);
    std::cout << j.dump(2) << "\n";
  }

  void print_text(const Text& t) const {
    Json j = Json::parse(t.str());
    print(std::move(j));
  }

  void print_value(const Text& t) const { print(Json{{"value", t.str()}}); }
};

std::vector<const bd_element*> raw(const std::vector<Element>& gs) {
  std::vector<const bd_element*> out;
  for (const auto& g : gs)
    out.push_back(g.p);
  return out;
}

std::vector<const bd_measure*> raw(const std::vector<Measure>& ms) {
  std::vector<const bd_measure*> out;
  for (const auto& m : ms)
    out.push_back(m.p);
  return out;
}

std::string element_json(const Element& g) {
  Text t;
  check(bd_element_to_json(g.p, &t.p));
  return t.str();
}

std::string set_json(const Clopen& a) {
  Text t;
  check(bd_clopen_to_json(a.p, &t.p));
  return t.str();
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Full groups of Bratteli diagrams: path spaces, invariant measures, characters"};
  app.require_subcommand(1);
  Output out;
  app.add_flag("--float", out.decimal, "Print values as decimals with error bounds");
  app.add_option("--digits", out.digits, "Digits for --float")->check(CLI::Range(1, 200));

  std::function<int()> action;
  auto run = [&](CLI::App* cmd, std::function<int()> f) { cmd->callback([&action, f] { action = f; }); };

  // Shared option storage; each subcommand binds what it uses.
  std::string diagram_path, file, file2, character_path, set_path, eps = "1/2", tolerance_text = "0", alpha = "1";
  std::vector<std::string> elements, measures, targets;
  std::vector<std::size_t> cuts;
  std::size_t depth = 4, bound = 16, level = 0, n = 0, n_from = 0, n_to = 0, r = 1, p = 2, m = 2;
  double tolerance = 1e-12;
  bool collapse = false, to_br = false;

  auto diagram_opt = [&](CLI::App* c) { c->add_option("--diagram", diagram_path, "Diagram file")->required(); };

  // diagram
  auto* dia = app.add_subcommand("diagram", "Diagram files and structure");
  dia->require_subcommand(1);
  {
    auto* c = dia->add_subcommand("validate", "Validate a diagram file and summarize its first levels");
    c->add_option("file", file, "Diagram file")->required();
    c->add_option("--depth", depth, "Levels to summarize");
    run(c, [&] {
      auto d = load_diagram(file);
      Text t;
      check(bd_diagram_summary(d.p, depth, &t.p));
      out.print_text(t);
      return 0;
    });
  }
  {
    auto* c = dia->add_subcommand("paths", "Path counts h_v at a level");
    c->add_option("file", file, "Diagram file")->required();
    c->add_option("--depth", depth, "Level");
    run(c, [&] {
      auto d = load_diagram(file);
      Text t;
      check(bd_diagram_path_counts(d.p, depth, &t.p));
      out.print_text(t);
      return 0;
    });
  }
  {
    auto* c = dia->add_subcommand("telescope", "Telescope to the given cut levels");
    c->add_option("file", file, "Diagram file")->required();
    c->add_option("--cuts", cuts, "Increasing levels starting at 0")->required()->delimiter(',');
    run(c, [&] {
      auto d = load_diagram(file);
      Diagram t;
      check(bd_diagram_telescope(d.p, cuts.data(), cuts.size(), &t.p));
      Text j;
      check(bd_diagram_to_json(t.p, &j.p));
      out.print_text(j);
      return 0;
    });
  }
  {
    auto* c = dia->add_subcommand("simple", "Search for simplicity witnesses");
    c->add_option("file", file, "Diagram file")->required();
    c->add_option("--bound", bound, "Search bound");
    run(c, [&] {
      auto d = load_diagram(file);
      Text t;
      check(bd_diagram_simple(d.p, bound, &t.p));
      out.print_text(t);
      return 0;
    });
  }
  {
    auto* c = dia->add_subcommand("even-telescope", "Search for a telescoping with even multiplicities");
    c->add_option("file", file, "Diagram file")->required();
    c->add_option("--bound", bound, "Search bound");
    run(c, [&] {
      auto d = load_diagram(file);
      Text t;
      check(bd_diagram_even_telescoping(d.p, bound, &t.p));
      out.print_text(t);
      return 0;
    });
  }
  {
    auto* c = dia->add_subcommand("dot", "DOT digraph of levels 0..depth");
    c->add_option("file", file, "Diagram file")->required();
    c->add_option("--depth", depth, "Last level drawn");
    c->add_flag("--collapse-multiedges", collapse, "One edge per bundle, labelled with its multiplicity");
    run(c, [&] {
      auto d = load_diagram(file);
      Text t;
      check(bd_diagram_dot(d.p, depth, collapse, &t.p));
      std::cout << t.str();
      return 0;
    });
  }

  // measure
  auto* mea = app.add_subcommand("measure", "Invariant measures");
  mea->require_subcommand(1);
  {
    auto* c = mea->add_subcommand("validate", "Check a measure certificate");
    diagram_opt(c);
    c->add_option("file", file, "Measure file")->required();
    c->add_option("--depth", depth, "Levels to print for rule-based measures");
    run(c, [&] {
      auto d = load_diagram(diagram_path);
      auto mu = load_measure(d, file);
      Text t;
      check(bd_measure_to_json(mu.p, depth, &t.p));
      out.print_text(t);
      return 0;
    });
  }
  {
    auto* c = mea->add_subcommand("builtin", "The built-in measure of a diagram");
    diagram_opt(c);
    c->add_option("--depth", depth, "Levels to print");
    run(c, [&] {
      auto d = load_diagram(diagram_path);
      auto mu = load_measure(d, "builtin");
      Text t;
      check(bd_measure_to_json(mu.p, depth, &t.p));
      out.print_text(t);
      return 0;
    });
  }
  {
    auto* c = mea->add_subcommand("of", "Measure of a clopen set");
    diagram_opt(c);
    c->add_option("--measure", file, "Measure file or \"builtin\"")->default_val("builtin");
    c->add_option("--set", set_path, "Set file")->required();
    run(c, [&] {
      auto d = load_diagram(diagram_path);
      auto mu = load_measure(d, file);
      auto a = load_set(d, set_path);
      Text t;
      check(bd_measure_of(mu.p, a.p, &t.p));
      out.print_value(t);
      return 0;
    });
  }

  // group
  auto* grp = app.add_subcommand("group", "Elements of the full group");
  grp->require_subcommand(1);
  auto measures_or_builtin = [&](const Diagram& d) {
    std::vector<Measure> ms;
    if (measures.empty())
      ms.push_back(load_measure(d, "builtin"));
    for (const auto& ref : measures)
      ms.push_back(load_measure(d, ref));
    return ms;
  };
  {
    auto* c = grp->add_subcommand("compose", "Product g_1 g_2 ... (the last acts first)");
    diagram_opt(c);
    c->add_option("--element", elements, "Element files")->required();
    run(c, [&] {
      auto d = load_diagram(diagram_path);
      auto acc = load_element(d, elements.back());
      for (std::size_t i = elements.size() - 1; i-- > 0;) {
        auto g = load_element(d, elements[i]);
        Element next;
        check(bd_element_compose(d.p, g.p, acc.p, &next.p));
        acc = std::move(next);
      }
      out.print(Json::parse(element_json(acc)));
      return 0;
    });
  }
  for (const char* name : {"fix", "support"}) {
    bool is_fix = std::string(name) == "fix";
    auto* c = grp->add_subcommand(name, is_fix ? "Fixed set as a clopen set" : "Support as a clopen set");
    diagram_opt(c);
    c->add_option("--element", elements, "Element file")->required()->expected(1);
    run(c, [&, is_fix] {
      auto d = load_diagram(diagram_path);
      auto g = load_element(d, elements.front());
      Clopen a;
      check(is_fix ? bd_element_fix(d.p, g.p, &a.p) : bd_element_support(d.p, g.p, &a.p));
      out.print(Json::parse(set_json(a)));
      return 0;
    });
  }
  {
    auto* c = grp->add_subcommand("cycles", "Per-vertex cycle types");
    diagram_opt(c);
    c->add_option("--element", elements, "Element file")->required()->expected(1);
    run(c, [&] {
      auto d = load_diagram(diagram_path);
      auto g = load_element(d, elements.front());
      Text t;
      check(bd_element_cycles(g.p, &t.p));
      out.print_text(t);
      return 0;
    });
  }
  {
    auto* c = grp->add_subcommand("conjugate", "Conjugacy inside G_level with a witness");
    diagram_opt(c);
    c->add_option("--element", elements, "Two element files")->required()->expected(2);
    auto* lv = c->add_option("--level", level, "Level (default: the larger element level)");
    run(c, [&, lv] {
      auto d = load_diagram(diagram_path);
      auto g = load_element(d, elements[0]);
      auto h = load_element(d, elements[1]);
      std::size_t at = lv->count() ? level : std::max(bd_element_level(g.p), bd_element_level(h.p));
      Text t;
      check(bd_element_conjugate(d.p, g.p, h.p, at, &t.p));
      out.print_text(t);
      return 0;
    });
  }
  {
    auto* c = grp->add_subcommand("hn", "The involution h_n on a set A");
    diagram_opt(c);
    c->add_option("--set", set_path, "Set file")->required();
    c->add_option("--n", n, "Level n")->required();
    run(c, [&] {
      auto d = load_diagram(diagram_path);
      auto a = load_set(d, set_path);
      Text t;
      check(bd_make_hn(d.p, a.p, n, &t.p));
      out.print_text(t);
      return 0;
    });
  }
  {
    auto* c = grp->add_subcommand("claim1", "Two p-cycles with an even-cycle quotient");
    c->add_option("--p", p, "Cycle length")->required();
    run(c, [&] {
      Text t;
      check(bd_claim1(p, &t.p));
      out.print_text(t);
      return 0;
    });
  }
  {
    auto* c = grp->add_subcommand("si-family", "The 2^r conjugates of s with even quotients");
    diagram_opt(c);
    c->add_option("--element", elements, "Element s")->required()->expected(1);
    c->add_option("--r", r, "Number of layers")->required();
    c->add_option("--eps", eps, "Defect bound p/q");
    c->add_option("--measure", measures, "Measures checked (default: built-in)");
    run(c, [&] {
      auto d = load_diagram(diagram_path);
      auto s = load_element(d, elements.front());
      auto ms = measures_or_builtin(d);
      auto mr = raw(ms);
      Text t;
      check(bd_si_family(d.p, s.p, r, eps.c_str(), mr.data(), mr.size(), &t.p));
      out.print_text(t);
      return 0;
    });
  }
  {
    auto* c = grp->add_subcommand("metric", "max over measures of mu{x : g x != h x}");
    diagram_opt(c);
    c->add_option("--element", elements, "Two element files")->required()->expected(2);
    c->add_option("--measure", measures, "Measures (default: built-in)");
    run(c, [&] {
      auto d = load_diagram(diagram_path);
      auto g = load_element(d, elements[0]);
      auto h = load_element(d, elements[1]);
      auto ms = measures_or_builtin(d);
      auto mr = raw(ms);
      Text t;
      check(bd_element_metric(d.p, g.p, h.p, mr.data(), mr.size(), &t.p));
      out.print_value(t);
      return 0;
    });
  }

  // char
  auto* chr = app.add_subcommand("char", "Characters of the full group");
  chr->require_subcommand(1);
  auto character_opt = [&](CLI::App* c) {
    diagram_opt(c);
    c->add_option("--character", character_path, "Character file")->required();
  };
  auto load_elements = [&](const Diagram& d) {
    std::vector<Element> gs;
    for (const auto& path : elements)
      gs.push_back(load_element(d, path));
    return gs;
  };
  {
    auto* c = chr->add_subcommand("eval", "chi(g)");
    character_opt(c);
    c->add_option("--element", elements, "Element file")->required()->expected(1);
    run(c, [&] {
      auto d = load_diagram(diagram_path);
      auto chi = load_character(d, character_path);
      auto g = load_element(d, elements.front());
      Text t;
      check(bd_character_eval(d.p, chi.p, g.p, &t.p));
      out.print_value(t);
      return 0;
    });
  }
  {
    auto* c = chr->add_subcommand("trace", "Trace of the projection P^A");
    character_opt(c);
    c->add_option("--set", set_path, "Set file")->required();
    run(c, [&] {
      auto d = load_diagram(diagram_path);
      auto chi = load_character(d, character_path);
      auto a = load_set(d, set_path);
      Text t;
      check(bd_character_trace(d.p, chi.p, a.p, &t.p));
      out.print_value(t);
      return 0;
    });
  }
  {
    auto* c = chr->add_subcommand("gram", "Matrix chi(g_i g_j^-1)");
    character_opt(c);
    c->add_option("--element", elements, "Element files")->required();
    run(c, [&] {
      auto d = load_diagram(diagram_path);
      auto chi = load_character(d, character_path);
      auto gs = load_elements(d);
      auto gr = raw(gs);
      Text t;
      check(bd_character_gram(d.p, chi.p, gr.data(), gr.size(), &t.p));
      out.print_text(t);
      return 0;
    });
  }
  {
    auto* c = chr->add_subcommand("psd", "Positive semidefiniteness; exit 1 with a witness when it fails");
    c->add_option("file", file, "Matrix file")->required();
    c->add_option("--tolerance", tolerance, "Numeric tolerance for interval entries");
    run(c, [&] {
      Text t;
      check(bd_psd_check(read_file(file).c_str(), tolerance, &t.p));
      Json j = Json::parse(t.str());
      out.print(j);
      return j["psd"].get<bool>() ? 0 : 1;
    });
  }
  {
    auto* c = chr->add_subcommand("central", "chi(g h) = chi(h g) on all pairs");
    character_opt(c);
    c->add_option("--element", elements, "Element files")->required();
    run(c, [&] {
      auto d = load_diagram(diagram_path);
      auto chi = load_character(d, character_path);
      auto gs = load_elements(d);
      auto gr = raw(gs);
      Text t;
      check(bd_character_central(d.p, chi.p, gr.data(), gr.size(), &t.p));
      out.print_text(t);
      return 0;
    });
  }
  {
    auto* c = chr->add_subcommand("mult", "chi(g h_n) against chi(g) prod c_i^alpha_i");
    character_opt(c);
    c->add_option("--element", elements, "Element g")->required()->expected(1);
    c->add_option("--target", targets, "Target fraction per term")->required();
    c->add_option("--from", n_from, "First n")->required();
    c->add_option("--to", n_to, "Last n")->required();
    c->add_option("--tolerance", tolerance_text, "Allowed |mu(B_n) - c| as p/q");
    run(c, [&] {
      auto d = load_diagram(diagram_path);
      auto chi = load_character(d, character_path);
      auto g = load_element(d, elements.front());
      Json tj = targets;
      Text t;
      check(bd_character_mult(d.p, chi.p, g.p, tj.dump().c_str(), n_from, n_to, tolerance_text.c_str(), &t.p));
      out.print_text(t);
      return 0;
    });
  }
  {
    auto* c = chr->add_subcommand("proj-limit", "chi(h_n) against the trace of P^A");
    character_opt(c);
    c->add_option("--set", set_path, "Set file")->required();
    c->add_option("--from", n_from, "First n")->required();
    c->add_option("--to", n_to, "Last n")->required();
    run(c, [&] {
      auto d = load_diagram(diagram_path);
      auto chi = load_character(d, character_path);
      auto a = load_set(d, set_path);
      Text t;
      check(bd_character_proj_limit(d.p, chi.p, a.p, n_from, n_to, &t.p));
      out.print_text(t);
      return 0;
    });
  }

  // rperm
  auto* rpm = app.add_subcommand("rperm", "Rational permutations of [0,1)");
  rpm->require_subcommand(1);
  auto print_rperm = [&](const Rperm& x) {
    Text t;
    check(bd_rperm_to_json(x.p, &t.p));
    out.print_text(t);
  };
  {
    auto* c = rpm->add_subcommand("refine", "Periodic embedding into denominator n m");
    c->add_option("file", file, "Rational permutation file")->required();
    c->add_option("--m", m, "Multiplier")->required()->check(CLI::PositiveNumber);
    run(c, [&] {
      auto x = load_rperm(file);
      Rperm y;
      check(bd_rperm_refine(x.p, m, &y.p));
      print_rperm(y);
      return 0;
    });
  }
  {
    auto* c = rpm->add_subcommand("compose", "g h at the lcm denominator (h acts first)");
    c->add_option("first", file, "Rational permutation g")->required();
    c->add_option("second", file2, "Rational permutation h")->required();
    run(c, [&] {
      auto g = load_rperm(file);
      auto h = load_rperm(file2);
      Rperm y;
      check(bd_rperm_compose(g.p, h.p, &y.p));
      print_rperm(y);
      return 0;
    });
  }
  {
    auto* c = rpm->add_subcommand("fix", "Lebesgue measure of the fixed set");
    c->add_option("file", file, "Rational permutation file")->required();
    run(c, [&] {
      auto x = load_rperm(file);
      Text t;
      check(bd_rperm_fix(x.p, &t.p));
      out.print_value(t);
      return 0;
    });
  }
  {
    auto* c = rpm->add_subcommand("char", "chi_k = lambda(Fix)^k");
    c->add_option("file", file, "Rational permutation file")->required();
    c->add_option("--alpha", alpha, "k or inf");
    run(c, [&] {
      auto x = load_rperm(file);
      Text t;
      check(bd_rperm_char(x.p, alpha.c_str(), &t.p));
      out.print_value(t);
      return 0;
    });
  }
  {
    auto* c = rpm->add_subcommand("from-br", "B_R element as a rational permutation (or back with --to-br)");
    diagram_opt(c);
    c->add_option("file", file, "Element file (rational permutation file with --to-br)")->required();
    c->add_flag("--to-br", to_br, "Pull a rational permutation back to the B_R diagram");
    run(c, [&] {
      auto d = load_diagram(diagram_path);
      if (to_br) {
        auto x = load_rperm(file);
        Element g;
        check(bd_rperm_to_element(d.p, x.p, &g.p));
        out.print(Json::parse(element_json(g)));
      } else {
        auto g = load_element(d, file);
        Rperm x;
        check(bd_rperm_from_element(d.p, g.p, &x.p));
        print_rperm(x);
      }
      return 0;
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    return action ? action() : 2;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.message << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: Internal: " << e.what() << "\n";
    return 1;
  }
}
