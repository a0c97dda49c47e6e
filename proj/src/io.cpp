#include "bratteli/io.hpp"

#include "bratteli/error.hpp"

#include <algorithm>
#include <sstream>

namespace bratteli::io {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::ParseError, where + ": " + what);
}

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object())
    fail(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end())
    fail(where, std::string("missing field \"") + key + "\"");
  return *it;
}

std::int64_t as_int(const Json& j, const std::string& where) {
  if (!j.is_number_integer())
    fail(where, "expected an integer");
  return j.get<std::int64_t>();
}

std::size_t as_index(const Json& j, const std::string& where) {
  auto v = as_int(j, where);
  if (v < 0)
    fail(where, "expected a nonnegative integer");
  return static_cast<std::size_t>(v);
}

std::size_t key_index(const std::string& key, const std::string& where) {
  std::size_t pos = 0;
  std::size_t v = 0;
  try {
    v = std::stoul(key, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != key.size())
    fail(where, "key \"" + key + "\" is not a nonnegative integer");
  return v;
}

const Json& array_of(const Json& j, const std::string& where) {
  if (!j.is_array())
    fail(where, "expected an array");
  return j;
}

std::vector<std::int64_t> int_list(const Json& j, const std::string& where) {
  std::vector<std::int64_t> out;
  std::size_t i = 0;
  for (const auto& x : array_of(j, where))
    out.push_back(as_int(x, where + "[" + std::to_string(i++) + "]"));
  return out;
}

std::vector<std::size_t> index_list(const Json& j, const std::string& where) {
  std::vector<std::size_t> out;
  std::size_t i = 0;
  for (const auto& x : array_of(j, where))
    out.push_back(as_index(x, where + "[" + std::to_string(i++) + "]"));
  return out;
}

IntMatrix matrix_field(const Json& j, const std::string& where) {
  std::vector<std::vector<std::int64_t>> rows;
  std::size_t r = 0;
  for (const auto& row : array_of(j, where)) {
    rows.push_back(int_list(row, where + "[" + std::to_string(r) + "]"));
    if (rows.back().size() != rows.front().size())
      fail(where, "rows have different lengths");
    ++r;
  }
  return IntMatrix::from_rows(rows);
}

Json matrix_json(const IntMatrix& m) {
  Json out = Json::array();
  for (const auto& row : m.to_rows())
    out.push_back(row);
  return out;
}

Json integer_json(const Integer& n) {
  if (n <= Integer(std::numeric_limits<std::int64_t>::max()))
    return n.convert_to<std::int64_t>();
  return n.str();
}

std::string tail_name(const Tail& t) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, ExplicitTail>)
          return "explicit";
        else if constexpr (std::is_same_v<T, StationaryTail>)
          return "stationary";
        else if constexpr (std::is_same_v<T, BrTail>)
          return "br";
        else if constexpr (std::is_same_v<T, OdometerTail>)
          return "odometer";
        else
          return "telescope";
      },
      t);
}

// Levels listed by a measure file, as a dense table.
std::vector<std::vector<Value>> weight_table_from_json(const BratteliDiagram& d, const Json& w) {
  std::vector<std::vector<Value>> table;
  if (w.is_array()) {
    std::size_t n = 0;
    for (const auto& level : w) {
      std::string where = "weights[" + std::to_string(n) + "]";
      std::vector<Value> row;
      std::size_t v = 0;
      for (const auto& q : array_of(level, where))
        row.push_back(value_from_json(q, where + "[" + std::to_string(v++) + "]"));
      table.push_back(std::move(row));
      ++n;
    }
    return table;
  }
  if (!w.is_object())
    fail("weights", "expected an object keyed by level");
  std::size_t depth = 0;
  for (const auto& [key, _] : w.items())
    depth = std::max(depth, key_index(key, "weights"));
  table.resize(depth + 1);
  for (const auto& [key, level] : w.items()) {
    std::size_t n = key_index(key, "weights");
    std::string where = "weights." + key;
    if (!d.has_level(n))
      throw Error(ErrorCode::DepthExceeded, where + ": level beyond the diagram");
    table[n].assign(d.vertex_count(n), Value(-1));
    std::vector<bool> seen(table[n].size(), false);
    for (const auto& [vkey, q] : level.items()) {
      std::size_t v = key_index(vkey, where);
      if (v >= table[n].size())
        throw Error(ErrorCode::ShapeMismatch, where + ": vertex " + vkey + " outside the level");
      table[n][v] = value_from_json(q, where + "." + vkey);
      seen[v] = true;
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end())
      throw Error(ErrorCode::ShapeMismatch, where + ": every vertex needs a weight");
  }
  for (std::size_t n = 0; n < table.size(); ++n)
    if (table[n].empty())
      throw Error(ErrorCode::ShapeMismatch, "weights: level " + std::to_string(n) + " missing");
  return table;
}

bool is_builtin_rule(const InvariantMeasure& mu) {
  return !std::holds_alternative<InvariantMeasure::Table>(mu.rule());
}

} // namespace

Json parse_text(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ", column " + std::to_string(col) +
                                           ": malformed document");
  }
}

Value value_from_json(const Json& j, const std::string& where) {
  if (j.is_number_integer())
    return Value(Rational(j.get<std::int64_t>()));
  if (j.is_object())
    return Value(value_from_json(field(j, "lo", where), where + ".lo").lo(),
                 value_from_json(field(j, "hi", where), where + ".hi").lo());
  if (!j.is_string())
    fail(where, "expected a rational such as \"1/2\"");
  auto s = j.get<std::string>();
  try {
    if (!s.empty() && s.front() == '[') {
      auto comma = s.find(',');
      if (s.back() != ']' || comma == std::string::npos)
        fail(where, "malformed interval \"" + s + "\"");
      return Value(parse_rational(s.substr(1, comma - 1)), parse_rational(s.substr(comma + 1, s.size() - comma - 2)));
    }
    return Value(parse_rational(s));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ParseError)
      fail(where, e.what());
    throw;
  }
}

Json value_to_json(const Value& v) { return to_string(v); }

Json rational_to_json(const Rational& q) { return to_string(q); }

Json integer_to_json(const Integer& n) { return integer_json(n); }

BratteliDiagram diagram_from_json(const Json& j) {
  if (!j.is_object())
    fail("diagram", "expected an object");
  Tail tail = ExplicitTail{};
  if (auto it = j.find("tail"); it != j.end()) {
    const Json& t = *it;
    if (t.is_string()) {
      auto name = t.get<std::string>();
      if (name == "explicit")
        tail = ExplicitTail{};
      else if (name == "br")
        tail = BrTail{};
      else
        fail("tail", "unknown tail \"" + name + "\"");
    } else if (t.is_object() && t.size() == 1) {
      if (t.contains("stationary")) {
        tail = StationaryTail{matrix_field(t["stationary"], "tail.stationary")};
      } else if (t.contains("odometer")) {
        tail = OdometerTail{as_int(t["odometer"], "tail.odometer")};
      } else if (t.contains("telescope")) {
        const Json& tel = t["telescope"];
        auto base = std::make_shared<const BratteliDiagram>(diagram_from_json(field(tel, "base", "tail.telescope")));
        auto cuts = index_list(field(tel, "cuts", "tail.telescope"), "tail.telescope.cuts");
        tail = TelescopeTail{base, cuts};
      } else {
        fail("tail", "unknown tail rule \"" + t.begin().key() + "\"");
      }
    } else {
      fail("tail", "expected a tail name or a single-key object");
    }
  }
  bool rule = !std::holds_alternative<ExplicitTail>(tail);
  std::vector<std::size_t> levels{1};
  std::vector<IntMatrix> incidence;
  if (j.contains("levels") || !rule)
    levels = index_list(field(j, "levels", "diagram"), "levels");
  if (j.contains("incidence") || !rule) {
    std::size_t n = 0;
    for (const auto& m : array_of(field(j, "incidence", "diagram"), "incidence")) {
      incidence.push_back(matrix_field(m, "incidence[" + std::to_string(n) + "]"));
      ++n;
    }
  }
  return BratteliDiagram::build(std::move(levels), std::move(incidence), std::move(tail));
}

Json diagram_to_json(const BratteliDiagram& d) {
  Json j;
  j["levels"] = d.prefix_levels();
  Json inc = Json::array();
  for (const auto& m : d.prefix_incidence())
    inc.push_back(matrix_json(m));
  j["incidence"] = inc;
  std::visit(
      [&](const auto& t) {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, ExplicitTail>)
          j["tail"] = "explicit";
        else if constexpr (std::is_same_v<T, StationaryTail>)
          j["tail"] = Json{{"stationary", matrix_json(t.matrix)}};
        else if constexpr (std::is_same_v<T, BrTail>)
          j["tail"] = "br";
        else if constexpr (std::is_same_v<T, OdometerTail>)
          j["tail"] = Json{{"odometer", t.base}};
        else
          j["tail"] = Json{{"telescope", Json{{"base", diagram_to_json(*t.base)}, {"cuts", t.cuts}}}};
      },
      d.tail());
  return j;
}

Json diagram_summary(const BratteliDiagram& d, std::size_t depth) {
  Json j;
  j["tail"] = tail_name(d.tail());
  if (auto dd = d.depth())
    j["depth"] = *dd;
  else
    j["depth"] = "unbounded";
  std::size_t shown = d.depth() ? std::min(depth, *d.depth()) : depth;
  std::vector<std::size_t> counts;
  Json paths = Json::array();
  for (std::size_t n = 0; n <= shown; ++n) {
    counts.push_back(d.vertex_count(n));
    Json row = Json::array();
    for (const auto& h : path_counts(d, n))
      row.push_back(integer_json(h));
    paths.push_back(row);
  }
  j["vertex_counts"] = counts;
  j["path_counts"] = paths;
  if (auto c = d.cantor_tail())
    j["cantor"] = *c;
  else
    j["cantor"] = "assumed";
  return j;
}

Json path_to_json(const Path& p) {
  Json out = Json::array();
  for (const auto& e : p)
    out.push_back(Json{{"source", e.source}, {"target", e.target}, {"index", e.index}});
  return out;
}

Path path_from_json(const Json& j) {
  Path p;
  std::size_t k = 0;
  for (const auto& e : array_of(j, "path")) {
    std::string where = "path[" + std::to_string(k++) + "]";
    Edge edge;
    edge.source = as_index(field(e, "source", where), where + ".source");
    edge.target = as_index(field(e, "target", where), where + ".target");
    edge.index = as_int(field(e, "index", where), where + ".index");
    p.push_back(edge);
  }
  return p;
}

GroupElement element_from_json(const BratteliDiagram& d, const Json& j) {
  std::size_t n = as_index(field(j, "level", "element"), "element.level");
  auto counts = path_counts(d, n);
  std::vector<Permutation> perms;
  for (const auto& h : counts) {
    if (h > Integer(kMaxPathsPerLevel))
      throw Error(ErrorCode::PathSpaceTooLarge, "level " + std::to_string(n) + " is too large to tabulate");
    perms.push_back(perm::identity(h.convert_to<std::size_t>()));
  }
  if (auto it = j.find("perms"); it != j.end()) {
    if (!it->is_object())
      fail("element.perms", "expected an object keyed by vertex");
    for (const auto& [key, images] : it->items()) {
      std::string where = "element.perms." + key;
      std::size_t v = key_index(key, where);
      if (v >= perms.size())
        throw Error(ErrorCode::ShapeMismatch, where + ": vertex outside level " + std::to_string(n));
      Permutation p;
      for (auto x : index_list(images, where))
        p.push_back(static_cast<std::uint32_t>(x));
      perms[v] = std::move(p);
    }
  }
  return make_element(d, n, std::move(perms));
}

Json element_to_json(const GroupElement& g) {
  Json perms = Json::object();
  for (std::size_t v = 0; v < g.vertex_count(); ++v)
    perms[std::to_string(v)] = g.perm(v);
  return Json{{"level", g.level()}, {"perms", perms}};
}

ClopenSet clopen_from_json(const BratteliDiagram& d, const Json& j) {
  std::size_t n = as_index(field(j, "level", "set"), "set.level");
  std::vector<std::vector<std::size_t>> indices(d.vertex_count(n));
  if (auto it = j.find("sets"); it != j.end()) {
    if (!it->is_object())
      fail("set.sets", "expected an object keyed by vertex");
    for (const auto& [key, list] : it->items()) {
      std::string where = "set.sets." + key;
      std::size_t v = key_index(key, where);
      if (v >= indices.size())
        throw Error(ErrorCode::IndexOutOfRange, where + ": vertex outside level " + std::to_string(n));
      indices[v] = index_list(list, where);
    }
  }
  return ClopenSet::from_indices(d, n, indices);
}

Json clopen_to_json(const ClopenSet& a) {
  Json sets = Json::object();
  for (std::size_t v = 0; v < a.vertex_count(); ++v)
    sets[std::to_string(v)] = a.indices(v);
  return Json{{"level", a.level()}, {"sets", sets}};
}

InvariantMeasure measure_from_json(const BratteliDiagram& d, const Json& j) {
  if (!j.is_object())
    fail("measure", "expected an object");
  std::string tail = "none";
  std::optional<Rational> ratio;
  if (auto it = j.find("tail"); it != j.end()) {
    if (it->is_string()) {
      tail = it->get<std::string>();
      if (tail != "none" && tail != "builtin")
        fail("measure.tail", "unknown tail \"" + tail + "\"");
    } else if (it->is_object() && it->contains("geometric")) {
      tail = "geometric";
      ratio = value_from_json((*it)["geometric"], "measure.tail.geometric").rational();
    } else {
      fail("measure.tail", "expected \"none\", \"builtin\" or {\"geometric\": ratio}");
    }
  }
  std::vector<std::vector<Value>> table;
  if (auto it = j.find("weights"); it != j.end())
    table = weight_table_from_json(d, *it);
  if (tail == "builtin") {
    InvariantMeasure mu = builtin_measure(d);
    for (std::size_t n = 0; n < table.size(); ++n) {
      auto w = mu.weights(n);
      for (std::size_t v = 0; v < w.size(); ++v)
        if (!w[v].overlaps(table[n][v]))
          throw Error(ErrorCode::ConsistencyViolation, "level " + std::to_string(n) + " vertex " + std::to_string(v) +
                                                           ": " + to_string(table[n][v]) + " differs from the built-in " +
                                                           to_string(w[v]));
    }
    return mu;
  }
  if (table.empty())
    fail("measure", "a certificate needs \"weights\"");
  std::size_t depth = table.size() - 1;
  return validate_certificate(d, std::move(table), depth, ratio);
}

Json measure_to_json(const InvariantMeasure& mu, std::size_t depth) {
  Json weights = Json::object();
  std::optional<Rational> ratio;
  bool builtin = is_builtin_rule(mu);
  std::size_t last = depth;
  if (!builtin) {
    const auto& t = std::get<InvariantMeasure::Table>(mu.rule());
    last = t.weights.size() - 1;
    ratio = t.geometric_ratio;
  }
  for (std::size_t n = 0; n <= last; ++n) {
    Json level = Json::object();
    auto w = mu.weights(n);
    for (std::size_t v = 0; v < w.size(); ++v)
      level[std::to_string(v)] = value_to_json(w[v]);
    weights[std::to_string(n)] = level;
  }
  Json j{{"weights", weights}};
  if (builtin)
    j["tail"] = "builtin";
  else if (ratio)
    j["tail"] = Json{{"geometric", rational_to_json(*ratio)}};
  else
    j["tail"] = "none";
  return j;
}

Exponent exponent_from_json(const Json& j) {
  if (j.is_string()) {
    auto s = j.get<std::string>();
    if (s == "inf" || s == "infinity")
      return Exponent::inf();
    fail("alpha", "expected a nonnegative integer or \"inf\"");
  }
  auto k = as_int(j, "alpha");
  if (k < 0)
    fail("alpha", "expected a nonnegative integer or \"inf\"");
  return Exponent::finite(static_cast<unsigned>(k));
}

CharacterSpec character_from_json(const BratteliDiagram& d, const Json& j) {
  CharacterSpec spec;
  std::size_t i = 0;
  for (const auto& term : array_of(field(j, "terms", "character"), "character.terms")) {
    std::string where = "character.terms[" + std::to_string(i++) + "]";
    const Json& m = field(term, "measure", where);
    std::optional<InvariantMeasure> mu;
    if (m.is_string()) {
      if (m.get<std::string>() != "builtin")
        fail(where + ".measure", "expected \"builtin\" or an inline measure");
      mu = builtin_measure(d);
    } else {
      mu = measure_from_json(d, m);
    }
    spec.terms.push_back({*mu, exponent_from_json(field(term, "alpha", where))});
  }
  return spec;
}

Json character_to_json(const CharacterSpec& spec, std::size_t depth) {
  Json terms = Json::array();
  for (const auto& t : spec.terms) {
    Json measure = is_builtin_rule(t.measure) ? Json("builtin") : measure_to_json(t.measure, depth);
    Json alpha = t.alpha.infinite ? Json("inf") : Json(t.alpha.value);
    terms.push_back(Json{{"measure", measure}, {"alpha", alpha}});
  }
  return Json{{"terms", terms}};
}

RationalPermutation rperm_from_json(const Json& j) {
  auto list = index_list(field(j, "perm", "rperm"), "rperm.perm");
  if (j.contains("n") && as_index(j["n"], "rperm.n") != list.size())
    throw Error(ErrorCode::ShapeMismatch, "rperm: n differs from the permutation length");
  Permutation p(list.begin(), list.end());
  return RationalPermutation(std::move(p));
}

Json rperm_to_json(const RationalPermutation& g) {
  return Json{{"n", g.denominator()}, {"perm", g.perm()}};
}

ValueMatrix matrix_from_json(const Json& j) {
  const Json& rows = j.is_object() ? field(j, "matrix", "matrix") : j;
  ValueMatrix m;
  std::size_t r = 0;
  for (const auto& row : array_of(rows, "matrix")) {
    std::string where = "matrix[" + std::to_string(r++) + "]";
    std::vector<Value> out;
    std::size_t c = 0;
    for (const auto& x : array_of(row, where))
      out.push_back(value_from_json(x, where + "[" + std::to_string(c++) + "]"));
    m.push_back(std::move(out));
  }
  return m;
}

Json matrix_to_json(const ValueMatrix& m) {
  Json out = Json::array();
  for (const auto& row : m) {
    Json r = Json::array();
    for (const auto& v : row)
      r.push_back(value_to_json(v));
    out.push_back(r);
  }
  return out;
}

std::string to_dot(const BratteliDiagram& d, std::size_t depth, bool collapse_multiedges) {
  if (auto dd = d.depth(); dd && depth > *dd)
    throw Error(ErrorCode::DepthExceeded, "diagram has depth " + std::to_string(*dd));
  auto node = [](std::size_t n, std::size_t v) { return "v" + std::to_string(n) + "_" + std::to_string(v); };
  std::ostringstream out;
  out << "digraph bratteli {\n  rankdir=TB;\n  node [shape=circle];\n";
  for (std::size_t n = 0; n <= depth; ++n) {
    out << "  { rank=same;";
    for (std::size_t v = 0; v < d.vertex_count(n); ++v)
      out << " " << node(n, v) << " [label=\"" << v << "\"];";
    out << " }\n";
  }
  for (std::size_t n = 0; n < depth; ++n) {
    IntMatrix f = d.incidence(n);
    for (std::size_t w = 0; w < f.rows(); ++w)
      for (std::size_t v = 0; v < f.cols(); ++v) {
        auto m = f(w, v);
        if (m == 0)
          continue;
        if (collapse_multiedges) {
          out << "  " << node(n, v) << " -> " << node(n + 1, w);
          if (m > 1)
            out << " [label=\"" << m << "\"]";
          out << ";\n";
        } else {
          for (std::int64_t e = 0; e < m; ++e)
            out << "  " << node(n, v) << " -> " << node(n + 1, w) << ";\n";
        }
      }
  }
  out << "}\n";
  return out.str();
}

} // namespace bratteli::io
