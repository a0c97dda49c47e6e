#include "support.hpp"
#include "dot_grammar.hpp"

#include "bratteli/error.hpp"
#include "bratteli/io.hpp"

#include <doctest.h>

#include <functional>
#include <map>

using namespace bratteli;
using namespace testing;
using bratteli::io::Json;

namespace {

BratteliDiagram random_explicit(std::mt19937_64& rng) {
  std::vector<std::size_t> levels{1};
  std::vector<IntMatrix> inc;
  for (std::size_t n = 0, depth = 1 + rng() % 4; n < depth; ++n) {
    std::size_t rows = 1 + rng() % 3;
    IntMatrix f(rows, levels.back());
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < f.cols(); ++c)
        f(r, c) = static_cast<std::int64_t>(rng() % 3);
    for (std::size_t r = 0; r < rows; ++r)
      f(r, rng() % f.cols()) += 1;
    for (std::size_t c = 0; c < f.cols(); ++c)
      f(rng() % rows, c) += 1;
    inc.push_back(f);
    levels.push_back(rows);
  }
  return BratteliDiagram::build(levels, inc, ExplicitTail{});
}

// Diagrams with exact built-in measures.
BratteliDiagram random_rule(std::mt19937_64& rng) {
  switch (rng() % 5) {
  case 0: return BratteliDiagram::odometer(2 + rng() % 3);
  case 1: return br();
  case 2: return br_even();
  case 3: {
    // Constant row sums give the uniform measure.
    std::int64_t a = 1 + static_cast<std::int64_t>(rng() % 3), b = 1 + static_cast<std::int64_t>(rng() % 3);
    return BratteliDiagram::stationary({1, 1}, IntMatrix::from_rows({{a, b}, {b, a}}));
  }
  default: return telescope(odometer2(), {0, 1 + rng() % 3});
  }
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::InvalidArgument;
}

std::string message_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

// Serialized text, parsed back.
Json through_text(const Json& j) { return io::parse_text(j.dump(2)); }

} // namespace

TEST_CASE("diagram files") {
  auto j = io::parse_text(R"({"levels": [1, 2], "incidence": [[[1], [2]]], "tail": "explicit"})");
  auto d = io::diagram_from_json(j);
  CHECK(d.depth() == std::optional<std::size_t>(1));
  CHECK(d.incidence(0) == IntMatrix::from_rows({{1}, {2}}));
  CHECK(io::diagram_from_json(io::parse_text(R"({"tail": "br"})")) == br());
  CHECK(io::diagram_from_json(io::parse_text(R"({"tail": {"odometer": 2}})")) == odometer2());
  auto s = io::diagram_from_json(io::parse_text(R"({"tail": {"stationary": [[1, 1], [1, 0]]}, "levels": [1, 2], "incidence": [[[1], [1]]]})"));
  CHECK(s.incidence(3) == IntMatrix::from_rows({{1, 1}, {1, 0}}));
  CHECK(code_of([] { io::diagram_from_json(io::parse_text(R"({"levels": [1, 2], "incidence": [[[1]]]})")); }) ==
        ErrorCode::ShapeMismatch);
}

TEST_CASE("diagram round trips") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 200; ++trial) {
    auto d = trial % 2 ? random_explicit(rng) : random_rule(rng);
    auto back = io::diagram_from_json(through_text(io::diagram_to_json(d)));
    CHECK(back == d);
    CHECK(io::diagram_to_json(back) == io::diagram_to_json(d));
  }
}

TEST_CASE("diagram summary") {
  auto j = io::diagram_summary(br(), 3);
  CHECK(j["tail"] == "br");
  CHECK(j["depth"] == "unbounded");
  CHECK(j["vertex_counts"] == Json::parse("[1, 2, 3, 4]"));
  CHECK(j["path_counts"] == Json::parse("[[1], [1, 1], [2, 2, 2], [6, 6, 6, 6]]"));
  CHECK(j["cantor"] == true);
}

TEST_CASE("element, set and path round trips") {
  std::mt19937_64 rng(72);
  for (int trial = 0; trial < 200; ++trial) {
    auto d = trial % 2 ? random_explicit(rng) : random_rule(rng);
    std::size_t level = rng() % (d.depth() ? *d.depth() + 1 : 3);
    auto g = random_element(d, level, rng);
    CHECK(io::element_from_json(d, through_text(io::element_to_json(g))) == g);
    auto a = random_set(d, level, rng);
    CHECK(io::clopen_from_json(d, through_text(io::clopen_to_json(a))) == a);
    PathTable t(d, level);
    std::size_t v = rng() % t.vertex_count(level);
    auto p = t.path_of_index(v, rng() % t.count(v));
    CHECK(io::path_from_json(through_text(io::path_to_json(p))) == p);
  }
}

TEST_CASE("element files") {
  auto d = br();
  auto g = io::element_from_json(d, io::parse_text(R"({"level": 2, "perms": {"1": [1, 0]}})"));
  CHECK(g.level() == 2);
  CHECK(g.perm(0) == Permutation{0, 1});
  CHECK(g.perm(1) == Permutation{1, 0});
  CHECK(code_of([&] { io::element_from_json(d, io::parse_text(R"({"level": 2, "perms": {"1": [0, 0]}})")); }) ==
        ErrorCode::InvalidArgument);
  CHECK(code_of([&] { io::element_from_json(d, io::parse_text(R"({"level": 2, "perms": {"1": [0, 1, 2]}})")); }) ==
        ErrorCode::ShapeMismatch);
  auto msg = message_of([&] { io::element_from_json(d, io::parse_text(R"({"level": 2, "perms": {"1": [0, "x"]}})")); });
  CHECK(msg.find("perms.1[1]") != std::string::npos);
}

TEST_CASE("measure files") {
  auto d = odometer2();
  auto mu = io::measure_from_json(d, io::parse_text(R"({"weights": {"0": {"0": "1"}, "1": {"0": "1/2"}}, "tail": {"geometric": "1/2"}})"));
  CHECK(mu.weight(5, 0) == Value(Rational(1, 32)));
  auto b = io::measure_from_json(br(), io::parse_text(R"({"tail": "builtin"})"));
  CHECK(b.weight(3, 2) == Value(Rational(1, 24)));
  CHECK(code_of([] {
          io::measure_from_json(odometer2(), io::parse_text(R"({"weights": {"0": {"0": "1"}, "1": {"0": "1/3"}}, "tail": "builtin"})"));
        }) == ErrorCode::ConsistencyViolation);
  CHECK(code_of([] {
          io::measure_from_json(odometer2(), io::parse_text(R"({"weights": {"0": {"0": "1"}, "1": {"0": "1/3"}}, "tail": "none"})"));
        }) == ErrorCode::ConsistencyViolation);
  auto j = io::measure_to_json(mu, 2);
  CHECK(j["weights"] == Json::parse(R"({"0": {"0": "1"}, "1": {"0": "1/2"}})"));
  CHECK(j["tail"] == Json::parse(R"({"geometric": "1/2"})"));
  // Rule measures are written to the requested depth in lowest terms.
  auto jb = io::measure_to_json(b, 2);
  CHECK(jb["weights"]["2"]["1"] == "1/6");
  CHECK(jb["tail"] == "builtin");
}

TEST_CASE("measure and character round trips") {
  std::mt19937_64 rng(73);
  for (int trial = 0; trial < 200; ++trial) {
    auto d = random_rule(rng);
    auto mu = builtin_measure(d);
    std::size_t depth = 1 + rng() % 4;
    auto back = io::measure_from_json(d, through_text(io::measure_to_json(mu, depth)));
    // A certificate table is written in full.
    auto cert = validate_certificate(d, weight_table(mu, depth), depth);
    auto cback = io::measure_from_json(d, through_text(io::measure_to_json(cert, depth)));
    CHECK(io::measure_to_json(cback, depth) == io::measure_to_json(cert, depth));
    for (std::size_t n = 0; n <= depth; ++n) {
      CHECK(back.weights(n) == mu.weights(n));
      CHECK(cback.weights(n) == mu.weights(n));
    }

    CharacterSpec spec;
    for (std::size_t k = 0, terms = 1 + rng() % 3; k < terms; ++k)
      spec.terms.push_back({mu, rng() % 5 == 0 ? Exponent::inf() : Exponent::finite(static_cast<unsigned>(rng() % 4))});
    auto cs = io::character_from_json(d, through_text(io::character_to_json(spec, depth)));
    REQUIRE(cs.terms.size() == spec.terms.size());
    for (std::size_t k = 0; k < cs.terms.size(); ++k) {
      CHECK(cs.terms[k].alpha == spec.terms[k].alpha);
      CHECK(cs.terms[k].measure.weights(depth) == mu.weights(depth));
    }
  }
}

TEST_CASE("character files") {
  auto d = br();
  auto spec = io::character_from_json(d, io::parse_text(R"({"terms": [{"measure": "builtin", "alpha": 2}, {"measure": "builtin", "alpha": "inf"}]})"));
  CHECK(spec.terms[0].alpha == Exponent::finite(2));
  CHECK(spec.regular());
  CHECK(code_of([] { io::exponent_from_json(Json(-1)); }) == ErrorCode::ParseError);
  CHECK(code_of([] { io::exponent_from_json(Json("infinite")); }) == ErrorCode::ParseError);
}

TEST_CASE("rperm, matrix and value round trips") {
  std::mt19937_64 rng(74);
  for (int trial = 0; trial < 200; ++trial) {
    RationalPermutation r(random_perm(1 + rng() % 10, rng));
    CHECK(io::rperm_from_json(through_text(io::rperm_to_json(r))) == r);
    std::size_t n = rng() % 4;
    ValueMatrix m(n, std::vector<Value>(n));
    for (auto& row : m)
      for (auto& x : row) {
        Rational a(static_cast<long>(rng() % 21) - 10, 1 + static_cast<long>(rng() % 12));
        x = rng() % 4 ? Value(a) : Value(a, a + Rational(1, 1 + static_cast<long>(rng() % 7)));
      }
    CHECK(io::matrix_from_json(through_text(io::matrix_to_json(m))) == m);
  }
  CHECK(io::value_from_json(Json("6/4")) == Value(Rational(3, 2)));
  CHECK(io::value_from_json(Json(3)) == Value(3));
  CHECK(io::rational_to_json(Rational(-2, 4)) == Json("-1/2"));
  CHECK(io::rational_to_json(Rational(2)) == Json("2"));
  CHECK(io::rperm_from_json(io::parse_text(R"({"perm": [1, 0]})")) == RationalPermutation(Permutation{1, 0}));
  CHECK(code_of([] { io::rperm_from_json(io::parse_text(R"({"n": 3, "perm": [1, 0]})")); }) == ErrorCode::ShapeMismatch);
}

TEST_CASE("parse errors carry a position") {
  auto msg = message_of([] { io::parse_text("{\n  \"levels\": [1,\n  }"); });
  CHECK(msg.find("line 3") != std::string::npos);
  CHECK(msg.find("column") != std::string::npos);
  CHECK(code_of([] { io::parse_text("[1, 2"); }) == ErrorCode::ParseError);
  auto field = message_of([] { io::diagram_from_json(io::parse_text(R"({"levels": [1, "two"], "tail": "explicit"})")); });
  CHECK(field.find("levels[1]") != std::string::npos);
  CHECK(code_of([] { io::value_from_json(Json("1/0")); }) == ErrorCode::ParseError);
  CHECK(io::value_from_json(Json("[1/3,1/2]")) == Value(Rational(1, 3), Rational(1, 2)));
  CHECK(code_of([] { io::value_from_json(Json("[1/2,1/3]")); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("dot export is a valid digraph with levels as ranks") {
  std::mt19937_64 rng(75);
  for (int trial = 0; trial < 200; ++trial) {
    auto d = trial % 2 ? random_explicit(rng) : random_rule(rng);
    std::size_t depth = d.depth() ? *d.depth() : 3;
    bool collapse = rng() % 2;
    DotChecker dot(io::to_dot(d, depth, collapse));
    REQUIRE(dot.parse());
    CHECK(dot.directed());
    std::map<std::pair<std::string, std::string>, std::int64_t> count;
    for (const auto& e : dot.edges())
      count[{e.from, e.to}] += collapse ? (e.label.empty() ? 1 : std::stoll(e.label)) : 1;
    std::map<std::pair<std::string, std::string>, std::int64_t> expected;
    for (std::size_t n = 0; n < depth; ++n) {
      IntMatrix f = d.incidence(n);
      for (std::size_t w = 0; w < f.rows(); ++w)
        for (std::size_t v = 0; v < f.cols(); ++v)
          if (f(w, v))
            expected[{"v" + std::to_string(n) + "_" + std::to_string(v), "v" + std::to_string(n + 1) + "_" + std::to_string(w)}] = f(w, v);
    }
    CHECK(count == expected);
    if (collapse)
      CHECK(dot.edges().size() == expected.size());
  }
  CHECK_FALSE(DotChecker("digraph { a -> }").parse());
  CHECK_FALSE(DotChecker("digraph { a -> b ").parse());
  CHECK(code_of([] { io::to_dot(explicit_diagram({1, 1}, {{{1}}}), 2, false); }) == ErrorCode::DepthExceeded);
}
