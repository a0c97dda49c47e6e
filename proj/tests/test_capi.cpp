#include "bratteli/bratteli.h"

#include <doctest.h>
#include <json.hpp>

#include <memory>
#include <string>

using Json = nlohmann::json;

namespace {

struct Text {
  char* p = nullptr;
  ~Text() { bd_string_free(p); }
  std::string str() const { return p ? p : ""; }
  Json json() const { return Json::parse(str()); }
};

template <class T, void (*F)(T*)>
struct Handle {
  T* p = nullptr;
  ~Handle() { F(p); }
};

using Diagram = Handle<bd_diagram, bd_diagram_free>;
using Element = Handle<bd_element, bd_element_free>;
using Clopen = Handle<bd_clopen, bd_clopen_free>;
using Measure = Handle<bd_measure, bd_measure_free>;
using Character = Handle<bd_character, bd_character_free>;
using Rperm = Handle<bd_rperm, bd_rperm_free>;

const char* kOdometer = R"({"tail": {"odometer": 2}})";
const char* kBr = R"({"tail": "br"})";

} // namespace

TEST_CASE("status names and errors") {
  CHECK(std::string(bd_status_name(BD_OK)) == "Ok");
  CHECK(std::string(bd_status_name(BD_SHAPE_MISMATCH)) == "ShapeMismatch");
  CHECK(std::string(bd_status_name(BD_INVALID_ARGUMENT)) == "InvalidArgument");
  CHECK(std::string(bd_status_name(BD_INTERNAL)) == "Internal");
  Diagram d;
  CHECK(bd_diagram_from_json("{\"levels\": [1, 2], \"incidence\": [[[1]]]}", &d.p) == BD_SHAPE_MISMATCH);
  CHECK(d.p == nullptr);
  CHECK(std::string(bd_last_error()).rfind("ShapeMismatch", 0) == 0);
  CHECK(bd_diagram_from_json("{", &d.p) == BD_PARSE_ERROR);
  CHECK(std::string(bd_last_error()).find("line 1") != std::string::npos);
  CHECK(bd_diagram_from_json(nullptr, &d.p) == BD_INVALID_ARGUMENT);
  CHECK(bd_diagram_from_json(kOdometer, &d.p) == BD_OK);
  CHECK(std::string(bd_last_error()).empty());
  Text t;
  CHECK(bd_diagram_summary(nullptr, 2, &t.p) == BD_INVALID_ARGUMENT);
}

TEST_CASE("diagram calls") {
  Diagram d;
  REQUIRE(bd_diagram_from_json(kBr, &d.p) == BD_OK);
  Text counts;
  REQUIRE(bd_diagram_path_counts(d.p, 3, &counts.p) == BD_OK);
  CHECK(counts.json()["counts"] == Json::parse("[6, 6, 6, 6]"));
  Diagram t;
  size_t cuts[] = {0, 2};
  REQUIRE(bd_diagram_telescope(d.p, cuts, 2, &t.p) == BD_OK);
  Text inc;
  REQUIRE(bd_diagram_path_counts(t.p, 1, &inc.p) == BD_OK);
  CHECK(inc.json()["counts"] == Json::parse("[2, 2, 2]"));
  size_t bad[] = {0, 2, 1};
  Diagram u;
  CHECK(bd_diagram_telescope(d.p, bad, 3, &u.p) == BD_INVALID_CUTS);
  Text simple, even, dot;
  REQUIRE(bd_diagram_simple(d.p, 6, &simple.p) == BD_OK);
  CHECK(simple.json()["verdict"] == "simple");
  REQUIRE(bd_diagram_even_telescoping(d.p, 8, &even.p) == BD_OK);
  CHECK(even.json()["cuts"] == Json::parse("[0, 2, 4, 6, 8]"));
  REQUIRE(bd_diagram_dot(d.p, 2, 1, &dot.p) == BD_OK);
  CHECK(dot.str().rfind("digraph", 0) == 0);
  Text back;
  REQUIRE(bd_diagram_to_json(t.p, &back.p) == BD_OK);
  Diagram again;
  CHECK(bd_diagram_from_json(back.p, &again.p) == BD_OK);
}

TEST_CASE("measures, sets and elements") {
  Diagram d;
  REQUIRE(bd_diagram_from_json(kOdometer, &d.p) == BD_OK);
  Measure mu;
  REQUIRE(bd_measure_builtin(d.p, &mu.p) == BD_OK);
  Clopen a;
  REQUIRE(bd_clopen_from_json(d.p, R"({"level": 2, "sets": {"0": [0, 1, 3]}})", &a.p) == BD_OK);
  Text m;
  REQUIRE(bd_measure_of(mu.p, a.p, &m.p) == BD_OK);
  CHECK(m.str() == "3/4");
  Text dec;
  REQUIRE(bd_value_decimal(m.p, 4, &dec.p) == BD_OK);
  CHECK(dec.str().rfind("0.75", 0) == 0);

  Element g, h, gh, gi;
  REQUIRE(bd_element_from_json(d.p, R"({"level": 2, "perms": {"0": [1, 0, 2, 3]}})", &g.p) == BD_OK);
  REQUIRE(bd_element_from_json(d.p, R"({"level": 1, "perms": {"0": [1, 0]}})", &h.p) == BD_OK);
  CHECK(bd_element_level(g.p) == 2);
  REQUIRE(bd_element_compose(d.p, g.p, h.p, &gh.p) == BD_OK);
  REQUIRE(bd_element_inverse(d.p, g.p, &gi.p) == BD_OK);
  Text ghj;
  REQUIRE(bd_element_to_json(gh.p, &ghj.p) == BD_OK);
  // h swaps the halves {0,1} and {2,3}; g then swaps 0 and 1.
  CHECK(ghj.json()["perms"]["0"] == Json::parse("[2, 3, 1, 0]"));
  Clopen f, s;
  REQUIRE(bd_element_fix(d.p, g.p, &f.p) == BD_OK);
  REQUIRE(bd_element_support(d.p, g.p, &s.p) == BD_OK);
  Text fm;
  REQUIRE(bd_measure_of(mu.p, f.p, &fm.p) == BD_OK);
  CHECK(fm.str() == "1/2");
  Text cyc, conj, metric;
  REQUIRE(bd_element_cycles(g.p, &cyc.p) == BD_OK);
  CHECK(cyc.json()["vertices"][0]["cycles"] == "(0 1)");
  Element g2;
  REQUIRE(bd_element_from_json(d.p, R"({"level": 2, "perms": {"0": [0, 1, 3, 2]}})", &g2.p) == BD_OK);
  REQUIRE(bd_element_conjugate(d.p, g.p, g2.p, 2, &conj.p) == BD_OK);
  CHECK(conj.json()["conjugate"] == true);
  const bd_measure* ms[] = {mu.p};
  REQUIRE(bd_element_metric(d.p, g.p, g2.p, ms, 1, &metric.p) == BD_OK);
  CHECK(metric.str() == "1");
  CHECK(bd_element_metric(d.p, g.p, g2.p, ms, 0, &metric.p) == BD_INVALID_ARGUMENT);
  CHECK(bd_element_from_json(d.p, R"({"level": 1, "perms": {"0": [0, 0]}})", &g2.p) == BD_INVALID_ARGUMENT);
}

TEST_CASE("group constructions") {
  Diagram d;
  REQUIRE(bd_diagram_from_json(kOdometer, &d.p) == BD_OK);
  Clopen a;
  REQUIRE(bd_clopen_from_json(d.p, R"({"level": 1, "sets": {"0": [0]}})", &a.p) == BD_OK);
  Text hn;
  REQUIRE(bd_make_hn(d.p, a.p, 1, &hn.p) == BD_OK);
  CHECK(hn.json()["max_fixed_fraction"] == "0");
  Text c;
  REQUIRE(bd_claim1(5, &c.p) == BD_OK);
  CHECK(c.json()["m"] == 8);
  Diagram t;
  size_t cuts[] = {0, 3};
  REQUIRE(bd_diagram_telescope(d.p, cuts, 2, &t.p) == BD_OK);
  Element s;
  REQUIRE(bd_element_from_json(t.p, R"({"level": 1, "perms": {"0": [1, 0, 2, 3, 4, 5, 6, 7]}})", &s.p) == BD_OK);
  Measure mu;
  REQUIRE(bd_measure_builtin(t.p, &mu.p) == BD_OK);
  const bd_measure* ms[] = {mu.p};
  Text fam;
  REQUIRE(bd_si_family(t.p, s.p, 2, "1/2", ms, 1, &fam.p) == BD_OK);
  auto j = fam.json();
  CHECK(j["members"].size() == 4);
  CHECK(j["check"]["all_conjugate"] == true);
  CHECK(j["check"]["defect_below_eps"] == true);
}

TEST_CASE("characters") {
  Diagram d;
  REQUIRE(bd_diagram_from_json(kOdometer, &d.p) == BD_OK);
  Character chi;
  REQUIRE(bd_character_from_json(d.p, R"({"terms": [{"measure": "builtin", "alpha": 1}]})", &chi.p) == BD_OK);
  Element e, s, t;
  REQUIRE(bd_element_from_json(d.p, R"({"level": 2, "perms": {}})", &e.p) == BD_OK);
  REQUIRE(bd_element_from_json(d.p, R"({"level": 2, "perms": {"0": [1, 0, 2, 3]}})", &s.p) == BD_OK);
  REQUIRE(bd_element_from_json(d.p, R"({"level": 2, "perms": {"0": [1, 0, 3, 2]}})", &t.p) == BD_OK);
  Text v;
  REQUIRE(bd_character_eval(d.p, chi.p, s.p, &v.p) == BD_OK);
  CHECK(v.str() == "1/2");
  const bd_element* gs[] = {e.p, s.p, t.p};
  Text gram, central;
  REQUIRE(bd_character_gram(d.p, chi.p, gs, 3, &gram.p) == BD_OK);
  CHECK(gram.json()["matrix"] == Json::parse(R"([["1", "1/2", "0"], ["1/2", "1", "1/2"], ["0", "1/2", "1"]])"));
  REQUIRE(bd_character_central(d.p, chi.p, gs, 3, &central.p) == BD_OK);
  CHECK(central.json()["pairs_checked"] == 3);
  Text psd;
  REQUIRE(bd_psd_check(gram.p, 1e-12, &psd.p) == BD_OK);
  CHECK(psd.json()["psd"] == true);
  Text bad;
  REQUIRE(bd_psd_check("[[1, 2], [2, 1]]", 1e-12, &bad.p) == BD_OK);
  CHECK(bad.json()["psd"] == false);
  CHECK(bad.json()["witness_text"] == "(1,-1)");
  Text ns;
  CHECK(bd_psd_check("[[1, 2], [0, 1]]", 1e-12, &ns.p) == BD_NOT_SYMMETRIC);

  Clopen a;
  REQUIRE(bd_clopen_from_json(d.p, R"({"level": 1, "sets": {"0": [0]}})", &a.p) == BD_OK);
  Text tr, mult, proj;
  REQUIRE(bd_character_trace(d.p, chi.p, a.p, &tr.p) == BD_OK);
  CHECK(tr.str() == "1/2");
  REQUIRE(bd_character_mult(d.p, chi.p, s.p, R"(["1/2"])", 2, 4, "0", &mult.p) == BD_OK);
  for (const auto& step : mult.json()["steps"])
    CHECK(step["chi_product"] == "1/4");
  Text un;
  CHECK(bd_character_mult(d.p, chi.p, s.p, R"(["1/3"])", 2, 3, "0", &un.p) == BD_UNREACHABLE_TARGET);
  REQUIRE(bd_character_proj_limit(d.p, chi.p, a.p, 1, 4, &proj.p) == BD_OK);
  for (const auto& step : proj.json()["steps"])
    CHECK(step["chi_hn"] == "1/2");
}

TEST_CASE("rational permutations") {
  Rperm r, rr, c;
  REQUIRE(bd_rperm_from_json(R"({"perm": [1, 0]})", &r.p) == BD_OK);
  REQUIRE(bd_rperm_refine(r.p, 2, &rr.p) == BD_OK);
  Text j;
  REQUIRE(bd_rperm_to_json(rr.p, &j.p) == BD_OK);
  CHECK(j.json()["perm"] == Json::parse("[2, 3, 0, 1]"));
  REQUIRE(bd_rperm_compose(r.p, rr.p, &c.p) == BD_OK);
  Text fx, ch, inf, ap;
  REQUIRE(bd_rperm_fix(c.p, &fx.p) == BD_OK);
  CHECK(fx.str() == "1");
  REQUIRE(bd_rperm_apply(r.p, "1/4", &ap.p) == BD_OK);
  CHECK(ap.str() == "3/4");
  CHECK(bd_rperm_apply(r.p, "1", &ap.p) == BD_ARGUMENT_OUT_OF_RANGE);
  Rperm third;
  REQUIRE(bd_rperm_from_json(R"({"perm": [1, 0, 2]})", &third.p) == BD_OK);
  REQUIRE(bd_rperm_char(third.p, "2", &ch.p) == BD_OK);
  CHECK(ch.str() == "1/9");
  REQUIRE(bd_rperm_char(third.p, "inf", &inf.p) == BD_OK);
  CHECK(inf.str() == "0");

  Diagram d, o;
  REQUIRE(bd_diagram_from_json(kBr, &d.p) == BD_OK);
  REQUIRE(bd_diagram_from_json(kOdometer, &o.p) == BD_OK);
  Element g;
  REQUIRE(bd_rperm_to_element(d.p, r.p, &g.p) == BD_OK);
  CHECK(bd_element_level(g.p) == 2);
  Rperm back;
  REQUIRE(bd_rperm_from_element(d.p, g.p, &back.p) == BD_OK);
  Text bj;
  REQUIRE(bd_rperm_to_json(back.p, &bj.p) == BD_OK);
  CHECK(bj.json()["n"] == 6);
  Rperm wrong;
  CHECK(bd_rperm_from_element(o.p, g.p, &wrong.p) == BD_WRONG_DIAGRAM);
}
