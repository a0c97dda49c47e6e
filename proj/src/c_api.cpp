#include "bratteli/bratteli.h"

#include "bratteli/character.hpp"
#include "bratteli/error.hpp"
#include "bratteli/group.hpp"
#include "bratteli/io.hpp"
#include "bratteli/rperm.hpp"

#include <cstring>
#include <new>
#include <string>

using namespace bratteli;
using bratteli::io::Json;

struct bd_diagram {
  BratteliDiagram d;
};
struct bd_clopen {
  ClopenSet a;
};
struct bd_measure {
  InvariantMeasure mu;
};
struct bd_element {
  GroupElement g;
};
struct bd_character {
  CharacterSpec spec;
};
struct bd_rperm {
  RationalPermutation r;
};

namespace {

thread_local std::string last_error;

bd_status fail(bd_status status, const std::string& message) {
  last_error = message;
  return status;
}

template <class F>
bd_status guard(F&& f) {
  try {
    f();
    last_error.clear();
    return BD_OK;
  } catch (const Error& e) {
    return fail(static_cast<bd_status>(static_cast<int>(e.code()) + 1), e.what());
  } catch (const std::bad_alloc&) {
    return fail(BD_OVERFLOW, "Overflow: out of memory");
  } catch (const std::exception& e) {
    return fail(BD_INTERNAL, std::string("Internal: ") + e.what());
  } catch (...) {
    return fail(BD_INTERNAL, "Internal: unknown failure");
  }
}

void require(const void* p, const char* what) {
  if (!p)
    throw Error(ErrorCode::InvalidArgument, std::string(what) + " is null");
}

char* copy(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void emit(const Json& j, char** out) {
  require(out, "output");
  *out = copy(j.dump(2));
}

void emit_text(const std::string& s, char** out) {
  require(out, "output");
  *out = copy(s);
}

Json parse(const char* text) {
  require(text, "input text");
  return io::parse_text(text);
}

Value value_of(const char* text, const char* what) {
  require(text, what);
  return io::value_from_json(Json(std::string(text)), what);
}

std::vector<InvariantMeasure> measures_of(const bd_measure* const* ms, std::size_t n) {
  std::vector<InvariantMeasure> out;
  for (std::size_t i = 0; i < n; ++i) {
    require(ms[i], "measure");
    out.push_back(ms[i]->mu);
  }
  return out;
}

std::vector<GroupElement> elements_of(const bd_element* const* gs, std::size_t n) {
  std::vector<GroupElement> out;
  for (std::size_t i = 0; i < n; ++i) {
    require(gs[i], "element");
    out.push_back(gs[i]->g);
  }
  return out;
}

Json values_json(const std::vector<Value>& vs) {
  Json out = Json::array();
  for (const auto& v : vs)
    out.push_back(io::value_to_json(v));
  return out;
}

} // namespace

extern "C" {

const char* bd_last_error(void) { return last_error.c_str(); }

const char* bd_status_name(bd_status status) {
  if (status == BD_OK)
    return "Ok";
  if (status == BD_INTERNAL)
    return "Internal";
  if (status < BD_OK || status > BD_INTERNAL)
    return "Unknown";
  return error_name(static_cast<ErrorCode>(static_cast<int>(status) - 1)).data();
}

void bd_string_free(char* s) { delete[] s; }

bd_status bd_value_decimal(const char* value, int digits, char** out) {
  return guard([&] { emit_text(to_decimal_string(value_of(value, "value"), digits), out); });
}

bd_status bd_diagram_from_json(const char* json, bd_diagram** out) {
  return guard([&] {
    require(out, "output");
    *out = new bd_diagram{io::diagram_from_json(parse(json))};
  });
}

void bd_diagram_free(bd_diagram* d) { delete d; }

bd_status bd_diagram_to_json(const bd_diagram* d, char** out) {
  return guard([&] {
    require(d, "diagram");
    emit(io::diagram_to_json(d->d), out);
  });
}

bd_status bd_diagram_summary(const bd_diagram* d, size_t depth, char** out) {
  return guard([&] {
    require(d, "diagram");
    emit(io::diagram_summary(d->d, depth), out);
  });
}

bd_status bd_diagram_path_counts(const bd_diagram* d, size_t level, char** out) {
  return guard([&] {
    require(d, "diagram");
    Json counts = Json::array();
    for (const auto& h : path_counts(d->d, level))
      counts.push_back(io::integer_to_json(h));
    emit(Json{{"level", level}, {"counts", counts}}, out);
  });
}

bd_status bd_diagram_telescope(const bd_diagram* d, const size_t* cuts, size_t ncuts, bd_diagram** out) {
  return guard([&] {
    require(d, "diagram");
    require(out, "output");
    if (ncuts)
      require(cuts, "cuts");
    std::vector<std::size_t> c(cuts, cuts + ncuts);
    *out = new bd_diagram{telescope(d->d, c)};
  });
}

bd_status bd_diagram_simple(const bd_diagram* d, size_t bound, char** out) {
  return guard([&] {
    require(d, "diagram");
    auto r = is_simple(d->d, bound);
    Json j;
    switch (r.verdict) {
    case SimplicityReport::Verdict::Simple: j["verdict"] = "simple"; break;
    case SimplicityReport::Verdict::NotSimple: j["verdict"] = "not_simple"; break;
    case SimplicityReport::Verdict::Unknown: j["verdict"] = "unknown"; break;
    }
    j["bound"] = r.bound;
    Json w = Json::array();
    for (const auto& x : r.witnesses)
      w.push_back(Json{{"from", x.from}, {"to", x.to}});
    j["witnesses"] = w;
    j["failed_level"] = r.failed_level ? Json(*r.failed_level) : Json(nullptr);
    emit(j, out);
  });
}

bd_status bd_diagram_even_telescoping(const bd_diagram* d, size_t bound, char** out) {
  return guard([&] {
    require(d, "diagram");
    auto r = find_even_telescoping(d->d, bound);
    emit(Json{{"found", r.found}, {"cuts", r.cuts}, {"bound", r.bound}}, out);
  });
}

bd_status bd_diagram_dot(const bd_diagram* d, size_t depth, int collapse_multiedges, char** out) {
  return guard([&] {
    require(d, "diagram");
    emit_text(io::to_dot(d->d, depth, collapse_multiedges != 0), out);
  });
}

bd_status bd_clopen_from_json(const bd_diagram* d, const char* json, bd_clopen** out) {
  return guard([&] {
    require(d, "diagram");
    require(out, "output");
    *out = new bd_clopen{io::clopen_from_json(d->d, parse(json))};
  });
}

void bd_clopen_free(bd_clopen* a) { delete a; }

bd_status bd_clopen_to_json(const bd_clopen* a, char** out) {
  return guard([&] {
    require(a, "set");
    emit(io::clopen_to_json(a->a), out);
  });
}

bd_status bd_measure_from_json(const bd_diagram* d, const char* json, bd_measure** out) {
  return guard([&] {
    require(d, "diagram");
    require(out, "output");
    *out = new bd_measure{io::measure_from_json(d->d, parse(json))};
  });
}

bd_status bd_measure_builtin(const bd_diagram* d, bd_measure** out) {
  return guard([&] {
    require(d, "diagram");
    require(out, "output");
    *out = new bd_measure{builtin_measure(d->d)};
  });
}

void bd_measure_free(bd_measure* mu) { delete mu; }

bd_status bd_measure_to_json(const bd_measure* mu, size_t depth, char** out) {
  return guard([&] {
    require(mu, "measure");
    emit(io::measure_to_json(mu->mu, depth), out);
  });
}

bd_status bd_measure_of(const bd_measure* mu, const bd_clopen* a, char** value) {
  return guard([&] {
    require(mu, "measure");
    require(a, "set");
    emit_text(to_string(measure_of(mu->mu, a->a)), value);
  });
}

bd_status bd_element_from_json(const bd_diagram* d, const char* json, bd_element** out) {
  return guard([&] {
    require(d, "diagram");
    require(out, "output");
    *out = new bd_element{io::element_from_json(d->d, parse(json))};
  });
}

void bd_element_free(bd_element* g) { delete g; }

bd_status bd_element_to_json(const bd_element* g, char** out) {
  return guard([&] {
    require(g, "element");
    emit(io::element_to_json(g->g), out);
  });
}

size_t bd_element_level(const bd_element* g) { return g ? g->g.level() : 0; }

bd_status bd_element_compose(const bd_diagram* d, const bd_element* g, const bd_element* h, bd_element** out) {
  return guard([&] {
    require(d, "diagram");
    require(g, "element");
    require(h, "element");
    require(out, "output");
    *out = new bd_element{compose(d->d, g->g, h->g)};
  });
}

bd_status bd_element_inverse(const bd_diagram* d, const bd_element* g, bd_element** out) {
  return guard([&] {
    require(d, "diagram");
    require(g, "element");
    require(out, "output");
    *out = new bd_element{inverse(d->d, g->g)};
  });
}

bd_status bd_element_fix(const bd_diagram* d, const bd_element* g, bd_clopen** out) {
  return guard([&] {
    require(d, "diagram");
    require(g, "element");
    require(out, "output");
    *out = new bd_clopen{fix(d->d, g->g)};
  });
}

bd_status bd_element_support(const bd_diagram* d, const bd_element* g, bd_clopen** out) {
  return guard([&] {
    require(d, "diagram");
    require(g, "element");
    require(out, "output");
    *out = new bd_clopen{support(d->d, g->g)};
  });
}

bd_status bd_element_cycles(const bd_element* g, char** out) {
  return guard([&] {
    require(g, "element");
    auto c = cycle_data(g->g);
    Json vs = Json::array();
    for (std::size_t v = 0; v < g->g.vertex_count(); ++v)
      vs.push_back(Json{{"vertex", v}, {"cycle_type", c.cycle_types[v]}, {"cycles", perm::cycle_string(g->g.perm(v))}});
    emit(Json{{"level", c.level}, {"vertices", vs}, {"even_cycles", consists_of_even_cycles(g->g)}}, out);
  });
}

bd_status bd_element_conjugate(const bd_diagram* d, const bd_element* g, const bd_element* h, size_t level,
                               char** out) {
  return guard([&] {
    require(d, "diagram");
    require(g, "element");
    require(h, "element");
    auto r = conjugate_at_level(d->d, g->g, h->g, level);
    emit(Json{{"conjugate", r.conjugate},
              {"level", r.level},
              {"witness", r.witness ? io::element_to_json(*r.witness) : Json(nullptr)}},
         out);
  });
}

bd_status bd_make_hn(const bd_diagram* d, const bd_clopen* a, size_t n, char** out) {
  return guard([&] {
    require(d, "diagram");
    require(a, "set");
    auto r = make_hn(d->d, a->a, n);
    Json bundles = Json::array();
    for (const auto& b : r.bundles)
      bundles.push_back(Json{{"source", b.source},
                             {"target", b.target},
                             {"size", b.size},
                             {"fixed_fraction", io::rational_to_json(b.fixed_fraction)}});
    emit(Json{{"n", n},
              {"element", io::element_to_json(r.element)},
              {"bundles", bundles},
              {"max_fixed_fraction", io::rational_to_json(r.max_fixed_fraction)}},
         out);
  });
}

bd_status bd_claim1(size_t p, char** out) {
  return guard([&] {
    auto c = claim1_pair(p);
    auto q = perm::compose(c.h0, perm::inverse(c.h1));
    emit(Json{{"p", p},
              {"m", c.m},
              {"h0", perm::cycle_string(c.h0)},
              {"h1", perm::cycle_string(c.h1)},
              {"quotient", perm::cycle_string(q)},
              {"quotient_cycle_type", perm::cycle_type(q)}},
         out);
  });
}

bd_status bd_si_family(const bd_diagram* d, const bd_element* s, size_t r, const char* eps,
                       const bd_measure* const* measures, size_t nmeasures, char** out) {
  return guard([&] {
    require(d, "diagram");
    require(s, "element");
    if (nmeasures)
      require(measures, "measures");
    Rational e = value_of(eps, "eps").rational();
    auto fam = si_family(d->d, s->g, r, e);
    auto check = verify_si_family(d->d, s->g, fam, e, measures_of(measures, nmeasures));
    Json members = Json::array();
    for (std::size_t i = 0; i < fam.elements.size(); ++i)
      members.push_back(Json{{"label", fam.labels[i]}, {"element", io::element_to_json(fam.elements[i])}});
    emit(Json{{"r", r},
              {"eps", io::rational_to_json(e)},
              {"cuts", fam.cuts},
              {"level", fam.level},
              {"members", members},
              {"check",
               Json{{"all_conjugate", check.all_conjugate},
                    {"supports_equal", check.supports_equal},
                    {"quotients_even", check.quotients_even},
                    {"max_defect", io::value_to_json(check.max_defect)},
                    {"defect_below_eps", check.defect_below_eps}}}},
         out);
  });
}

bd_status bd_element_metric(const bd_diagram* d, const bd_element* g, const bd_element* h,
                            const bd_measure* const* measures, size_t nmeasures, char** value) {
  return guard([&] {
    require(d, "diagram");
    require(g, "element");
    require(h, "element");
    if (nmeasures)
      require(measures, "measures");
    emit_text(to_string(metric_distance(d->d, g->g, h->g, measures_of(measures, nmeasures))), value);
  });
}

bd_status bd_character_from_json(const bd_diagram* d, const char* json, bd_character** out) {
  return guard([&] {
    require(d, "diagram");
    require(out, "output");
    *out = new bd_character{io::character_from_json(d->d, parse(json))};
  });
}

void bd_character_free(bd_character* chi) { delete chi; }

bd_status bd_character_eval(const bd_diagram* d, const bd_character* chi, const bd_element* g, char** value) {
  return guard([&] {
    require(d, "diagram");
    require(chi, "character");
    require(g, "element");
    emit_text(to_string(eval_character(d->d, chi->spec, g->g)), value);
  });
}

bd_status bd_character_trace(const bd_diagram* d, const bd_character* chi, const bd_clopen* a, char** value) {
  return guard([&] {
    require(d, "diagram");
    require(chi, "character");
    require(a, "set");
    emit_text(to_string(trace_projection(d->d, chi->spec, a->a)), value);
  });
}

bd_status bd_character_gram(const bd_diagram* d, const bd_character* chi, const bd_element* const* elements,
                            size_t nelements, char** out) {
  return guard([&] {
    require(d, "diagram");
    require(chi, "character");
    if (nelements)
      require(elements, "elements");
    emit(Json{{"matrix", io::matrix_to_json(gram_matrix(d->d, chi->spec, elements_of(elements, nelements)))}}, out);
  });
}

bd_status bd_character_central(const bd_diagram* d, const bd_character* chi, const bd_element* const* elements,
                               size_t nelements, char** out) {
  return guard([&] {
    require(d, "diagram");
    require(chi, "character");
    if (nelements)
      require(elements, "elements");
    auto r = centrality_check(d->d, chi->spec, elements_of(elements, nelements));
    Json v = Json::array();
    for (const auto& [i, j] : r.violations)
      v.push_back(Json::array({i, j}));
    emit(Json{{"central", r.violations.empty()}, {"pairs_checked", r.pairs_checked}, {"violations", v}}, out);
  });
}

bd_status bd_psd_check(const char* matrix_json, double tolerance, char** out) {
  return guard([&] {
    auto r = psd_check(io::matrix_from_json(parse(matrix_json)), tolerance);
    Json j{{"psd", r.psd}, {"exact", r.exact}};
    if (!r.psd) {
      Json w = Json::array();
      std::string text = "(";
      for (std::size_t i = 0; i < r.witness.size(); ++i) {
        w.push_back(io::rational_to_json(r.witness[i]));
        text += (i ? "," : "") + to_string(r.witness[i]);
      }
      j["witness"] = w;
      j["witness_text"] = text + ")";
      j["witness_value"] = io::rational_to_json(r.witness_value);
    }
    if (r.min_eigenvalue)
      j["min_eigenvalue"] = *r.min_eigenvalue;
    emit(j, out);
  });
}

bd_status bd_character_mult(const bd_diagram* d, const bd_character* chi, const bd_element* g, const char* targets,
                            size_t n_from, size_t n_to, const char* tolerance, char** out) {
  return guard([&] {
    require(d, "diagram");
    require(chi, "character");
    require(g, "element");
    Json t = parse(targets);
    if (!t.is_array())
      throw Error(ErrorCode::ParseError, "targets: expected an array");
    std::vector<Rational> c;
    for (std::size_t i = 0; i < t.size(); ++i)
      c.push_back(io::value_from_json(t[i], "targets[" + std::to_string(i) + "]").rational());
    Rational tol = tolerance ? value_of(tolerance, "tolerance").rational() : Rational(0);
    Json steps = Json::array();
    for (const auto& s : multiplicativity_harness(d->d, chi->spec, g->g, c, n_from, n_to, tol))
      steps.push_back(Json{{"n", s.n},
                           {"level", s.level},
                           {"achieved", values_json(s.achieved)},
                           {"chi_product", io::value_to_json(s.chi_product)},
                           {"predicted", io::value_to_json(s.predicted)},
                           {"defect", io::value_to_json(s.defect)}});
    emit(Json{{"steps", steps}}, out);
  });
}

bd_status bd_character_proj_limit(const bd_diagram* d, const bd_character* chi, const bd_clopen* a, size_t n_from,
                                  size_t n_to, char** out) {
  return guard([&] {
    require(d, "diagram");
    require(chi, "character");
    require(a, "set");
    Json steps = Json::array();
    for (const auto& s : projection_limit_check(d->d, chi->spec, a->a, n_from, n_to))
      steps.push_back(Json{{"n", s.n},
                           {"chi_hn", io::value_to_json(s.chi_hn)},
                           {"trace", io::value_to_json(s.trace)},
                           {"defect", io::value_to_json(s.defect)},
                           {"max_fixed_fraction", io::rational_to_json(s.max_fixed_fraction)},
                           {"bound", io::value_to_json(s.bound)},
                           {"within_bound", s.within_bound}});
    emit(Json{{"steps", steps}}, out);
  });
}

bd_status bd_rperm_from_json(const char* json, bd_rperm** out) {
  return guard([&] {
    require(out, "output");
    *out = new bd_rperm{io::rperm_from_json(parse(json))};
  });
}

void bd_rperm_free(bd_rperm* r) { delete r; }

bd_status bd_rperm_to_json(const bd_rperm* r, char** out) {
  return guard([&] {
    require(r, "rational permutation");
    Json j = io::rperm_to_json(r->r);
    j["cycles"] = perm::cycle_string(r->r.perm());
    emit(j, out);
  });
}

bd_status bd_rperm_refine(const bd_rperm* r, size_t m, bd_rperm** out) {
  return guard([&] {
    require(r, "rational permutation");
    require(out, "output");
    *out = new bd_rperm{refine_rperm(r->r, m)};
  });
}

bd_status bd_rperm_compose(const bd_rperm* g, const bd_rperm* h, bd_rperm** out) {
  return guard([&] {
    require(g, "rational permutation");
    require(h, "rational permutation");
    require(out, "output");
    *out = new bd_rperm{compose_rperm(g->r, h->r)};
  });
}

bd_status bd_rperm_apply(const bd_rperm* r, const char* x, char** value) {
  return guard([&] {
    require(r, "rational permutation");
    emit_text(to_string(apply_rperm(r->r, value_of(x, "x").rational())), value);
  });
}

bd_status bd_rperm_fix(const bd_rperm* r, char** value) {
  return guard([&] {
    require(r, "rational permutation");
    emit_text(to_string(fix_measure(r->r)), value);
  });
}

bd_status bd_rperm_char(const bd_rperm* r, const char* alpha, char** value) {
  return guard([&] {
    require(r, "rational permutation");
    require(alpha, "alpha");
    std::string a(alpha);
    Json j = a == "inf" ? Json(a) : io::parse_text(a);
    emit_text(to_string(char_R(io::exponent_from_json(j), r->r)), value);
  });
}

bd_status bd_rperm_from_element(const bd_diagram* d, const bd_element* g, bd_rperm** out) {
  return guard([&] {
    require(d, "diagram");
    require(g, "element");
    require(out, "output");
    *out = new bd_rperm{to_rperm(d->d, g->g)};
  });
}

bd_status bd_rperm_to_element(const bd_diagram* d, const bd_rperm* r, bd_element** out) {
  return guard([&] {
    require(d, "diagram");
    require(r, "rational permutation");
    require(out, "output");
    *out = new bd_element{from_rperm(d->d, r->r)};
  });
}

} // extern "C"
