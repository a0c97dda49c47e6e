#include "support.hpp"

#include "bratteli/error.hpp"

#include <doctest.h>

using namespace bratteli;
using namespace testing;

namespace {

GroupElement at(std::size_t level, std::vector<Permutation> perms) { return GroupElement(level, std::move(perms)); }

GroupElement conjugate_by(const BratteliDiagram& d, const GroupElement& q, const GroupElement& g) {
  return compose(d, compose(d, q, g), inverse(d, q));
}

// Every element of G_n(A): per-vertex permutations of the member indices of A.
std::vector<GroupElement> all_of_Gn_A(const ClopenSet& a) {
  std::vector<GroupElement> out;
  std::vector<std::vector<Permutation>> choices;
  for (std::size_t v = 0; v < a.vertex_count(); ++v) {
    auto idx = a.indices(v);
    std::vector<Permutation> perms;
    std::vector<std::size_t> order = idx;
    do {
      Permutation p = perm::identity(a.members(v).size());
      for (std::size_t k = 0; k < idx.size(); ++k)
        p[idx[k]] = static_cast<std::uint32_t>(order[k]);
      perms.push_back(p);
    } while (std::next_permutation(order.begin(), order.end()));
    choices.push_back(perms);
  }
  std::vector<std::size_t> pick(choices.size(), 0);
  for (;;) {
    std::vector<Permutation> perms;
    for (std::size_t v = 0; v < choices.size(); ++v)
      perms.push_back(choices[v][pick[v]]);
    out.emplace_back(a.level(), perms);
    std::size_t v = 0;
    while (v < pick.size() && ++pick[v] == choices[v].size())
      pick[v++] = 0;
    if (v == pick.size())
      break;
  }
  return out;
}

std::vector<InvariantMeasure> measures(const BratteliDiagram& d) { return {builtin_measure(d)}; }

} // namespace

TEST_CASE("group axioms on small examples") {
  auto d = odometer2();
  auto swap = at(1, {{1, 0}});
  CHECK(compose(d, swap, swap).is_identity());
  auto t01 = at(2, {{1, 0, 2, 3}});
  auto t23 = at(2, {{0, 1, 3, 2}});
  CHECK(compose(d, t01, t23) == at(2, {{1, 0, 3, 2}}));
  std::mt19937_64 rng(41);
  for (int i = 0; i < 50; ++i) {
    auto g = random_element(br(), 3, rng);
    CHECK(compose(br(), g, inverse(br(), g)).is_identity());
  }
}

TEST_CASE("embedding places blocks") {
  auto d = odometer2();
  auto e = embed(d, at(1, {{1, 0}}), 2);
  CHECK(perm::cycle_string(e.perm(0)) == "(0 2)(1 3)");
  CHECK(embed(d, identity(d, 1), 4).is_identity());
  CHECK(reduce(d, e) == at(1, {{1, 0}}));
  CHECK_THROWS_AS(embed(d, e, 1), Error);
}

TEST_CASE("embedding is a functorial injective homomorphism") {
  std::mt19937_64 rng(42);
  std::vector<BratteliDiagram> ds{odometer2(), br(), br_even()};
  for (int trial = 0; trial < 240; ++trial) {
    const auto& d = ds[trial % ds.size()];
    std::size_t n = rng() % 3;
    std::size_t m = n + 1 + rng() % 2;
    auto g = random_element(d, n, rng);
    auto h = random_element(d, n, rng);
    auto gh = GroupElement(n, [&] {
      std::vector<Permutation> p;
      for (std::size_t v = 0; v < g.vertex_count(); ++v)
        p.push_back(perm::compose(g.perm(v), h.perm(v)));
      return p;
    }());
    auto eg = embed(d, g, m);
    auto eh = embed(d, h, m);
    std::vector<Permutation> prod;
    for (std::size_t v = 0; v < eg.vertex_count(); ++v)
      prod.push_back(perm::compose(eg.perm(v), eh.perm(v)));
    CHECK(embed(d, gh, m) == GroupElement(m, prod));
    CHECK(embed(d, embed(d, g, n + 1), m) == eg);
    CHECK((eg == embed(d, identity(d, n), m)) == g.is_identity());
    // Path-level evaluation: g acts on the prefix and keeps the suffix.
    PathTable t(d, m);
    PathTable low(d, n);
    for (std::size_t v = 0; v < t.vertex_count(m); ++v)
      for (std::size_t i = 0; i < t.count(v); ++i) {
        Path x = t.path_of_index(v, i);
        CHECK(t.index_of_path(act(low, g, x)) == std::make_pair(v, static_cast<std::size_t>(eg.perm(v)[i])));
      }
  }
}

TEST_CASE("fixed points and supports") {
  auto d = odometer2();
  auto mu = builtin_measure(d);
  CHECK(fix(d, identity(d, 2)).is_full());
  CHECK(fix(d, at(1, {{1, 0}})).is_empty());
  auto t = at(2, {{1, 0, 2, 3}});
  CHECK(fix(d, t).indices(0) == std::vector<std::size_t>{2, 3});
  CHECK(measure_of(mu, fix(d, t)) == Value(Rational(1, 2)));
  CHECK(same_set(d, set_union(d, fix(d, t), support(d, t)), ClopenSet::full(d, 0)));
}

TEST_CASE("fix commutes with refinement") {
  std::mt19937_64 rng(43);
  std::vector<BratteliDiagram> ds{odometer2(), br(), br_even()};
  for (int trial = 0; trial < 240; ++trial) {
    const auto& d = ds[trial % ds.size()];
    std::size_t n = rng() % 3;
    std::size_t m = n + rng() % 3;
    auto g = random_element(d, n, rng);
    CHECK(fix(d, embed(d, g, m)) == refine(d, fix(d, g), m));
    auto mu = builtin_measure(d);
    CHECK(measure_of(mu, fix(d, embed(d, g, m))) == measure_of(mu, fix(d, g)));
  }
}

TEST_CASE("cycle data") {
  auto d = odometer2();
  CHECK(consists_of_even_cycles(identity(d, 2)));
  CHECK(consists_of_even_cycles(at(2, {{1, 2, 3, 0}})));
  CHECK_FALSE(consists_of_even_cycles(at(2, {{1, 2, 0, 3}})));
  auto c = cycle_data(at(2, {{1, 2, 0, 3}}));
  CHECK(c.cycle_types[0] == std::vector<std::size_t>{3, 1});
  CHECK(c.periods[0] == std::vector<std::size_t>{3, 3, 3, 1});
}

TEST_CASE("conjugacy at a level") {
  auto d = odometer2();
  auto a = at(2, {{1, 0, 2, 3}});
  auto b = at(2, {{0, 1, 3, 2}});
  auto r = conjugate_at_level(d, a, b, 2);
  REQUIRE(r.conjugate);
  CHECK(compose(d, compose(d, *r.witness, a), inverse(d, *r.witness)) == b);
  for (std::size_t m = 2; m <= 5; ++m)
    CHECK_FALSE(conjugate_at_level(d, a, identity(d, 0), m).conjugate);
}

TEST_CASE("conjugacy witnesses are exact") {
  std::mt19937_64 rng(44);
  std::vector<BratteliDiagram> ds{odometer2(), br(), br_even()};
  for (int trial = 0; trial < 200; ++trial) {
    const auto& d = ds[trial % ds.size()];
    std::size_t n = 1 + rng() % 2;
    auto g = random_element(d, n, rng);
    auto q = random_element(d, n, rng);
    auto h = conjugate_by(d, q, g);
    auto r = conjugate_at_level(d, g, h, n);
    REQUIRE(r.conjugate);
    CHECK(same_element(d, conjugate_by(d, *r.witness, g), h));
    auto other = random_element(d, n, rng);
    auto ro = conjugate_at_level(d, g, other, n);
    bool types_agree = cycle_data(embed(d, g, n)).cycle_types == cycle_data(embed(d, other, n)).cycle_types;
    CHECK(ro.conjugate == types_agree);
    if (ro.conjugate)
      CHECK(same_element(d, conjugate_by(d, *ro.witness, g), other));
  }
}

TEST_CASE("involutions h_n") {
  auto d = odometer2();
  auto h = make_hn(d, ClopenSet::full(d, 1), 1);
  CHECK(h.element == at(2, {{1, 0, 3, 2}}));
  CHECK(fix(d, h.element).is_empty());
  for (const auto& g : {identity(d, 1), at(1, {{1, 0}})})
    CHECK(compose(d, g, h.element) == compose(d, h.element, g));
  CHECK_THROWS_AS(make_hn(br(), ClopenSet::full(br(), 1), 1), Error);
  try {
    make_hn(br(), ClopenSet::full(br(), 1), 1);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoPairableEdges);
  }
  auto b = br_even();
  auto hb = make_hn(b, ClopenSet::full(b, 1), 1);
  for (const auto& bundle : hb.bundles) {
    CHECK(bundle.size == 4);
    CHECK(bundle.fixed_fraction == 0);
  }
  CHECK(hb.max_fixed_fraction == 0);
}

TEST_CASE("h_n is an involution in G_{n+1}(A) commuting with G_n(A)") {
  std::mt19937_64 rng(45);
  std::vector<BratteliDiagram> ds{odometer2(), br_even(), telescope(odometer2(), {0, 3})};
  for (int trial = 0; trial < 60; ++trial) {
    const auto& d = ds[trial % ds.size()];
    std::size_t n = 1 + rng() % 2;
    auto a = random_set(d, n, rng);
    double size = 1;
    for (std::size_t v = 0; v < a.vertex_count(); ++v)
      for (std::size_t k = 2; k <= a.count(v); ++k)
        size *= static_cast<double>(k);
    bool small = size <= 5040;
    auto h = make_hn(d, a, n);
    CHECK(compose(d, h.element, h.element).is_identity());
    CHECK(same_set(d, minus(d, support(d, h.element), a), ClopenSet::empty(d, 0)));
    if (small)
      for (const auto& g : all_of_Gn_A(a))
        CHECK(same_element(d, compose(d, g, h.element), compose(d, h.element, g)));
    // Adjacent transpositions of member indices generate G_n(A).
    for (std::size_t v = 0; v < a.vertex_count(); ++v) {
      auto idx = a.indices(v);
      for (std::size_t k = 0; k + 1 < idx.size(); ++k) {
        std::vector<Permutation> perms;
        for (std::size_t u = 0; u < a.vertex_count(); ++u)
          perms.push_back(perm::identity(a.members(u).size()));
        std::swap(perms[v][idx[k]], perms[v][idx[k + 1]]);
        GroupElement g(n, perms);
        CHECK(same_element(d, compose(d, g, h.element), compose(d, h.element, g)));
      }
    }
    for (const auto& bundle : h.bundles)
      CHECK(bundle.fixed_fraction == Rational(bundle.size % 2, bundle.size));
  }
}

TEST_CASE("h_n preserves the cycle type of even-cycle elements supported on A") {
  std::mt19937_64 rng(46);
  std::vector<BratteliDiagram> ds{odometer2(), br_even()};
  for (int trial = 0; trial < 60; ++trial) {
    const auto& d = ds[trial % ds.size()];
    std::size_t n = 1 + rng() % 2;
    PathTable t(d, n);
    // s: a product of disjoint transpositions and 4-cycles on chosen indices.
    std::vector<Permutation> perms;
    std::vector<std::vector<bool>> members;
    for (std::size_t v = 0; v < t.vertex_count(n); ++v) {
      Permutation p = perm::identity(t.count(v));
      auto order = random_perm(t.count(v), rng);
      std::size_t used = (t.count(v) / 2) * 2;
      used = rng() % 2 ? used : used / 2 / 2 * 2;
      for (std::size_t k = 0; k + 1 < used; k += 2)
        std::swap(p[order[k]], p[order[k + 1]]);
      std::vector<bool> row(t.count(v));
      for (std::size_t k = 0; k < used; ++k)
        row[order[k]] = true;
      perms.push_back(p);
      members.push_back(row);
    }
    GroupElement s(n, perms);
    ClopenSet a(n, members);
    REQUIRE(consists_of_even_cycles(s));
    auto h = make_hn(d, a, n);
    auto sh = compose(d, s, h.element);
    CHECK(cycle_data(embed(d, sh, n + 1)).cycle_types == cycle_data(embed(d, s, n + 1)).cycle_types);
    CHECK(conjugate_at_level(d, s, sh, n + 1).conjugate);
  }
}

TEST_CASE("Claim-1 pairs") {
  auto p2 = claim1_pair(2);
  CHECK(p2.m == 4);
  CHECK(perm::cycle_string(p2.h0) == "(0 1)");
  CHECK(perm::cycle_string(p2.h1) == "(2 3)");
  CHECK(perm::cycle_string(perm::compose(p2.h0, perm::inverse(p2.h1))) == "(0 1)(2 3)");
  auto p3 = claim1_pair(3);
  CHECK(p3.m == 4);
  CHECK(p3.h0 == perm::from_cycles(4, {{0, 1, 2}}));
  CHECK(p3.h1 == perm::from_cycles(4, {{3, 2, 1}}));
  CHECK(perm::cycle_string(perm::compose(p3.h0, perm::inverse(p3.h1))) == "(0 1)(2 3)");
  auto p4 = claim1_pair(4);
  CHECK(p4.m == 8);
  CHECK(perm::cycle_string(p4.h0) == "(0 1 2 3)");
  CHECK(perm::cycle_string(p4.h1) == "(4 5 6 7)");
  for (std::size_t p = 2; p <= 10; ++p) {
    auto c = claim1_pair(p);
    CHECK(c.m == (p % 2 == 0 ? 2 * p : 2 * p - 2));
    CHECK(perm::cycle_type(c.h0).front() == p);
    CHECK(perm::cycle_type(c.h1).front() == p);
    auto q = perm::compose(c.h0, perm::inverse(c.h1));
    CHECK(perm::fixed_points(q) == 0);
    for (auto len : perm::cycle_type(q))
      CHECK(len % 2 == 0);
  }
  CHECK_THROWS_AS(claim1_pair(1), Error);
}

TEST_CASE("s-families") {
  auto d = telescope(odometer2(), {0, 3});
  auto s = at(1, {{1, 0, 2, 3, 4, 5, 6, 7}});
  auto f0 = si_family(d, s, 0, Rational(1, 2));
  REQUIRE(f0.elements.size() == 1);
  CHECK(same_element(d, f0.elements[0], s));
  for (std::size_t r = 1; r <= 2; ++r) {
    auto f = si_family(d, s, r, Rational(1, 2));
    CHECK(f.elements.size() == (std::size_t{1} << r));
    auto check = verify_si_family(d, s, f, Rational(1, 2), measures(d));
    CHECK(check.all_conjugate);
    CHECK(check.supports_equal);
    CHECK(check.quotients_even);
    CHECK(check.defect_below_eps);
    // Direct recomputation of the pairwise postconditions.
    for (std::size_t i = 0; i < f.elements.size(); ++i) {
      auto c = conjugate_at_level(d, s, f.elements[i], f.level);
      REQUIRE(c.conjugate);
      CHECK(same_element(d, conjugate_by(d, *c.witness, s), f.elements[i]));
      for (std::size_t j = 0; j < f.elements.size(); ++j) {
        if (i == j)
          continue;
        auto q = compose(d, f.elements[i], inverse(d, f.elements[j]));
        auto lost = minus(d, support(d, s), support(d, q));
        CHECK(measure_of(builtin_measure(d), lost).hi() < Rational(1, 2));
      }
    }
  }
  auto three = at(1, {{1, 2, 0, 3, 4, 5, 6, 7}});
  auto f3 = si_family(d, three, 1, Rational(1, 2));
  auto c3 = verify_si_family(d, three, f3, Rational(1, 2), measures(d));
  CHECK(c3.all_conjugate);
  CHECK(c3.quotients_even);
  CHECK(c3.defect_below_eps);
  auto shallow = explicit_diagram({1, 1, 1}, {{{2}}, {{2}}});
  try {
    si_family(shallow, at(1, {{1, 0}}), 1, Rational(1, 2));
    FAIL("expected BundlesTooSmall");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BundlesTooSmall);
  }
}

TEST_CASE("uniform metric") {
  auto d = odometer2();
  auto mu = measures(d);
  auto g = at(2, {{1, 0, 2, 3}});
  CHECK(metric_distance(d, g, g, mu) == Value(0));
  CHECK(metric_distance(d, at(1, {{1, 0}}), identity(d, 0), mu) == Value(1));
  CHECK(metric_distance(d, g, identity(d, 0), mu) == Value(Rational(1, 2)));
}

TEST_CASE("metric axioms on sampled triples") {
  std::mt19937_64 rng(47);
  std::vector<BratteliDiagram> ds{odometer2(), br(), br_even()};
  for (int trial = 0; trial < 200; ++trial) {
    const auto& d = ds[trial % ds.size()];
    auto mu = measures(d);
    auto g = random_element(d, rng() % 3, rng);
    auto h = random_element(d, rng() % 3, rng);
    auto k = random_element(d, rng() % 3, rng);
    auto q = random_element(d, rng() % 3, rng);
    auto D = [&](const GroupElement& a, const GroupElement& b) { return metric_distance(d, a, b, mu).rational(); };
    CHECK(D(g, h) == D(h, g));
    CHECK(D(g, k) <= D(g, h) + D(h, k));
    CHECK(D(compose(d, q, g), compose(d, q, h)) == D(g, h));
    CHECK(D(compose(d, g, q), compose(d, h, q)) == D(g, h));
  }
}
