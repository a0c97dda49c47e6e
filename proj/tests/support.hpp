#pragma once

#include "bratteli/character.hpp"
#include "bratteli/clopen.hpp"
#include "bratteli/diagram.hpp"
#include "bratteli/group.hpp"
#include "bratteli/measure.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <tuple>
#include <vector>

namespace testing {

using namespace bratteli;

inline BratteliDiagram odometer2() { return BratteliDiagram::odometer(2); }
inline BratteliDiagram br() { return BratteliDiagram::br_family(); }
inline BratteliDiagram br_even() {
  std::vector<std::size_t> cuts{0, 2};
  return telescope(br(), cuts);
}

inline BratteliDiagram explicit_diagram(std::vector<std::size_t> levels,
                                        std::vector<std::vector<std::vector<std::int64_t>>> mats) {
  std::vector<IntMatrix> inc;
  for (const auto& m : mats)
    inc.push_back(IntMatrix::from_rows(m));
  return BratteliDiagram::build(std::move(levels), std::move(inc), ExplicitTail{});
}

// Brute-force path enumeration. Paths ending at each vertex are listed by
// sorting on (source of last edge, position of the prefix, edge index),
// computed from the previous level's sorted lists.
struct PathOracle {
  std::vector<std::vector<std::vector<Path>>> paths;  // [level][vertex] -> ordered paths

  PathOracle(const BratteliDiagram& d, std::size_t depth) {
    paths.push_back({{Path{}}});
    for (std::size_t k = 1; k <= depth; ++k) {
      IntMatrix f = d.incidence(k - 1);
      std::vector<std::vector<std::tuple<std::size_t, std::size_t, std::int64_t, Path>>> keyed(f.rows());
      for (std::size_t w = 0; w < f.cols(); ++w)
        for (std::size_t p = 0; p < paths[k - 1][w].size(); ++p)
          for (std::size_t v = 0; v < f.rows(); ++v)
            for (std::int64_t e = 0; e < f(v, w); ++e) {
              Path q = paths[k - 1][w][p];
              q.push_back(Edge{w, v, e});
              keyed[v].emplace_back(w, p, e, q);
            }
      std::vector<std::vector<Path>> level;
      for (auto& list : keyed) {
        std::sort(list.begin(), list.end(), [](const auto& a, const auto& b) {
          return std::tie(std::get<0>(a), std::get<1>(a), std::get<2>(a)) <
                 std::tie(std::get<0>(b), std::get<1>(b), std::get<2>(b));
        });
        std::vector<Path> ordered;
        for (auto& t : list)
          ordered.push_back(std::get<3>(t));
        level.push_back(std::move(ordered));
      }
      paths.push_back(std::move(level));
    }
  }

  std::size_t index(std::size_t level, std::size_t v, const Path& p) const {
    const auto& list = paths[level][v];
    return static_cast<std::size_t>(std::find(list.begin(), list.end(), p) - list.begin());
  }
};

inline Permutation random_perm(std::size_t n, std::mt19937_64& rng) {
  Permutation p = perm::identity(n);
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

// Per vertex: identity, a uniformly random permutation, or a few transpositions.
inline GroupElement random_element(const BratteliDiagram& d, std::size_t level, std::mt19937_64& rng) {
  PathTable table(d, level);
  std::vector<Permutation> perms;
  for (std::size_t v = 0; v < table.vertex_count(level); ++v) {
    std::size_t h = table.count(v);
    Permutation p = perm::identity(h);
    switch (rng() % 3) {
    case 0: break;
    case 1: p = random_perm(h, rng); break;
    default:
      if (h >= 2)
        for (int s = 0, k = 1 + static_cast<int>(rng() % 2); s < k; ++s) {
          std::size_t i = rng() % h, j = rng() % h;
          std::swap(p[i], p[j]);
        }
    }
    perms.push_back(std::move(p));
  }
  return GroupElement(level, std::move(perms));
}

inline ClopenSet random_set(const BratteliDiagram& d, std::size_t level, std::mt19937_64& rng) {
  PathTable table(d, level);
  std::vector<std::vector<bool>> m;
  for (std::size_t v = 0; v < table.vertex_count(level); ++v) {
    std::vector<bool> row(table.count(v));
    for (std::size_t i = 0; i < row.size(); ++i)
      row[i] = rng() % 2;
    m.push_back(std::move(row));
  }
  return ClopenSet(level, std::move(m));
}

// Evaluates an element on an explicit path at a deeper level: the first
// g.level() edges are replaced by the image prefix.
// `low` is the path table of g's level.
inline Path act(const PathTable& low, const GroupElement& g, const Path& x) {
  std::size_t n = g.level();
  Path prefix(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(n));
  auto [v, i] = low.index_of_path(prefix);
  Path out = low.path_of_index(v, g.perm(v)[i]);
  out.insert(out.end(), x.begin() + static_cast<std::ptrdiff_t>(n), x.end());
  return out;
}

inline Rational rational(const Value& v) { return v.rational(); }

inline CharacterSpec spec_builtin(const BratteliDiagram& d, Exponent a) {
  CharacterSpec s;
  s.terms.push_back({builtin_measure(d), a});
  return s;
}

} // namespace testing
