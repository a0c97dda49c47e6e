#include "bratteli/group.hpp"

#include "bratteli/error.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <string>

namespace bratteli {

namespace {

std::string str(std::size_t n) { return std::to_string(n); }

GroupElement embed_step(const PathTable& table, const GroupElement& g) {
  std::size_t k = g.level() + 1;
  std::vector<Permutation> out(table.vertex_count(k));
  for (std::size_t v = 0; v < out.size(); ++v) {
    Permutation p(table.count(k, v));
    for (std::size_t w = 0; w < table.vertex_count(k - 1); ++w) {
      auto f = static_cast<std::size_t>(table.multiplicity(k, v, w));
      if (f == 0)
        continue;
      std::size_t off = table.block_offset(k, v, w);
      const auto& sigma = g.perm(w);
      for (std::size_t j = 0; j < sigma.size(); ++j)
        for (std::size_t e = 0; e < f; ++e)
          p[off + j * f + e] = static_cast<std::uint32_t>(off + sigma[j] * f + e);
    }
    out[v] = std::move(p);
  }
  return GroupElement(k, std::move(out));
}

// The level-(k-1) element g embeds to, if any.
std::optional<GroupElement> descend(const PathTable& table, const GroupElement& g) {
  std::size_t k = g.level();
  std::size_t nprev = table.vertex_count(k - 1);
  std::vector<std::optional<Permutation>> tau(nprev);
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    const auto& sigma = g.perm(v);
    for (std::size_t w = 0; w < nprev; ++w) {
      auto f = static_cast<std::size_t>(table.multiplicity(k, v, w));
      if (f == 0)
        continue;
      std::size_t off = table.block_offset(k, v, w);
      std::size_t h = table.count(k - 1, w);
      if (!tau[w]) {
        Permutation t(h);
        for (std::size_t j = 0; j < h; ++j) {
          std::size_t img = sigma[off + j * f];
          if (img < off || img >= off + h * f || (img - off) % f != 0)
            return std::nullopt;
          t[j] = static_cast<std::uint32_t>((img - off) / f);
        }
        tau[w] = std::move(t);
      }
      const auto& t = *tau[w];
      for (std::size_t j = 0; j < h; ++j)
        for (std::size_t e = 0; e < f; ++e)
          if (sigma[off + j * f + e] != off + t[j] * f + e)
            return std::nullopt;
    }
  }
  std::vector<Permutation> perms;
  for (auto& t : tau)
    perms.push_back(std::move(*t));
  return GroupElement(k - 1, std::move(perms));
}

} // namespace

GroupElement identity(const BratteliDiagram& d, std::size_t n) {
  PathTable table(d, n);
  std::vector<Permutation> perms;
  for (std::size_t v = 0; v < table.vertex_count(n); ++v)
    perms.push_back(perm::identity(table.count(v)));
  return GroupElement(n, std::move(perms));
}

GroupElement make_element(const BratteliDiagram& d, std::size_t n, std::vector<Permutation> perms) {
  PathTable table(d, n);
  if (perms.size() != table.vertex_count(n))
    throw Error(ErrorCode::ShapeMismatch,
                "level " + str(n) + " has " + str(table.vertex_count(n)) + " vertices, got " + str(perms.size()));
  for (std::size_t v = 0; v < perms.size(); ++v) {
    if (perms[v].size() != table.count(v))
      throw Error(ErrorCode::ShapeMismatch, "vertex " + str(v) + " has " + str(table.count(v)) + " paths, got " +
                                                str(perms[v].size()) + " images");
    if (!perm::is_bijection(perms[v]))
      throw Error(ErrorCode::InvalidArgument, "vertex " + str(v) + " permutation is not a bijection");
  }
  return GroupElement(n, std::move(perms));
}

GroupElement embed(const BratteliDiagram& d, const GroupElement& g, std::size_t m) {
  if (m < g.level())
    throw Error(ErrorCode::InvalidArgument, "cannot embed a level-" + str(g.level()) + " element into level " + str(m));
  if (m == g.level())
    return g;
  PathTable table(d, m);
  GroupElement cur = g;
  while (cur.level() < m)
    cur = embed_step(table, cur);
  return cur;
}

GroupElement reduce(const BratteliDiagram& d, const GroupElement& g) {
  if (g.level() == 0)
    return g;
  PathTable table(d, g.level());
  GroupElement cur = g;
  while (cur.level() > 0) {
    auto lower = descend(table, cur);
    if (!lower)
      break;
    cur = std::move(*lower);
  }
  return cur;
}

GroupElement compose(const BratteliDiagram& d, const GroupElement& g, const GroupElement& h) {
  std::size_t level = std::max(g.level(), h.level());
  GroupElement a = embed(d, g, level);
  GroupElement b = embed(d, h, level);
  std::vector<Permutation> perms;
  for (std::size_t v = 0; v < a.vertex_count(); ++v)
    perms.push_back(perm::compose(a.perm(v), b.perm(v)));
  return reduce(d, GroupElement(level, std::move(perms)));
}

GroupElement inverse(const BratteliDiagram& d, const GroupElement& g) {
  std::vector<Permutation> perms;
  for (const auto& p : g.perms())
    perms.push_back(perm::inverse(p));
  return reduce(d, GroupElement(g.level(), std::move(perms)));
}

bool same_element(const BratteliDiagram& d, const GroupElement& g, const GroupElement& h) {
  std::size_t level = std::max(g.level(), h.level());
  return embed(d, g, level) == embed(d, h, level);
}

ClopenSet fix(const BratteliDiagram&, const GroupElement& g) {
  std::vector<std::vector<bool>> members;
  for (const auto& p : g.perms()) {
    std::vector<bool> m(p.size());
    for (std::size_t i = 0; i < p.size(); ++i)
      m[i] = p[i] == i;
    members.push_back(std::move(m));
  }
  return ClopenSet(g.level(), std::move(members));
}

ClopenSet support(const BratteliDiagram& d, const GroupElement& g) {
  return complement(d, fix(d, g));
}

CycleData cycle_data(const GroupElement& g) {
  CycleData data;
  data.level = g.level();
  for (const auto& p : g.perms()) {
    data.cycle_types.push_back(perm::cycle_type(p));
    std::vector<std::size_t> periods(p.size());
    for (const auto& c : perm::cycles(p))
      for (auto x : c)
        periods[x] = c.size();
    data.periods.push_back(std::move(periods));
  }
  return data;
}

bool consists_of_even_cycles(const GroupElement& g) {
  for (const auto& p : g.perms())
    for (auto len : perm::cycle_type(p))
      if (len != 1 && len % 2 != 0)
        return false;
  return true;
}

ConjugacyResult conjugate_at_level(const BratteliDiagram& d, const GroupElement& g, const GroupElement& h,
                                   std::size_t m) {
  if (m < std::max(g.level(), h.level()))
    throw Error(ErrorCode::InvalidArgument, "conjugacy level below the operands' levels");
  GroupElement a = embed(d, g, m);
  GroupElement b = embed(d, h, m);
  ConjugacyResult result;
  result.level = m;
  std::vector<Permutation> witness;
  for (std::size_t v = 0; v < a.vertex_count(); ++v) {
    auto ca = perm::cycles(a.perm(v));
    auto cb = perm::cycles(b.perm(v));
    auto by_length = [](const auto& x, const auto& y) { return x.size() > y.size(); };
    std::stable_sort(ca.begin(), ca.end(), by_length);
    std::stable_sort(cb.begin(), cb.end(), by_length);
    if (ca.size() != cb.size())
      return result;
    Permutation q(a.perm(v).size());
    for (std::size_t c = 0; c < ca.size(); ++c) {
      if (ca[c].size() != cb[c].size())
        return result;
      // q maps the k-th point of g's cycle to the k-th point of h's cycle.
      for (std::size_t k = 0; k < ca[c].size(); ++k)
        q[ca[c][k]] = cb[c][k];
    }
    witness.push_back(std::move(q));
  }
  result.conjugate = true;
  result.witness = GroupElement(m, std::move(witness));
  return result;
}

HnResult make_hn(const BratteliDiagram& d, const ClopenSet& a, std::size_t n) {
  if (a.level() > n)
    throw Error(ErrorCode::InvalidArgument,
                "the set lives at level " + str(a.level()) + ", finer than level " + str(n));
  ClopenSet set = refine(d, a, n);
  PathTable table(d, n + 1);
  HnResult result;
  std::vector<Permutation> perms;
  for (std::size_t w = 0; w < table.vertex_count(n + 1); ++w)
    perms.push_back(perm::identity(table.count(n + 1, w)));

  for (std::size_t v = 0; v < table.vertex_count(n); ++v) {
    if (set.count(v) == 0)
      continue;
    for (std::size_t w = 0; w < table.vertex_count(n + 1); ++w) {
      auto f = table.multiplicity(n + 1, w, v);
      if (f == 0)
        continue;
      if (f == 1)
        throw Error(ErrorCode::NoPairableEdges, "bundle (" + str(v) + ", " + str(w) + ") between levels " + str(n) +
                                                    " and " + str(n + 1) + " has a single edge; telescope first");
      std::int64_t half = f / 2;
      auto partner = [&](std::int64_t e) {
        if (e < half)
          return e + half;
        if (e < 2 * half)
          return e - half;
        return e;
      };
      for (auto p : set.indices(v))
        for (std::int64_t e = 0; e < f; ++e)
          perms[w][table.child_index(n + 1, w, v, p, e)] =
              static_cast<std::uint32_t>(table.child_index(n + 1, w, v, p, partner(e)));
      Rational frac(f % 2, f);
      result.bundles.push_back({v, w, f, frac});
      result.max_fixed_fraction = std::max(result.max_fixed_fraction, frac);
    }
  }
  result.element = GroupElement(n + 1, std::move(perms));
  return result;
}

Claim1Pair claim1_pair(std::size_t p) {
  if (p < 2)
    throw Error(ErrorCode::InvalidArgument, "Claim-1 pairs need p >= 2");
  Claim1Pair pair;
  std::vector<std::uint32_t> c0, c1;
  if (p % 2 == 0) {
    pair.m = 2 * p;
    for (std::size_t i = 0; i < p; ++i) {
      c0.push_back(static_cast<std::uint32_t>(i));
      c1.push_back(static_cast<std::uint32_t>(p + i));
    }
  } else {
    // h0 = (0 1 ... p-1), h1 = (2p-3 2p-4 ... p-2): they overlap in {p-2, p-1}.
    pair.m = 2 * p - 2;
    for (std::size_t i = 0; i < p; ++i) {
      c0.push_back(static_cast<std::uint32_t>(i));
      c1.push_back(static_cast<std::uint32_t>(2 * p - 3 - i));
    }
  }
  pair.h0 = perm::from_cycles(pair.m, {c0});
  pair.h1 = perm::from_cycles(pair.m, {c1});
  return pair;
}

SiFamily si_family(const BratteliDiagram& d, const GroupElement& s, std::size_t r, const Rational& eps) {
  if (eps <= 0)
    throw Error(ErrorCode::InvalidArgument, "eps must be positive");
  SiFamily family;
  GroupElement base = reduce(d, s);
  family.level = base.level();
  family.cuts = {base.level()};
  auto data = cycle_data(base);
  std::set<std::size_t> periods;
  for (const auto& per : data.periods)
    for (auto p : per)
      if (p >= 2)
        periods.insert(p);

  if (r == 0 || periods.empty()) {
    std::size_t count = std::size_t{1} << r;
    for (std::size_t a = 0; a < count; ++a) {
      std::vector<int> label(r);
      for (std::size_t i = 0; i < r; ++i)
        label[i] = static_cast<int>((a >> (r - 1 - i)) & 1u);
      family.labels.push_back(label);
      family.elements.push_back(base);
    }
    return family;
  }

  std::size_t pmax = *periods.rbegin();
  Rational required = Rational(2 * pmax) / eps;
  for (std::size_t i = 0; i < r; ++i) {
    std::size_t from = family.cuts.back();
    std::optional<std::int64_t> best;
    bool found = false;
    IntMatrix prod;
    for (std::size_t to = from + 1; to <= from + 64 && d.has_level(to); ++to) {
      prod = to == from + 1 ? d.incidence(from) : multiply(d.incidence(to - 1), prod);
      std::int64_t smallest = -1;
      for (std::size_t x = 0; x < prod.rows(); ++x)
        for (std::size_t y = 0; y < prod.cols(); ++y)
          if (prod(x, y) > 0 && (smallest < 0 || prod(x, y) < smallest))
            smallest = prod(x, y);
      best = smallest;
      if (Rational(smallest) > required) {
        family.cuts.push_back(to);
        found = true;
        break;
      }
    }
    if (!found)
      throw Error(ErrorCode::BundlesTooSmall,
                  "need segment bundles > " + to_string(required) + " below level " + str(from) + ", found " +
                      (best ? std::to_string(*best) : std::string("none")));
  }
  family.level = family.cuts.back();

  // Claim-1 pairs for every period that occurs.
  std::map<std::size_t, Claim1Pair> pairs;
  for (auto p : periods)
    pairs.emplace(p, claim1_pair(p));

  // layers[i][j]: g_{i+1}^{(j)} at the top level.
  std::vector<std::array<GroupElement, 2>> layers;
  for (std::size_t i = 1; i <= r; ++i) {
    std::size_t a = family.cuts[i - 1];
    std::size_t b = family.cuts[i];
    SegmentTable seg(d, a, b);
    SegmentTable ancestry(d, family.cuts[0], a);
    const PathTable& table = seg.paths();
    std::array<GroupElement, 2> gs;
    for (int j = 0; j < 2; ++j) {
      std::vector<Permutation> perms;
      for (std::size_t v = 0; v < table.vertex_count(b); ++v) {
        Permutation p = perm::identity(table.count(b, v));
        for (std::size_t idx = 0; idx < p.size(); ++idx) {
          const auto& c = seg.coord(v, idx);
          const auto& root = ancestry.coord(c.source, c.prefix);
          std::size_t period = data.periods[root.source][root.prefix];
          if (period < 2)
            continue;
          const auto& pair = pairs.at(period);
          const Permutation& h = j == 0 ? pair.h0 : pair.h1;
          std::size_t blocks = seg.segment_count(v, c.source) / pair.m;
          if (c.segment >= blocks * pair.m)
            continue;
          std::size_t block = c.segment / pair.m;
          std::size_t moved = block * pair.m + h[c.segment % pair.m];
          p[idx] = static_cast<std::uint32_t>(seg.index_of(v, {c.source, c.prefix, moved}));
        }
        perms.push_back(std::move(p));
      }
      gs[static_cast<std::size_t>(j)] = embed(d, GroupElement(b, std::move(perms)), family.level);
    }
    layers.push_back(std::move(gs));
  }

  GroupElement top = embed(d, base, family.level);
  std::size_t count = std::size_t{1} << r;
  for (std::size_t a = 0; a < count; ++a) {
    std::vector<int> label(r);
    GroupElement x = top;
    for (std::size_t i = 0; i < r; ++i) {
      label[i] = static_cast<int>((a >> (r - 1 - i)) & 1u);
      const auto& g = layers[i][static_cast<std::size_t>(label[i])];
      std::vector<Permutation> perms;
      for (std::size_t v = 0; v < x.vertex_count(); ++v)
        perms.push_back(perm::compose(x.perm(v), g.perm(v)));
      x = GroupElement(family.level, std::move(perms));
    }
    family.labels.push_back(std::move(label));
    family.elements.push_back(std::move(x));
  }
  return family;
}

SiFamilyCheck verify_si_family(const BratteliDiagram& d, const GroupElement& s, const SiFamily& family,
                               const Rational& eps, const std::vector<InvariantMeasure>& measures) {
  SiFamilyCheck check;
  std::size_t level = std::max(family.level, s.level());
  ClopenSet supp_s = refine(d, support(d, s), level);
  for (const auto& x : family.elements) {
    if (!conjugate_at_level(d, s, x, std::max(level, x.level())).conjugate)
      check.all_conjugate = false;
    if (!same_set(d, support(d, x), supp_s))
      check.supports_equal = false;
  }
  for (std::size_t i = 0; i < family.elements.size(); ++i)
    for (std::size_t j = 0; j < family.elements.size(); ++j) {
      if (i == j)
        continue;
      GroupElement q = compose(d, family.elements[i], inverse(d, family.elements[j]));
      if (!consists_of_even_cycles(q))
        check.quotients_even = false;
      ClopenSet lost = minus(d, supp_s, support(d, q));
      for (const auto& mu : measures) {
        Value defect = measure_of(mu, lost);
        check.max_defect = max(check.max_defect, defect);
      }
    }
  check.defect_below_eps = check.max_defect.hi() < eps;
  return check;
}

Value metric_distance(const BratteliDiagram& d, const GroupElement& g, const GroupElement& h,
                      const std::vector<InvariantMeasure>& measures) {
  if (measures.empty())
    throw Error(ErrorCode::InvalidArgument, "the metric needs at least one invariant measure");
  ClopenSet disagreement = support(d, compose(d, inverse(d, g), h));
  Value best = measure_of(measures.front(), disagreement);
  for (std::size_t i = 1; i < measures.size(); ++i)
    best = max(best, measure_of(measures[i], disagreement));
  return best;
}

} // namespace bratteli
