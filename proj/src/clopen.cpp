#include "bratteli/clopen.hpp"

#include "bratteli/error.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <tuple>

namespace bratteli {

namespace {

std::vector<std::vector<bool>> masks(const BratteliDiagram& d, std::size_t level, bool value) {
  PathTable table(d, level);
  std::vector<std::vector<bool>> out;
  for (std::size_t v = 0; v < table.vertex_count(level); ++v)
    out.emplace_back(table.count(v), value);
  return out;
}

// One-level refinement using a table that reaches at least level k + 1.
ClopenSet refine_step(const PathTable& table, const ClopenSet& a) {
  std::size_t k = a.level() + 1;
  std::vector<std::vector<bool>> out(table.vertex_count(k));
  for (std::size_t v = 0; v < out.size(); ++v) {
    out[v].assign(table.count(k, v), false);
    for (std::size_t w = 0; w < table.vertex_count(k - 1); ++w) {
      auto f = table.multiplicity(k, v, w);
      if (f == 0)
        continue;
      for (std::size_t p = 0; p < table.count(k - 1, w); ++p)
        if (a.contains(w, p))
          for (std::int64_t e = 0; e < f; ++e)
            out[v][table.child_index(k, v, w, p, e)] = true;
    }
  }
  return ClopenSet(k, std::move(out));
}

} // namespace

ClopenSet ClopenSet::empty(const BratteliDiagram& d, std::size_t level) {
  return ClopenSet(level, masks(d, level, false));
}

ClopenSet ClopenSet::full(const BratteliDiagram& d, std::size_t level) {
  return ClopenSet(level, masks(d, level, true));
}

ClopenSet ClopenSet::cylinder(const BratteliDiagram& d, std::size_t level, std::size_t vertex, std::size_t index) {
  auto m = masks(d, level, false);
  if (vertex >= m.size() || index >= m[vertex].size())
    throw Error(ErrorCode::IndexOutOfRange, "no cylinder (" + std::to_string(vertex) + ", " + std::to_string(index) +
                                                ") at level " + std::to_string(level));
  m[vertex][index] = true;
  return ClopenSet(level, std::move(m));
}

ClopenSet ClopenSet::from_indices(const BratteliDiagram& d, std::size_t level,
                                  const std::vector<std::vector<std::size_t>>& indices) {
  auto m = masks(d, level, false);
  if (indices.size() > m.size())
    throw Error(ErrorCode::IndexOutOfRange, "more vertex entries than vertices at level " + std::to_string(level));
  for (std::size_t v = 0; v < indices.size(); ++v)
    for (auto i : indices[v]) {
      if (i >= m[v].size())
        throw Error(ErrorCode::IndexOutOfRange, "index " + std::to_string(i) + " outside vertex " + std::to_string(v));
      m[v][i] = true;
    }
  return ClopenSet(level, std::move(m));
}

std::size_t ClopenSet::count(std::size_t v) const {
  return static_cast<std::size_t>(std::count(members_[v].begin(), members_[v].end(), true));
}

std::vector<std::size_t> ClopenSet::indices(std::size_t v) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < members_[v].size(); ++i)
    if (members_[v][i])
      out.push_back(i);
  return out;
}

bool ClopenSet::is_empty() const {
  return std::all_of(members_.begin(), members_.end(),
                     [](const auto& m) { return std::none_of(m.begin(), m.end(), [](bool b) { return b; }); });
}

bool ClopenSet::is_full() const {
  return std::all_of(members_.begin(), members_.end(),
                     [](const auto& m) { return std::all_of(m.begin(), m.end(), [](bool b) { return b; }); });
}

ClopenSet refine(const BratteliDiagram& d, const ClopenSet& a, std::size_t m) {
  if (m < a.level())
    throw Error(ErrorCode::InvalidArgument, "cannot refine a level-" + std::to_string(a.level()) +
                                                " set to level " + std::to_string(m));
  if (m == a.level())
    return a;
  PathTable table(d, m);
  ClopenSet cur = a;
  while (cur.level() < m)
    cur = refine_step(table, cur);
  return cur;
}

ClopenSet boolean(const BratteliDiagram& d, BooleanOp op, const ClopenSet& a, const ClopenSet* b) {
  if (op == BooleanOp::Complement) {
    std::vector<std::vector<bool>> out;
    for (std::size_t v = 0; v < a.vertex_count(); ++v) {
      out.push_back(a.members(v));
      out.back().flip();
    }
    return ClopenSet(a.level(), std::move(out));
  }
  if (!b)
    throw Error(ErrorCode::InvalidArgument, "binary set operation needs two operands");
  std::size_t level = std::max(a.level(), b->level());
  ClopenSet x = refine(d, a, level);
  ClopenSet y = refine(d, *b, level);
  std::vector<std::vector<bool>> out(x.vertex_count());
  for (std::size_t v = 0; v < out.size(); ++v) {
    const auto& mx = x.members(v);
    const auto& my = y.members(v);
    out[v].resize(mx.size());
    for (std::size_t i = 0; i < mx.size(); ++i) {
      switch (op) {
      case BooleanOp::Union: out[v][i] = mx[i] || my[i]; break;
      case BooleanOp::Intersect: out[v][i] = mx[i] && my[i]; break;
      case BooleanOp::Minus: out[v][i] = mx[i] && !my[i]; break;
      case BooleanOp::Complement: break;
      }
    }
  }
  return ClopenSet(level, std::move(out));
}

ClopenSet set_union(const BratteliDiagram& d, const ClopenSet& a, const ClopenSet& b) {
  return boolean(d, BooleanOp::Union, a, &b);
}
ClopenSet intersect(const BratteliDiagram& d, const ClopenSet& a, const ClopenSet& b) {
  return boolean(d, BooleanOp::Intersect, a, &b);
}
ClopenSet minus(const BratteliDiagram& d, const ClopenSet& a, const ClopenSet& b) {
  return boolean(d, BooleanOp::Minus, a, &b);
}
ClopenSet complement(const BratteliDiagram& d, const ClopenSet& a) {
  return boolean(d, BooleanOp::Complement, a, nullptr);
}

bool same_set(const BratteliDiagram& d, const ClopenSet& a, const ClopenSet& b) {
  std::size_t level = std::max(a.level(), b.level());
  return refine(d, a, level) == refine(d, b, level);
}

bool is_Gn_invariant(const BratteliDiagram& d, const ClopenSet& a, std::size_t n) {
  std::size_t m = std::max(a.level(), n);
  ClopenSet fine = refine(d, a, m);
  SegmentTable seg(d, n, m);
  // key: (terminal vertex at m, source vertex at n, segment) -> membership
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, bool> seen;
  for (std::size_t v = 0; v < fine.vertex_count(); ++v)
    for (std::size_t i = 0; i < fine.members(v).size(); ++i) {
      const auto& c = seg.coord(v, i);
      auto [it, inserted] = seen.try_emplace({v, c.source, c.segment}, fine.contains(v, i));
      if (!inserted && it->second != fine.contains(v, i))
        return false;
    }
  return true;
}

std::optional<Halving> can_halve(const BratteliDiagram& d, const ClopenSet& a, std::size_t search_bound) {
  if (a.is_empty())
    throw Error(ErrorCode::InvalidArgument, "can_halve needs a nonempty set");
  std::size_t limit = search_bound;
  if (auto depth = d.depth())
    limit = std::min(limit, *depth);
  if (limit < a.level())
    return std::nullopt;

  ClopenSet cur = a;
  for (;;) {
    bool even = true;
    for (std::size_t v = 0; v < cur.vertex_count() && even; ++v)
      even = cur.count(v) % 2 == 0;
    if (even) {
      // Pair the member paths of each vertex in increasing index order.
      Halving h;
      h.level = cur.level();
      std::vector<std::vector<bool>> first, second;
      std::vector<Permutation> perms;
      for (std::size_t v = 0; v < cur.vertex_count(); ++v) {
        auto idx = cur.indices(v);
        first.emplace_back(cur.members(v).size(), false);
        second.emplace_back(cur.members(v).size(), false);
        Permutation p = perm::identity(cur.members(v).size());
        for (std::size_t j = 0; j + 1 < idx.size(); j += 2) {
          first.back()[idx[j]] = true;
          second.back()[idx[j + 1]] = true;
          p[idx[j]] = static_cast<std::uint32_t>(idx[j + 1]);
          p[idx[j + 1]] = static_cast<std::uint32_t>(idx[j]);
        }
        perms.push_back(std::move(p));
      }
      h.first = ClopenSet(h.level, std::move(first));
      h.second = ClopenSet(h.level, std::move(second));
      h.involution = GroupElement(h.level, std::move(perms));
      return h;
    }
    if (cur.level() >= limit)
      return std::nullopt;
    cur = refine(d, cur, cur.level() + 1);
  }
}

} // namespace bratteli
