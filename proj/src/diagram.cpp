#include "bratteli/diagram.hpp"

#include "bratteli/error.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

namespace bratteli {

namespace {

std::string str(std::size_t n) { return std::to_string(n); }

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r))
    throw Error(ErrorCode::Overflow, "edge multiplicity exceeds 64 bits");
  return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r))
    throw Error(ErrorCode::Overflow, "edge multiplicity exceeds 64 bits");
  return r;
}

std::size_t checked_count(std::size_t a, std::size_t b, std::size_t c) {
  // a + b * c with the per-level limit applied.
  unsigned __int128 r = static_cast<unsigned __int128>(b) * c + a;
  if (r > kMaxPathsPerLevel)
    throw Error(ErrorCode::PathSpaceTooLarge,
                "a level holds more than " + str(kMaxPathsPerLevel) + " finite paths");
  return static_cast<std::size_t>(r);
}

void check_no_zero_lines(const IntMatrix& f, const std::string& where) {
  for (std::size_t r = 0; r < f.rows(); ++r) {
    bool any = false;
    for (std::size_t c = 0; c < f.cols(); ++c) {
      if (f(r, c) < 0)
        throw Error(ErrorCode::InvalidArgument, where + " has a negative entry");
      any = any || f(r, c) > 0;
    }
    if (!any)
      throw Error(ErrorCode::ZeroRowOrColumn, where + " row " + str(r) + " is zero (vertex without incoming edge)");
  }
  for (std::size_t c = 0; c < f.cols(); ++c) {
    bool any = false;
    for (std::size_t r = 0; r < f.rows(); ++r)
      any = any || f(r, c) > 0;
    if (!any)
      throw Error(ErrorCode::ZeroRowOrColumn, where + " column " + str(c) + " is zero (vertex without outgoing edge)");
  }
}

bool all_ones(const IntMatrix& f) {
  for (std::size_t r = 0; r < f.rows(); ++r)
    for (std::size_t c = 0; c < f.cols(); ++c)
      if (f(r, c) != 1)
        return false;
  return true;
}

using BoolMatrix = std::vector<std::vector<bool>>;

BoolMatrix support_of(const IntMatrix& f) {
  BoolMatrix b(f.rows(), std::vector<bool>(f.cols()));
  for (std::size_t r = 0; r < f.rows(); ++r)
    for (std::size_t c = 0; c < f.cols(); ++c)
      b[r][c] = f(r, c) > 0;
  return b;
}

BoolMatrix bool_multiply(const BoolMatrix& a, const BoolMatrix& b) {
  std::size_t inner = b.size();
  std::size_t cols = inner ? b[0].size() : 0;
  BoolMatrix out(a.size(), std::vector<bool>(cols));
  for (std::size_t r = 0; r < a.size(); ++r)
    for (std::size_t k = 0; k < inner; ++k)
      if (a[r][k])
        for (std::size_t c = 0; c < cols; ++c)
          if (b[k][c])
            out[r][c] = true;
  return out;
}

bool all_true(const BoolMatrix& b) {
  for (const auto& row : b)
    for (bool x : row)
      if (!x)
        return false;
  return true;
}

// Wielandt: a primitive k x k matrix has F^j > 0 for j = k^2 - 2k + 2.
bool is_primitive(const IntMatrix& f) {
  std::size_t k = f.rows();
  std::size_t bound = k * k - 2 * k + 2;
  BoolMatrix base = support_of(f);
  BoolMatrix p = base;
  for (std::size_t j = 1; j < bound; ++j)
    p = bool_multiply(p, base);
  return all_true(p);
}

} // namespace

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<std::int64_t>>& rows) {
  std::size_t cols = rows.empty() ? 0 : rows[0].size();
  IntMatrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols)
      throw Error(ErrorCode::ShapeMismatch, "ragged matrix rows");
    for (std::size_t c = 0; c < cols; ++c)
      m(r, c) = rows[r][c];
  }
  return m;
}

std::vector<std::vector<std::int64_t>> IntMatrix::to_rows() const {
  std::vector<std::vector<std::int64_t>> rows(rows_, std::vector<std::int64_t>(cols_));
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c)
      rows[r][c] = (*this)(r, c);
  return rows;
}

IntMatrix multiply(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.rows())
    throw Error(ErrorCode::ShapeMismatch, "matrix product shape mismatch");
  IntMatrix out(a.rows(), b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a(r, k) == 0)
        continue;
      for (std::size_t c = 0; c < b.cols(); ++c)
        out(r, c) = checked_add(out(r, c), checked_mul(a(r, k), b(k, c)));
    }
  return out;
}

bool operator==(const TelescopeTail& a, const TelescopeTail& b) {
  if (a.cuts != b.cuts)
    return false;
  if (!a.base || !b.base)
    return a.base == b.base;
  return *a.base == *b.base;
}

bool operator==(const BratteliDiagram& a, const BratteliDiagram& b) {
  return a.levels_ == b.levels_ && a.incidence_ == b.incidence_ && a.tail_ == b.tail_;
}

BratteliDiagram BratteliDiagram::build(std::vector<std::size_t> levels, std::vector<IntMatrix> incidence, Tail tail) {
  if (levels.empty() || levels[0] != 1)
    throw Error(ErrorCode::EmptyRootLevel, "level 0 must consist of exactly one vertex");
  if (levels.size() != incidence.size() + 1)
    throw Error(ErrorCode::ShapeMismatch,
                str(levels.size()) + " levels need " + str(levels.size() - 1) + " incidence matrices, got " +
                    str(incidence.size()));
  for (std::size_t n = 0; n < levels.size(); ++n)
    if (levels[n] == 0)
      throw Error(ErrorCode::ShapeMismatch, "level " + str(n) + " has no vertices");
  for (std::size_t n = 0; n < incidence.size(); ++n) {
    const auto& f = incidence[n];
    if (f.rows() != levels[n + 1] || f.cols() != levels[n])
      throw Error(ErrorCode::ShapeMismatch, "F_" + str(n) + " is " + str(f.rows()) + "x" + str(f.cols()) +
                                                ", expected " + str(levels[n + 1]) + "x" + str(levels[n]));
    check_no_zero_lines(f, "F_" + str(n));
  }

  std::size_t last = levels.back();
  std::visit(
      [&](const auto& t) {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, StationaryTail>) {
          if (t.matrix.rows() != t.matrix.cols())
            throw Error(ErrorCode::ShapeMismatch, "stationary matrix must be square");
          if (t.matrix.rows() != last)
            throw Error(ErrorCode::ShapeMismatch, "stationary matrix is " + str(t.matrix.rows()) +
                                                      "x" + str(t.matrix.cols()) + " but the last explicit level has " +
                                                      str(last) + " vertices");
          check_no_zero_lines(t.matrix, "stationary matrix");
        } else if constexpr (std::is_same_v<T, BrTail>) {
          for (std::size_t n = 0; n < levels.size(); ++n)
            if (levels[n] != n + 1)
              throw Error(ErrorCode::ShapeMismatch, "BR level " + str(n) + " must have " + str(n + 1) + " vertices");
        } else if constexpr (std::is_same_v<T, OdometerTail>) {
          if (t.base < 2)
            throw Error(ErrorCode::InvalidArgument, "odometer base must be >= 2");
          if (last != 1)
            throw Error(ErrorCode::ShapeMismatch, "odometer tail needs one vertex on the last explicit level");
        } else if constexpr (std::is_same_v<T, TelescopeTail>) {
          if (!t.base)
            throw Error(ErrorCode::InvalidArgument, "telescope tail without base diagram");
          if (t.base->depth().has_value())
            throw Error(ErrorCode::InvalidArgument, "telescope tail needs an unbounded base diagram");
          if (levels.size() != 1)
            throw Error(ErrorCode::InvalidArgument, "telescope tail carries no explicit prefix");
          if (t.cuts.size() < 2 || t.cuts[0] != 0)
            throw Error(ErrorCode::InvalidCuts, "cuts must start at 0 and contain at least two levels");
          for (std::size_t k = 1; k < t.cuts.size(); ++k)
            if (t.cuts[k] <= t.cuts[k - 1])
              throw Error(ErrorCode::InvalidCuts, "cuts must increase strictly");
        }
      },
      tail);

  BratteliDiagram d;
  d.levels_ = std::move(levels);
  d.incidence_ = std::move(incidence);
  d.tail_ = std::move(tail);
  return d;
}

BratteliDiagram BratteliDiagram::odometer(std::int64_t base) {
  return build({1}, {}, OdometerTail{base});
}

BratteliDiagram BratteliDiagram::br_family() {
  return build({1}, {}, BrTail{});
}

BratteliDiagram BratteliDiagram::stationary(const std::vector<std::int64_t>& root_vector, const IntMatrix& f) {
  IntMatrix f0(root_vector.size(), 1);
  for (std::size_t r = 0; r < root_vector.size(); ++r)
    f0(r, 0) = root_vector[r];
  return build({1, root_vector.size()}, {f0}, StationaryTail{f});
}

std::optional<std::size_t> BratteliDiagram::depth() const {
  if (std::holds_alternative<ExplicitTail>(tail_))
    return incidence_.size();
  return std::nullopt;
}

bool BratteliDiagram::has_level(std::size_t n) const {
  auto d = depth();
  return !d || n <= *d;
}

std::size_t BratteliDiagram::vertex_count(std::size_t n) const {
  if (n < levels_.size())
    return levels_[n];
  return std::visit(
      [&](const auto& t) -> std::size_t {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, ExplicitTail>) {
          throw Error(ErrorCode::DepthExceeded,
                      "level " + str(n) + " requested, diagram depth is " + str(incidence_.size()));
        } else if constexpr (std::is_same_v<T, StationaryTail>) {
          return t.matrix.rows();
        } else if constexpr (std::is_same_v<T, BrTail>) {
          return n + 1;
        } else if constexpr (std::is_same_v<T, OdometerTail>) {
          return 1;
        } else {
          return t.base->vertex_count(cut_level(t.cuts, n));
        }
      },
      tail_);
}

IntMatrix BratteliDiagram::incidence(std::size_t n) const {
  if (n < incidence_.size())
    return incidence_[n];
  return std::visit(
      [&](const auto& t) -> IntMatrix {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, ExplicitTail>) {
          throw Error(ErrorCode::DepthExceeded,
                      "F_" + str(n) + " requested, diagram depth is " + str(incidence_.size()));
        } else if constexpr (std::is_same_v<T, StationaryTail>) {
          return t.matrix;
        } else if constexpr (std::is_same_v<T, BrTail>) {
          return IntMatrix(n + 2, n + 1, 1);
        } else if constexpr (std::is_same_v<T, OdometerTail>) {
          return IntMatrix(1, 1, t.base);
        } else {
          return incidence_product(*t.base, cut_level(t.cuts, n), cut_level(t.cuts, n + 1));
        }
      },
      tail_);
}

std::int64_t BratteliDiagram::multiplicity(std::size_t n, std::size_t w, std::size_t v) const {
  if (n >= incidence_.size()) {
    if (std::holds_alternative<BrTail>(tail_)) {
      if (w >= n + 2 || v >= n + 1)
        throw Error(ErrorCode::IndexOutOfRange, "vertex outside level");
      return 1;
    }
    if (const auto* odo = std::get_if<OdometerTail>(&tail_)) {
      if (w != 0 || v != 0)
        throw Error(ErrorCode::IndexOutOfRange, "vertex outside level");
      return odo->base;
    }
  }
  auto f = incidence(n);
  if (w >= f.rows() || v >= f.cols())
    throw Error(ErrorCode::IndexOutOfRange, "vertex outside level");
  return f(w, v);
}

bool BratteliDiagram::prefix_follows_tail() const {
  if (std::holds_alternative<BrTail>(tail_))
    return std::all_of(incidence_.begin(), incidence_.end(), all_ones);
  if (const auto* odo = std::get_if<OdometerTail>(&tail_))
    return std::all_of(incidence_.begin(), incidence_.end(),
                       [&](const IntMatrix& f) { return f.rows() == 1 && f.cols() == 1 && f(0, 0) == odo->base; });
  return true;
}

bool BratteliDiagram::is_br() const {
  return std::holds_alternative<BrTail>(tail_) && prefix_follows_tail();
}

std::optional<bool> BratteliDiagram::cantor_tail() const {
  return std::visit(
      [&](const auto& t) -> std::optional<bool> {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, ExplicitTail>) {
          return std::nullopt;
        } else if constexpr (std::is_same_v<T, StationaryTail>) {
          // A vertex is thin when exactly one edge leaves it and it leads to
          // a thin vertex; a thin vertex carries an isolated infinite path.
          const auto& f = t.matrix;
          std::size_t k = f.rows();
          std::vector<bool> thin(k);
          std::vector<std::size_t> succ(k);
          for (std::size_t v = 0; v < k; ++v) {
            std::int64_t out = 0;
            for (std::size_t w = 0; w < k; ++w) {
              out += f(w, v);
              if (f(w, v) > 0)
                succ[v] = w;
            }
            thin[v] = out == 1;
          }
          for (bool changed = true; changed;) {
            changed = false;
            for (std::size_t v = 0; v < k; ++v)
              if (thin[v] && !thin[succ[v]]) {
                thin[v] = false;
                changed = true;
              }
          }
          return std::none_of(thin.begin(), thin.end(), [](bool b) { return b; });
        } else if constexpr (std::is_same_v<T, TelescopeTail>) {
          return t.base->cantor_tail();
        } else {
          return true;
        }
      },
      tail_);
}

IntMatrix incidence_product(const BratteliDiagram& d, std::size_t a, std::size_t b) {
  if (b < a)
    throw Error(ErrorCode::InvalidArgument, "incidence product with b < a");
  if (a == b) {
    std::size_t k = d.vertex_count(a);
    IntMatrix id(k, k);
    for (std::size_t i = 0; i < k; ++i)
      id(i, i) = 1;
    return id;
  }
  IntMatrix p = d.incidence(a);
  for (std::size_t n = a + 1; n < b; ++n)
    p = multiply(d.incidence(n), p);
  return p;
}

std::vector<Integer> path_counts(const BratteliDiagram& d, std::size_t n) {
  if (!d.has_level(n))
    throw Error(ErrorCode::DepthExceeded, "level " + str(n) + " requested, diagram depth is " + str(*d.depth()));
  std::vector<Integer> h{Integer(1)};
  for (std::size_t k = 0; k < n; ++k) {
    auto f = d.incidence(k);
    std::vector<Integer> next(f.rows());
    for (std::size_t w = 0; w < f.rows(); ++w)
      for (std::size_t v = 0; v < f.cols(); ++v)
        if (f(w, v) != 0)
          next[w] += Integer(f(w, v)) * h[v];
    h = std::move(next);
  }
  return h;
}

std::size_t cut_level(const std::vector<std::size_t>& cuts, std::size_t k) {
  if (k < cuts.size())
    return cuts[k];
  std::size_t gap = cuts[cuts.size() - 1] - cuts[cuts.size() - 2];
  return cuts.back() + (k - (cuts.size() - 1)) * gap;
}

BratteliDiagram telescope(const BratteliDiagram& d, const std::vector<std::size_t>& cuts) {
  if (cuts.size() < 2 || cuts[0] != 0)
    throw Error(ErrorCode::InvalidCuts, "cuts must start at 0 and contain at least two levels");
  for (std::size_t k = 1; k < cuts.size(); ++k)
    if (cuts[k] <= cuts[k - 1])
      throw Error(ErrorCode::InvalidCuts, "cuts must increase strictly");

  if (auto depth = d.depth()) {
    if (cuts.back() > *depth)
      throw Error(ErrorCode::DepthExceeded, "cut " + str(cuts.back()) + " beyond diagram depth " + str(*depth));
    std::vector<std::size_t> levels;
    std::vector<IntMatrix> incidence;
    for (std::size_t k = 0; k < cuts.size(); ++k) {
      levels.push_back(d.vertex_count(cuts[k]));
      if (k + 1 < cuts.size())
        incidence.push_back(incidence_product(d, cuts[k], cuts[k + 1]));
    }
    return BratteliDiagram::build(std::move(levels), std::move(incidence), ExplicitTail{});
  }
  return BratteliDiagram::build({1}, {}, TelescopeTail{std::make_shared<const BratteliDiagram>(d), cuts});
}

SimplicityReport is_simple(const BratteliDiagram& d, std::size_t search_bound) {
  SimplicityReport report;
  report.bound = search_bound;

  if (const auto* st = std::get_if<StationaryTail>(&d.tail()); st && !is_primitive(st->matrix)) {
    // Every product of the repeated matrix keeps a zero entry.
    report.verdict = SimplicityReport::Verdict::NotSimple;
    report.failed_level = d.prefix_depth();
    return report;
  }

  auto depth = d.depth();
  std::size_t last_n = search_bound;
  if (depth) {
    if (*depth == 0) {
      report.verdict = SimplicityReport::Verdict::Unknown;
      report.failed_level = 0;
      return report;
    }
    last_n = std::min(last_n, *depth - 1);
  }
  for (std::size_t n = 0; n <= last_n; ++n) {
    BoolMatrix p = support_of(d.incidence(n));
    std::size_t m = n + 1;
    std::size_t m_limit = n + std::max<std::size_t>(search_bound, 1);
    if (depth)
      m_limit = std::min(m_limit, *depth);
    while (!all_true(p) && m < m_limit) {
      p = bool_multiply(support_of(d.incidence(m)), p);
      ++m;
    }
    if (!all_true(p)) {
      report.verdict = SimplicityReport::Verdict::Unknown;
      report.failed_level = n;
      report.witnesses.clear();
      return report;
    }
    report.witnesses.push_back({n, m});
  }
  report.verdict = SimplicityReport::Verdict::Simple;
  return report;
}

EvenTelescoping find_even_telescoping(const BratteliDiagram& d, std::size_t search_bound) {
  EvenTelescoping result;
  result.bound = search_bound;
  result.cuts.push_back(0);
  std::size_t limit = search_bound;
  if (auto depth = d.depth())
    limit = std::min(limit, *depth);

  std::size_t cur = 0;
  while (cur < limit) {
    // Exact products; entries can outgrow 64 bits on deep searches.
    std::vector<std::vector<Integer>> p;
    bool found = false;
    for (std::size_t next = cur + 1; next <= limit; ++next) {
      auto f = d.incidence(next - 1);
      std::vector<std::vector<Integer>> q(f.rows(), std::vector<Integer>(next == cur + 1 ? f.cols() : p[0].size()));
      if (next == cur + 1) {
        for (std::size_t r = 0; r < f.rows(); ++r)
          for (std::size_t c = 0; c < f.cols(); ++c)
            q[r][c] = f(r, c);
      } else {
        for (std::size_t r = 0; r < f.rows(); ++r)
          for (std::size_t k = 0; k < f.cols(); ++k)
            if (f(r, k) != 0)
              for (std::size_t c = 0; c < p[k].size(); ++c)
                q[r][c] += Integer(f(r, k)) * p[k][c];
      }
      p = std::move(q);
      bool even = true;
      for (const auto& row : p)
        for (const auto& x : row)
          if (x < 2 || (x % 2) != 0)
            even = false;
      if (even) {
        result.cuts.push_back(next);
        cur = next;
        found = true;
        break;
      }
    }
    if (!found)
      break;
  }
  result.found = result.cuts.size() >= 2;
  if (!result.found)
    result.cuts.clear();
  return result;
}

PathTable::PathTable(const BratteliDiagram& d, std::size_t level) {
  if (!d.has_level(level))
    throw Error(ErrorCode::DepthExceeded,
                "level " + str(level) + " requested, diagram depth is " + str(*d.depth()));
  counts_.push_back({1});
  for (std::size_t k = 1; k <= level; ++k) {
    IntMatrix f = d.incidence(k - 1);
    const auto& prev = counts_.back();
    std::vector<std::size_t> next(f.rows());
    std::vector<std::vector<std::size_t>> offsets(f.rows(), std::vector<std::size_t>(f.cols()));
    std::size_t total = 0;
    for (std::size_t v = 0; v < f.rows(); ++v) {
      std::size_t acc = 0;
      for (std::size_t w = 0; w < f.cols(); ++w) {
        offsets[v][w] = acc;
        acc = checked_count(acc, prev[w], static_cast<std::size_t>(f(v, w)));
      }
      next[v] = acc;
      total = checked_count(total, acc, 1);
    }
    counts_.push_back(std::move(next));
    incidence_.push_back(std::move(f));
    offsets_.push_back(std::move(offsets));
  }
}

std::size_t PathTable::total(std::size_t k) const {
  return std::accumulate(counts_[k].begin(), counts_[k].end(), std::size_t{0});
}

PathTable::Parent PathTable::parent_of(std::size_t k, std::size_t v, std::size_t i) const {
  const auto& f = incidence_[k - 1];
  for (std::size_t w = 0; w < f.cols(); ++w) {
    auto mult = static_cast<std::size_t>(f(v, w));
    std::size_t off = offsets_[k - 1][v][w];
    std::size_t size = counts_[k - 1][w] * mult;
    if (i >= off && i < off + size) {
      std::size_t local = i - off;
      return {w, local / mult, static_cast<std::int64_t>(local % mult)};
    }
  }
  throw Error(ErrorCode::IndexOutOfRange, "path index " + str(i) + " outside vertex " + str(v));
}

Path PathTable::path_of_index(std::size_t v, std::size_t i) const {
  std::size_t n = level();
  if (v >= vertex_count(n))
    throw Error(ErrorCode::IndexOutOfRange, "vertex " + str(v) + " outside level " + str(n));
  if (i >= count(n, v))
    throw Error(ErrorCode::IndexOutOfRange,
                "index " + str(i) + " >= h_" + str(v) + "^(" + str(n) + ") = " + str(count(n, v)));
  Path path(n);
  for (std::size_t k = n; k >= 1; --k) {
    auto p = parent_of(k, v, i);
    path[k - 1] = Edge{p.vertex, v, p.edge};
    v = p.vertex;
    i = p.index;
  }
  return path;
}

std::pair<std::size_t, std::size_t> PathTable::index_of_path(const Path& path) const {
  std::size_t n = level();
  if (path.size() != n)
    throw Error(ErrorCode::InvalidArgument, "path of length " + str(path.size()) + " at level " + str(n));
  std::size_t v = 0;
  std::size_t idx = 0;
  for (std::size_t k = 1; k <= n; ++k) {
    const Edge& e = path[k - 1];
    if (e.source != v)
      throw Error(ErrorCode::InvalidArgument, "edge " + str(k) + " does not start where the path ends");
    if (e.target >= vertex_count(k))
      throw Error(ErrorCode::IndexOutOfRange, "vertex " + str(e.target) + " outside level " + str(k));
    if (e.index < 0 || e.index >= multiplicity(k, e.target, e.source))
      throw Error(ErrorCode::IndexOutOfRange, "edge index " + std::to_string(e.index) + " outside bundle");
    idx = child_index(k, e.target, e.source, idx, e.index);
    v = e.target;
  }
  return {v, idx};
}

Path path_of_index(const BratteliDiagram& d, std::size_t n, std::size_t v, std::size_t i) {
  return PathTable(d, n).path_of_index(v, i);
}

std::pair<std::size_t, std::size_t> index_of_path(const BratteliDiagram& d, std::size_t n, const Path& path) {
  return PathTable(d, n).index_of_path(path);
}

SegmentTable::SegmentTable(const BratteliDiagram& d, std::size_t a, std::size_t b)
    : from_(a), to_(b), table_(d, b) {
  if (a > b)
    throw Error(ErrorCode::InvalidArgument, "segment table needs a <= b");
  std::size_t na = table_.vertex_count(a);
  coords_.resize(na);
  segments_.assign(na, std::vector<std::size_t>(na, 0));
  for (std::size_t u = 0; u < na; ++u) {
    segments_[u][u] = 1;
    for (std::size_t i = 0; i < table_.count(a, u); ++i)
      coords_[u].push_back({u, i, 0});
  }
  for (std::size_t k = a + 1; k <= b; ++k) {
    std::size_t nk = table_.vertex_count(k);
    std::size_t nprev = table_.vertex_count(k - 1);
    std::vector<std::vector<Coord>> next(nk);
    std::vector<std::vector<std::size_t>> seg(nk, std::vector<std::size_t>(na, 0));
    for (std::size_t v = 0; v < nk; ++v) {
      next[v].resize(table_.count(k, v));
      // segoff[u] accumulates the segment counts of earlier source blocks.
      std::vector<std::size_t> segoff(na, 0);
      for (std::size_t w = 0; w < nprev; ++w) {
        auto f = static_cast<std::size_t>(table_.multiplicity(k, v, w));
        if (f == 0)
          continue;
        for (std::size_t p = 0; p < table_.count(k - 1, w); ++p) {
          const Coord& c = coords_[w][p];
          for (std::size_t e = 0; e < f; ++e) {
            std::size_t idx = table_.child_index(k, v, w, p, static_cast<std::int64_t>(e));
            next[v][idx] = {c.source, c.prefix, segoff[c.source] + c.segment * f + e};
          }
        }
        for (std::size_t u = 0; u < na; ++u)
          segoff[u] += segments_[w][u] * f;
      }
      seg[v] = segoff;
    }
    coords_ = std::move(next);
    segments_ = std::move(seg);
  }
  std::size_t nb = table_.vertex_count(b);
  inverse_.resize(nb);
  for (std::size_t v = 0; v < nb; ++v) {
    inverse_[v].resize(na);
    for (std::size_t u = 0; u < na; ++u)
      inverse_[v][u].assign(table_.count(a, u) * segments_[v][u], 0);
    for (std::size_t i = 0; i < coords_[v].size(); ++i) {
      const Coord& c = coords_[v][i];
      inverse_[v][c.source][c.prefix * segments_[v][c.source] + c.segment] = i;
    }
  }
}

std::size_t SegmentTable::index_of(std::size_t v, const Coord& c) const {
  return inverse_[v][c.source][c.prefix * segments_[v][c.source] + c.segment];
}

} // namespace bratteli
