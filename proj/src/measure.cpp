#include "bratteli/measure.hpp"

#include "bratteli/error.hpp"

#include <algorithm>
#include <numeric>
#include <cmath>
#include <string>

namespace bratteli {

namespace {

using IntegerMatrix = std::vector<std::vector<Integer>>;

std::string str(std::size_t n) { return std::to_string(n); }

// F_{b-1} ... F_a as |V_b| x |V_a| without overflow.
IntegerMatrix integer_product(const BratteliDiagram& d, std::size_t a, std::size_t b) {
  std::size_t na = d.vertex_count(a);
  IntegerMatrix p(na, std::vector<Integer>(na));
  for (std::size_t i = 0; i < na; ++i)
    p[i][i] = 1;
  for (std::size_t k = a; k < b; ++k) {
    auto f = d.incidence(k);
    IntegerMatrix q(f.rows(), std::vector<Integer>(na));
    for (std::size_t r = 0; r < f.rows(); ++r)
      for (std::size_t j = 0; j < f.cols(); ++j)
        if (f(r, j) != 0)
          for (std::size_t c = 0; c < na; ++c)
            if (p[j][c] != 0)
              q[r][c] += Integer(f(r, j)) * p[j][c];
    p = std::move(q);
  }
  return p;
}

Integer factorial(std::size_t n) {
  Integer r = 1;
  for (std::size_t i = 2; i <= n; ++i)
    r *= static_cast<unsigned long>(i);
  return r;
}

std::vector<Value> hull_weights(const BratteliDiagram& d, std::size_t n, std::size_t lookahead) {
  auto ratios = limit_ratios(d, n, n + lookahead);
  std::vector<Value> out;
  for (std::size_t v = 0; v < ratios[0].size(); ++v) {
    Rational lo = ratios[0][v], hi = ratios[0][v];
    for (const auto& row : ratios) {
      lo = std::min(lo, row[v]);
      hi = std::max(hi, row[v]);
    }
    out.emplace_back(lo, hi);
  }
  return out;
}

// Gaussian elimination over the rationals; returns a basis of the null space.
std::vector<std::vector<Rational>> null_space(std::vector<std::vector<Rational>> a) {
  std::size_t rows = a.size();
  std::size_t cols = rows ? a[0].size() : 0;
  std::vector<std::size_t> pivot_cols;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && a[p][c] == 0)
      ++p;
    if (p == rows)
      continue;
    std::swap(a[p], a[r]);
    Rational inv = 1 / a[r][c];
    for (auto& x : a[r])
      x *= inv;
    for (std::size_t i = 0; i < rows; ++i)
      if (i != r && a[i][c] != 0) {
        Rational factor = a[i][c];
        for (std::size_t j = 0; j < cols; ++j)
          a[i][j] -= factor * a[r][j];
      }
    pivot_cols.push_back(c);
    ++r;
  }
  std::vector<std::vector<Rational>> basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (std::find(pivot_cols.begin(), pivot_cols.end(), free) != pivot_cols.end())
      continue;
    std::vector<Rational> x(cols);
    x[free] = 1;
    for (std::size_t i = 0; i < pivot_cols.size(); ++i)
      x[pivot_cols[i]] = -a[i][free];
    basis.push_back(std::move(x));
  }
  return basis;
}

long double perron_estimate(const IntMatrix& f) {
  std::size_t k = f.rows();
  std::vector<long double> x(k, 1.0L);
  long double lambda = 0;
  for (int it = 0; it < 2000; ++it) {
    std::vector<long double> y(k, 0.0L);
    for (std::size_t r = 0; r < k; ++r)
      for (std::size_t c = 0; c < k; ++c)
        y[r] += static_cast<long double>(f(r, c)) * x[c];
    long double norm = 0;
    for (auto v : y)
      norm += v;
    lambda = norm / std::accumulate(x.begin(), x.end(), 0.0L);
    for (auto& v : y)
      v /= norm;
    x = std::move(y);
  }
  return lambda;
}

bool primitive(const IntMatrix& f) {
  std::size_t k = f.rows();
  std::vector<std::vector<bool>> base(k, std::vector<bool>(k)), p;
  for (std::size_t r = 0; r < k; ++r)
    for (std::size_t c = 0; c < k; ++c)
      base[r][c] = f(r, c) > 0;
  p = base;
  for (std::size_t j = 1; j < k * k - 2 * k + 2; ++j) {
    std::vector<std::vector<bool>> q(k, std::vector<bool>(k));
    for (std::size_t r = 0; r < k; ++r)
      for (std::size_t m = 0; m < k; ++m)
        if (p[r][m])
          for (std::size_t c = 0; c < k; ++c)
            if (base[m][c])
              q[r][c] = true;
    p = std::move(q);
  }
  for (const auto& row : p)
    for (bool b : row)
      if (!b)
        return false;
  return true;
}

std::optional<InvariantMeasure> exact_stationary(const BratteliDiagram& d, const IntMatrix& f) {
  long double estimate = perron_estimate(f);
  std::size_t k = f.rows();
  auto lo = static_cast<long long>(std::floor(estimate));
  for (long long candidate : {lo, lo + 1}) {
    if (candidate <= 0)
      continue;
    // Left Perron vector: F^T u = lambda u.
    std::vector<std::vector<Rational>> a(k, std::vector<Rational>(k));
    for (std::size_t r = 0; r < k; ++r)
      for (std::size_t c = 0; c < k; ++c)
        a[r][c] = Rational(f(c, r)) - (r == c ? Rational(candidate) : Rational(0));
    auto basis = null_space(a);
    if (basis.size() != 1)
      continue;
    auto u = basis[0];
    bool positive = std::all_of(u.begin(), u.end(), [](const Rational& x) { return x > 0; });
    bool negative = std::all_of(u.begin(), u.end(), [](const Rational& x) { return x < 0; });
    if (!positive && !negative)
      continue;
    if (negative)
      for (auto& x : u)
        x = -x;

    std::size_t start = d.prefix_depth();
    std::vector<std::vector<Rational>> prefix(start + 1);
    prefix[start] = u;
    for (std::size_t j = start; j-- > 0;) {
      auto fj = d.incidence(j);
      prefix[j].assign(fj.cols(), Rational(0));
      for (std::size_t v = 0; v < fj.cols(); ++v)
        for (std::size_t w = 0; w < fj.rows(); ++w)
          prefix[j][v] += Rational(fj(w, v)) * prefix[j + 1][w];
    }
    Rational scale = prefix[0][0];
    for (auto& level : prefix)
      for (auto& x : level)
        x /= scale;
    return InvariantMeasure(InvariantMeasure::StationaryExact{std::move(prefix), Integer(candidate)});
  }
  return std::nullopt;
}

} // namespace

Value InvariantMeasure::weight(std::size_t level, std::size_t vertex) const {
  auto w = weights(level);
  if (vertex >= w.size())
    throw Error(ErrorCode::IndexOutOfRange, "vertex " + str(vertex) + " outside level " + str(level));
  return w[vertex];
}

std::vector<Value> InvariantMeasure::weights(std::size_t level) const {
  return std::visit(
      [&](const auto& r) -> std::vector<Value> {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Odometer>) {
          return {Value(Rational(Integer(1), boost::multiprecision::pow(Integer(r.base), static_cast<unsigned>(level))))};
        } else if constexpr (std::is_same_v<T, Br>) {
          return std::vector<Value>(level + 1, Value(Rational(Integer(1), factorial(level + 1))));
        } else if constexpr (std::is_same_v<T, Table>) {
          std::size_t depth = r.weights.size() - 1;
          if (level <= depth)
            return r.weights[level];
          if (!r.geometric_ratio)
            throw Error(ErrorCode::DepthExceeded,
                        "measure certificate covers levels 0.." + str(depth) + ", level " + str(level) + " requested");
          Value factor(pow(*r.geometric_ratio, static_cast<unsigned>(level - depth)));
          std::vector<Value> out;
          for (const auto& q : r.weights[depth])
            out.push_back(q * factor);
          return out;
        } else if constexpr (std::is_same_v<T, StationaryExact>) {
          std::size_t k = r.prefix.size() - 1;
          std::vector<Value> out;
          if (level <= k) {
            for (const auto& q : r.prefix[level])
              out.emplace_back(q);
            return out;
          }
          Rational factor(Integer(1), boost::multiprecision::pow(r.lambda, static_cast<unsigned>(level - k)));
          for (const auto& q : r.prefix[k])
            out.emplace_back(q * factor);
          return out;
        } else if constexpr (std::is_same_v<T, Hull>) {
          return hull_weights(*r.diagram, level, r.lookahead);
        } else {
          return r.base->weights(cut_level(r.cuts, level));
        }
      },
      rule_);
}

std::optional<std::size_t> InvariantMeasure::depth() const {
  if (const auto* t = std::get_if<Table>(&rule_); t && !t->geometric_ratio)
    return t->weights.size() - 1;
  if (const auto* t = std::get_if<Telescoped>(&rule_)) {
    auto base = t->base->depth();
    if (!base)
      return std::nullopt;
    std::size_t k = 0;
    while (cut_level(t->cuts, k + 1) <= *base)
      ++k;
    return k;
  }
  return std::nullopt;
}

bool InvariantMeasure::exact() const {
  return std::visit(
      [](const auto& r) -> bool {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Table>) {
          for (const auto& level : r.weights)
            for (const auto& q : level)
              if (!q.exact())
                return false;
          return true;
        } else if constexpr (std::is_same_v<T, Hull>) {
          return false;
        } else if constexpr (std::is_same_v<T, Telescoped>) {
          return r.base->exact();
        } else {
          return true;
        }
      },
      rule_);
}

std::string InvariantMeasure::describe() const {
  return std::visit(
      [](const auto& r) -> std::string {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Odometer>) {
          return "odometer(" + std::to_string(r.base) + ")";
        } else if constexpr (std::is_same_v<T, Br>) {
          return "br";
        } else if constexpr (std::is_same_v<T, Table>) {
          return "table(depth " + str(r.weights.size() - 1) + (r.geometric_ratio ? ", geometric)" : ")");
        } else if constexpr (std::is_same_v<T, StationaryExact>) {
          return "stationary(perron " + r.lambda.str() + ")";
        } else if constexpr (std::is_same_v<T, Hull>) {
          return "stationary(hull lookahead " + str(r.lookahead) + ")";
        } else {
          return "telescope(" + r.base->describe() + ")";
        }
      },
      rule_);
}

InvariantMeasure validate_certificate(const BratteliDiagram& d, std::vector<std::vector<Value>> table,
                                      std::size_t depth, std::optional<Rational> geometric_ratio) {
  if (!d.has_level(depth))
    throw Error(ErrorCode::DepthExceeded, "certificate depth " + str(depth) + " beyond diagram depth");
  if (table.size() < depth + 1)
    throw Error(ErrorCode::DepthExceeded,
                "table covers " + str(table.size()) + " levels, " + str(depth + 1) + " required");
  table.resize(depth + 1);
  for (std::size_t n = 0; n <= depth; ++n) {
    if (table[n].size() != d.vertex_count(n))
      throw Error(ErrorCode::ShapeMismatch, "level " + str(n) + " has " + str(d.vertex_count(n)) +
                                                " vertices, table lists " + str(table[n].size()));
    for (std::size_t v = 0; v < table[n].size(); ++v)
      if (table[n][v].hi() < 0)
        throw Error(ErrorCode::InvalidArgument, "negative weight at level " + str(n) + " vertex " + str(v));
  }

  auto check_consistency = [&](std::size_t n, const std::vector<Value>& lower, const IntMatrix& f) {
    for (std::size_t v = 0; v < f.cols(); ++v) {
      Value rhs(0);
      for (std::size_t w = 0; w < f.rows(); ++w)
        if (f(w, v) != 0)
          rhs += Value(f(w, v)) * lower[w];
      const Value& lhs = table[n][v];
      bool ok = lhs.exact() && rhs.exact() ? lhs == rhs : lhs.overlaps(rhs);
      if (!ok)
        throw Error(ErrorCode::ConsistencyViolation, "level " + str(n) + " vertex " + str(v) + ": " +
                                                         to_string(lhs) + " != " + to_string(rhs));
    }
  };

  for (std::size_t n = 0; n < depth; ++n)
    check_consistency(n, table[n + 1], d.incidence(n));

  for (std::size_t n = 0; n <= depth; ++n) {
    auto h = path_counts(d, n);
    Value total(0);
    for (std::size_t v = 0; v < h.size(); ++v)
      total += Value(Rational(h[v])) * table[n][v];
    if (!total.contains(Rational(1)))
      throw Error(ErrorCode::NotNormalized, "level " + str(n) + " total mass " + to_string(total));
  }

  if (geometric_ratio) {
    if (*geometric_ratio <= 0)
      throw Error(ErrorCode::InvalidArgument, "geometric ratio must be positive");
    bool stationary_beyond = d.prefix_depth() <= depth && (std::holds_alternative<StationaryTail>(d.tail()) ||
                                                           std::holds_alternative<OdometerTail>(d.tail()));
    if (!stationary_beyond)
      throw Error(ErrorCode::InvalidArgument,
                  "a geometric tail needs stationary incidence from level " + str(depth) + " on");
    // One step suffices: the repeated matrix maps q to q / ratio forever after.
    std::vector<Value> next;
    for (const auto& q : table[depth])
      next.push_back(q * Value(*geometric_ratio));
    check_consistency(depth, next, d.incidence(depth));
  }

  return InvariantMeasure(InvariantMeasure::Table{std::move(table), std::move(geometric_ratio)});
}

std::vector<std::vector<Value>> weight_table(const InvariantMeasure& mu, std::size_t depth) {
  std::vector<std::vector<Value>> out;
  for (std::size_t n = 0; n <= depth; ++n)
    out.push_back(mu.weights(n));
  return out;
}

InvariantMeasure builtin_measure(const BratteliDiagram& d) {
  return std::visit(
      [&](const auto& t) -> InvariantMeasure {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, OdometerTail>) {
          if (!d.prefix_follows_tail())
            throw Error(ErrorCode::InvalidArgument, "odometer prefix differs from the tail rule");
          return InvariantMeasure(InvariantMeasure::Odometer{t.base});
        } else if constexpr (std::is_same_v<T, BrTail>) {
          if (!d.prefix_follows_tail())
            throw Error(ErrorCode::InvalidArgument, "BR prefix differs from the tail rule");
          return InvariantMeasure(InvariantMeasure::Br{});
        } else if constexpr (std::is_same_v<T, StationaryTail>) {
          if (!primitive(t.matrix))
            throw Error(ErrorCode::NotPrimitive, "stationary matrix is not primitive");
          if (auto exact = exact_stationary(d, t.matrix))
            return *exact;
          // Grow the lookahead until the enclosure at the first stationary level is tight.
          auto shared = std::make_shared<const BratteliDiagram>(d);
          std::size_t level = d.prefix_depth();
          std::size_t lookahead = 8;
          for (; lookahead < 512; lookahead *= 2) {
            auto w = hull_weights(d, level, lookahead);
            Rational worst = 0;
            for (const auto& q : w)
              worst = std::max(worst, Rational(q.width() / q.hi()));
            if (worst < Rational(Integer(1), Integer(1) << 80))
              break;
          }
          return InvariantMeasure(InvariantMeasure::Hull{shared, lookahead});
        } else if constexpr (std::is_same_v<T, TelescopeTail>) {
          auto base = std::make_shared<const InvariantMeasure>(builtin_measure(*t.base));
          return InvariantMeasure(InvariantMeasure::Telescoped{base, t.cuts});
        } else {
          throw Error(ErrorCode::InvalidArgument, "explicit diagrams have no built-in measure; supply a certificate");
        }
      },
      d.tail());
}

Value measure_of(const InvariantMeasure& mu, const ClopenSet& a) {
  auto w = mu.weights(a.level());
  if (w.size() != a.vertex_count())
    throw Error(ErrorCode::ShapeMismatch, "set and measure disagree on the vertex count");
  Value total(0);
  for (std::size_t v = 0; v < w.size(); ++v) {
    std::size_t c = a.count(v);
    if (c)
      total += Value(static_cast<long long>(c)) * w[v];
  }
  return total;
}

std::vector<std::vector<Rational>> limit_ratios(const BratteliDiagram& d, std::size_t n, std::size_t m) {
  if (m < n)
    throw Error(ErrorCode::InvalidArgument, "limit ratios need n <= m");
  if (!d.has_level(m))
    throw Error(ErrorCode::DepthExceeded, "level " + str(m) + " beyond diagram depth");
  auto f = integer_product(d, n, m);
  auto h = path_counts(d, m);
  std::vector<std::vector<Rational>> out(f.size());
  for (std::size_t w = 0; w < f.size(); ++w)
    for (std::size_t v = 0; v < f[w].size(); ++v)
      out[w].emplace_back(f[w][v], h[w]);
  return out;
}

HullEstimate ergodic_hull_estimate(const BratteliDiagram& d, std::size_t depth) {
  if (!d.has_level(depth))
    throw Error(ErrorCode::DepthExceeded, "level " + str(depth) + " beyond diagram depth");
  HullEstimate est;
  est.depth = depth;
  std::size_t top = d.vertex_count(depth);
  est.candidates.assign(top, {});
  for (std::size_t n = 0; n <= depth; ++n) {
    auto ratios = limit_ratios(d, n, depth);
    auto h = path_counts(d, n);
    for (std::size_t w = 0; w < top; ++w)
      est.candidates[w].push_back(ratios[w]);
    Rational diam = 0;
    for (std::size_t a = 0; a < top; ++a)
      for (std::size_t b = a + 1; b < top; ++b) {
        Rational dist = 0;
        for (std::size_t v = 0; v < h.size(); ++v)
          dist += Rational(h[v]) * abs(ratios[a][v] - ratios[b][v]);
        diam = std::max(diam, dist);
      }
    est.diameter.push_back(diam);
  }
  return est;
}

} // namespace bratteli
