#include "bratteli/character.hpp"

#include "bratteli/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>

namespace bratteli {

namespace {

std::string str(std::size_t n) { return std::to_string(n); }

// mu(set) for a set given by per-vertex member counts at `level`.
Value mass(const std::vector<Value>& weights, const std::vector<std::size_t>& counts) {
  Value total(0);
  for (std::size_t v = 0; v < counts.size(); ++v)
    if (counts[v])
      total += Value(static_cast<long long>(counts[v])) * weights[v];
  return total;
}

Value from_counts(const CharacterSpec& spec, const std::vector<std::vector<Value>>& weights,
                  const std::vector<std::size_t>& counts, bool identity) {
  if (spec.regular())
    return Value(identity ? 1 : 0);
  std::vector<Value> t;
  for (const auto& w : weights)
    t.push_back(mass(w, counts));
  return phi(spec, t);
}

std::vector<std::vector<Value>> weights_at(const CharacterSpec& spec, std::size_t level) {
  std::vector<std::vector<Value>> out;
  for (const auto& term : spec.terms)
    out.push_back(term.measure.weights(level));
  return out;
}

std::vector<GroupElement> common_level(const BratteliDiagram& d, const std::vector<GroupElement>& elements,
                                       std::size_t& level) {
  level = 0;
  for (const auto& g : elements)
    level = std::max(level, g.level());
  std::vector<GroupElement> out;
  for (const auto& g : elements)
    out.push_back(embed(d, g, level));
  return out;
}

bool symmetric(const ValueMatrix& m) {
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i].size() != m.size())
      throw Error(ErrorCode::ShapeMismatch, "matrix is not square");
    for (std::size_t j = 0; j < i; ++j)
      if (!m[i][j].overlaps(m[j][i]))
        return false;
  }
  return true;
}

Rational quadratic_form(const std::vector<std::vector<Rational>>& m, const std::vector<Rational>& x) {
  Rational total(0);
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (x[i] == 0)
      continue;
    for (std::size_t j = 0; j < m.size(); ++j)
      if (x[j] != 0)
        total += x[i] * m[i][j] * x[j];
  }
  return total;
}

// Returns x with x^T M x < 0, or nothing when M is PSD.
std::optional<std::vector<Rational>> schur_witness(const std::vector<std::vector<Rational>>& m) {
  std::size_t n = m.size();
  if (n == 0)
    return std::nullopt;
  const Rational& a = m[0][0];
  std::vector<Rational> e1(n, Rational(0));
  e1[0] = 1;
  if (a < 0)
    return e1;
  std::vector<std::vector<Rational>> c(n - 1, std::vector<Rational>(n - 1));
  for (std::size_t i = 1; i < n; ++i)
    for (std::size_t j = 1; j < n; ++j)
      c[i - 1][j - 1] = m[i][j];
  if (a > 0) {
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t j = 1; j < n; ++j)
        c[i - 1][j - 1] -= m[i][0] * m[0][j] / a;
    auto y = schur_witness(c);
    if (!y)
      return std::nullopt;
    Rational dot(0);
    for (std::size_t i = 1; i < n; ++i)
      dot += m[0][i] * (*y)[i - 1];
    std::vector<Rational> x{-dot / a};
    x.insert(x.end(), y->begin(), y->end());
    return x;
  }
  for (std::size_t j = 1; j < n; ++j) {
    if (m[0][j] != 0) {
      // (t e1 + e_j)^T M (t e1 + e_j) = 2 t b_j + M_jj = -1.
      std::vector<Rational> x(n, Rational(0));
      x[0] = -(m[j][j] + 1) / (2 * m[0][j]);
      x[j] = 1;
      return x;
    }
  }
  auto y = schur_witness(c);
  if (!y)
    return std::nullopt;
  std::vector<Rational> x{Rational(0)};
  x.insert(x.end(), y->begin(), y->end());
  return x;
}

// Smallest {-1,0,1} witness: fewest nonzeros, then lexicographic with -1 < 0 < 1,
// first nonzero entry +1.
std::optional<std::vector<Rational>> small_witness(const std::vector<std::vector<Rational>>& m) {
  std::size_t n = m.size();
  std::vector<std::vector<int>> candidates;
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i)
    total *= 3;
  for (std::size_t code = 0; code < total; ++code) {
    std::vector<int> x(n);
    std::size_t c = code;
    for (std::size_t i = n; i-- > 0;) {
      x[i] = static_cast<int>(c % 3) - 1;
      c /= 3;
    }
    auto first = std::find_if(x.begin(), x.end(), [](int e) { return e != 0; });
    if (first == x.end() || *first != 1)
      continue;
    candidates.push_back(std::move(x));
  }
  auto support = [](const std::vector<int>& x) { return std::count_if(x.begin(), x.end(), [](int e) { return e; }); };
  std::stable_sort(candidates.begin(), candidates.end(),
                   [&](const auto& x, const auto& y) { return support(x) < support(y); });
  for (const auto& x : candidates) {
    std::vector<Rational> q(x.begin(), x.end());
    if (quadratic_form(m, q) < 0)
      return q;
  }
  return std::nullopt;
}

std::vector<Rational> primitive(std::vector<Rational> x) {
  Integer l(1);
  for (const auto& q : x)
    l = boost::multiprecision::lcm(l, boost::multiprecision::denominator(q));
  Integer g(0);
  for (auto& q : x) {
    q *= l;
    g = boost::multiprecision::gcd(g, boost::multiprecision::numerator(q));
  }
  if (g > 1)
    for (auto& q : x)
      q /= g;
  return x;
}

PsdResult numeric_psd(const ValueMatrix& m, double tolerance) {
  auto n = static_cast<Eigen::Index>(m.size());
  Eigen::MatrixXd a(n, n);
  double widest = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto& v = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      a(i, j) = v.mid().convert_to<double>();
      widest = std::max(widest, v.width().convert_to<double>());
    }
  a = (a + a.transpose()) / 2;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
  double lambda = solver.eigenvalues()(0);
  double tol = tolerance + static_cast<double>(n) * widest;
  PsdResult result;
  result.exact = false;
  result.min_eigenvalue = lambda;
  if (std::abs(lambda) <= tol)
    throw Error(ErrorCode::ToleranceAmbiguous, "smallest eigenvalue " + std::to_string(lambda) +
                                                   " is within tolerance " + std::to_string(tol) + " of zero");
  if (lambda > 0)
    return result;
  result.psd = false;
  Eigen::VectorXd x = solver.eigenvectors().col(0);
  for (Eigen::Index i = 0; i < n; ++i)
    result.witness.emplace_back(x(i));
  result.witness_value = Rational(lambda);
  return result;
}

} // namespace

bool CharacterSpec::regular() const {
  return std::any_of(terms.begin(), terms.end(), [](const auto& t) { return t.alpha.infinite; });
}

Value phi(const CharacterSpec& spec, const std::vector<Value>& t) {
  if (t.size() != spec.terms.size())
    throw Error(ErrorCode::ShapeMismatch, "one fraction per character term expected");
  Value out(1);
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (spec.terms[i].alpha.infinite)
      throw Error(ErrorCode::InvalidArgument, "phi is undefined for the regular character");
    out *= pow(t[i], spec.terms[i].alpha.value);
  }
  return out;
}

Value eval_character(const BratteliDiagram& d, const CharacterSpec& spec, const GroupElement& g) {
  if (spec.regular())
    return Value(g.is_identity() ? 1 : 0);
  ClopenSet f = fix(d, g);
  std::vector<Value> t;
  for (const auto& term : spec.terms)
    t.push_back(measure_of(term.measure, f));
  return phi(spec, t);
}

Value trace_projection(const BratteliDiagram& d, const CharacterSpec& spec, const ClopenSet& a) {
  if (spec.regular())
    return Value(a.is_empty() ? 1 : 0);
  ClopenSet rest = complement(d, a);
  std::vector<Value> t;
  for (const auto& term : spec.terms)
    t.push_back(measure_of(term.measure, rest));
  return phi(spec, t);
}

ValueMatrix gram_matrix(const BratteliDiagram& d, const CharacterSpec& spec, const std::vector<GroupElement>& elements) {
  std::size_t level = 0;
  auto gs = common_level(d, elements, level);
  auto weights = weights_at(spec, level);
  std::size_t k = gs.size();
  ValueMatrix m(k, std::vector<Value>(k));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i; j < k; ++j) {
      // x is fixed by g_i g_j^{-1} iff y = g_j^{-1} x satisfies g_i y = g_j y.
      std::vector<std::size_t> counts;
      bool identity = true;
      for (std::size_t v = 0; v < gs[i].vertex_count(); ++v) {
        const auto& a = gs[i].perm(v);
        const auto& b = gs[j].perm(v);
        std::size_t c = 0;
        for (std::size_t y = 0; y < a.size(); ++y)
          c += a[y] == b[y];
        identity = identity && c == a.size();
        counts.push_back(c);
      }
      m[i][j] = from_counts(spec, weights, counts, identity);
      m[j][i] = m[i][j];
    }
  return m;
}

CentralityReport centrality_check(const BratteliDiagram& d, const CharacterSpec& spec,
                                  const std::vector<GroupElement>& elements) {
  std::size_t level = 0;
  auto gs = common_level(d, elements, level);
  auto weights = weights_at(spec, level);
  CentralityReport report;
  auto chi_of_product = [&](const GroupElement& g, const GroupElement& h) {
    std::vector<std::size_t> counts;
    bool identity = true;
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
      const auto& a = g.perm(v);
      const auto& b = h.perm(v);
      std::size_t c = 0;
      for (std::size_t x = 0; x < a.size(); ++x)
        c += a[b[x]] == x;
      identity = identity && c == a.size();
      counts.push_back(c);
    }
    return from_counts(spec, weights, counts, identity);
  };
  for (std::size_t i = 0; i < gs.size(); ++i)
    for (std::size_t j = i + 1; j < gs.size(); ++j) {
      ++report.pairs_checked;
      if (!(chi_of_product(gs[i], gs[j]) == chi_of_product(gs[j], gs[i])))
        report.violations.emplace_back(i, j);
    }
  return report;
}

PsdResult psd_check_exact(const std::vector<std::vector<Rational>>& m) {
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i].size() != m.size())
      throw Error(ErrorCode::ShapeMismatch, "matrix is not square");
    for (std::size_t j = 0; j < i; ++j)
      if (m[i][j] != m[j][i])
        throw Error(ErrorCode::NotSymmetric,
                    "entry (" + str(i) + ", " + str(j) + ") differs from (" + str(j) + ", " + str(i) + ")");
  }
  PsdResult result;
  auto x = schur_witness(m);
  if (!x)
    return result;
  result.psd = false;
  std::optional<std::vector<Rational>> small;
  if (m.size() <= 8)
    small = small_witness(m);
  result.witness = small ? *small : primitive(*x);
  result.witness_value = quadratic_form(m, result.witness);
  return result;
}

PsdResult psd_check(const ValueMatrix& m, double tolerance) {
  if (!symmetric(m))
    throw Error(ErrorCode::NotSymmetric, "matrix entries are not symmetric");
  bool exact = std::all_of(m.begin(), m.end(),
                           [](const auto& row) { return std::all_of(row.begin(), row.end(), [](const Value& v) { return v.exact(); }); });
  if (!exact)
    return numeric_psd(m, tolerance);
  std::vector<std::vector<Rational>> q(m.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (const auto& v : m[i])
      q[i].push_back(v.lo());
  return psd_check_exact(q);
}

namespace {

// Per-vertex selection fractions t_v at level `level` realizing the targets:
// sum_v h_v q_{i,v} t_v = c_i. Equal targets give t_v = c.
std::vector<double> vertex_fractions(const std::vector<std::vector<Value>>& weights, const std::vector<Integer>& h,
                                     const std::vector<Rational>& targets) {
  std::size_t nv = h.size();
  bool equal = std::all_of(targets.begin(), targets.end(), [&](const Rational& c) { return c == targets.front(); });
  if (equal)
    return std::vector<double>(nv, targets.front().convert_to<double>());
  // Projected gradient on |A t - c|^2 over the unit cube.
  std::vector<std::vector<double>> a(targets.size(), std::vector<double>(nv));
  for (std::size_t i = 0; i < targets.size(); ++i)
    for (std::size_t v = 0; v < nv; ++v)
      a[i][v] = (Value(Rational(h[v])) * weights[i][v]).mid().convert_to<double>();
  std::vector<double> t(nv, 0.5);
  for (int iter = 0; iter < 5000; ++iter) {
    std::vector<double> grad(nv, 0.0);
    for (std::size_t i = 0; i < targets.size(); ++i) {
      double r = -targets[i].convert_to<double>();
      for (std::size_t v = 0; v < nv; ++v)
        r += a[i][v] * t[v];
      for (std::size_t v = 0; v < nv; ++v)
        grad[v] += r * a[i][v];
    }
    for (std::size_t v = 0; v < nv; ++v)
      t[v] = std::clamp(t[v] - grad[v], 0.0, 1.0);
  }
  return t;
}

} // namespace

std::vector<MultiplicativityStep> multiplicativity_harness(const BratteliDiagram& d, const CharacterSpec& spec,
                                                           const GroupElement& g, const std::vector<Rational>& targets,
                                                           std::size_t n_from, std::size_t n_to,
                                                           const Rational& tolerance) {
  if (targets.size() != spec.terms.size())
    throw Error(ErrorCode::ShapeMismatch, "one target fraction per character term expected");
  for (const auto& c : targets)
    if (c < 0 || c > 1)
      throw Error(ErrorCode::UnreachableTarget, "target " + to_string(c) + " is not a measure fraction");
  if (n_from < g.level())
    throw Error(ErrorCode::InvalidArgument, "the harness starts below the element's level " + str(g.level()));

  Value chi_g = eval_character(d, spec, g);
  std::vector<MultiplicativityStep> steps;
  for (std::size_t n = n_from; n <= n_to; ++n) {
    std::optional<SegmentTable> chosen;
    std::vector<std::vector<std::size_t>> selected;  // [v at n+k][u at n]
    std::vector<Value> achieved;
    std::string best = "none";
    for (std::size_t k = 1; k <= 24 && d.has_level(n + k); ++k) {
      std::optional<SegmentTable> seg;
      try {
        seg.emplace(d, n, n + k);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::PathSpaceTooLarge)
          break;
        throw;
      }
      const PathTable& table = seg->paths();
      auto weights = weights_at(spec, n + k);
      auto h = path_counts(d, n + k);
      auto t = vertex_fractions(weights, h, targets);
      std::vector<std::vector<std::size_t>> sel(table.vertex_count(n + k));
      bool pairable = true;
      for (std::size_t v = 0; v < sel.size(); ++v)
        for (std::size_t u = 0; u < table.vertex_count(n); ++u) {
          std::size_t c = seg->segment_count(v, u);
          auto s = static_cast<std::size_t>(std::llround(t[v] * static_cast<double>(c)));
          s = std::min(s, c);
          sel[v].push_back(s);
          if (c - s == 1)
            pairable = false;
        }
      if (!pairable)
        continue;
      std::vector<Value> got;
      Rational error(0);
      for (std::size_t i = 0; i < weights.size(); ++i) {
        Value mu(0);
        for (std::size_t v = 0; v < sel.size(); ++v)
          for (std::size_t u = 0; u < sel[v].size(); ++u)
            if (sel[v][u])
              mu += Value(Rational(table.count(n, u) * sel[v][u])) * weights[i][v];
        Value diff = abs(mu - Value(targets[i]));
        error = std::max(error, diff.hi());
        got.push_back(mu);
      }
      best = "";
      for (const auto& x : got)
        best += (best.empty() ? "" : ", ") + to_string(x);
      if (error <= tolerance) {
        chosen = std::move(seg);
        selected = std::move(sel);
        achieved = std::move(got);
        break;
      }
    }
    if (!chosen)
      throw Error(ErrorCode::UnreachableTarget,
                  "no suffix-cylinder set below level " + str(n) + " realizes the targets; best achievable: " + best);

    const SegmentTable& seg = *chosen;
    const PathTable& table = seg.paths();
    std::size_t top = seg.to();
    std::vector<Permutation> perms;
    for (std::size_t v = 0; v < table.vertex_count(top); ++v) {
      Permutation p = perm::identity(table.count(top, v));
      for (std::size_t idx = 0; idx < p.size(); ++idx) {
        const auto& c = seg.coord(v, idx);
        std::size_t s = selected[v][c.source];
        if (c.segment < s)
          continue;
        // Unselected segments move in pairs, the last three in a 3-cycle when
        // their number is odd.
        std::size_t cnt = seg.segment_count(v, c.source) - s;
        std::size_t r = c.segment - s;
        std::size_t moved;
        if (cnt % 2 == 1 && r + 3 >= cnt)
          moved = cnt - 3 + (r - (cnt - 3) + 1) % 3;
        else
          moved = r ^ 1u;
        p[idx] = static_cast<std::uint32_t>(seg.index_of(v, {c.source, c.prefix, s + moved}));
      }
      perms.push_back(std::move(p));
    }
    GroupElement hn(top, std::move(perms));

    MultiplicativityStep step;
    step.n = n;
    step.level = top;
    step.achieved = achieved;
    step.chi_product = eval_character(d, spec, compose(d, g, hn));
    if (spec.regular()) {
      step.predicted = chi_g * eval_character(d, spec, hn);
    } else {
      std::vector<Value> c(targets.begin(), targets.end());
      step.predicted = chi_g * phi(spec, c);
    }
    step.defect = abs(step.chi_product - step.predicted);
    steps.push_back(std::move(step));
  }
  return steps;
}

std::vector<ProjectionStep> projection_limit_check(const BratteliDiagram& d, const CharacterSpec& spec,
                                                   const ClopenSet& a, std::size_t n_from, std::size_t n_to) {
  if (n_from < a.level())
    throw Error(ErrorCode::InvalidArgument, "the check starts below the set's level " + str(a.level()));
  std::vector<ProjectionStep> steps;
  Value trace = trace_projection(d, spec, a);
  for (std::size_t n = n_from; n <= n_to; ++n) {
    auto hn = make_hn(d, a, n);
    ProjectionStep step;
    step.n = n;
    step.chi_hn = eval_character(d, spec, hn.element);
    step.trace = trace;
    step.defect = abs(step.chi_hn - trace);
    step.max_fixed_fraction = hn.max_fixed_fraction;
    if (spec.regular()) {
      step.bound = Value(0);
    } else {
      // mu(Fix h_n) <= mu(X \ A) + (max fixed fraction) mu(A).
      ClopenSet rest = complement(d, a);
      std::vector<Value> upper;
      for (const auto& term : spec.terms)
        upper.push_back(measure_of(term.measure, rest) +
                        Value(hn.max_fixed_fraction) * measure_of(term.measure, a));
      step.bound = phi(spec, upper) - trace;
    }
    step.within_bound = step.defect.lo() <= step.bound.hi();
    steps.push_back(std::move(step));
  }
  return steps;
}

} // namespace bratteli
