#include "bratteli/rperm.hpp"

#include "bratteli/error.hpp"

#include <numeric>
#include <string>

namespace bratteli {

namespace {

std::string str(std::size_t n) { return std::to_string(n); }

void require_br(const BratteliDiagram& d) {
  if (!d.is_br())
    throw Error(ErrorCode::WrongDiagram, "interval coordinates exist only on the B_R diagram");
}

// code -> (vertex, path index) and back for all paths of B_R level n.
struct BrCoding {
  std::vector<std::vector<std::size_t>> code_of;  // [v][i]
  std::vector<std::pair<std::size_t, std::size_t>> path_of;  // [code]
};

BrCoding br_coding(const BratteliDiagram& d, std::size_t n) {
  PathTable table(d, n);
  BrCoding c;
  c.path_of.resize(table.total(n));
  c.code_of.resize(table.vertex_count(n));
  for (std::size_t v = 0; v < table.vertex_count(n); ++v) {
    c.code_of[v].resize(table.count(v));
    for (std::size_t i = 0; i < table.count(v); ++i) {
      std::vector<std::size_t> a;
      for (const auto& e : table.path_of_index(v, i))
        a.push_back(e.target);
      auto code = br_interval_code(a).convert_to<std::size_t>();
      c.code_of[v][i] = code;
      c.path_of[code] = {v, i};
    }
  }
  return c;
}

} // namespace

RationalPermutation::RationalPermutation(Permutation perm) : perm_(std::move(perm)) {
  if (perm_.empty() || !perm::is_bijection(perm_))
    throw Error(ErrorCode::InvalidArgument, "a rational permutation needs a bijection of {0..n-1}, n >= 1");
}

RationalPermutation RationalPermutation::identity(std::size_t n) {
  return RationalPermutation(perm::identity(n));
}

RationalPermutation refine_rperm(const RationalPermutation& g, std::size_t m) {
  if (m == 0)
    throw Error(ErrorCode::InvalidArgument, "refinement multiplier must be positive");
  const auto& s = g.perm();
  Permutation out(s.size() * m);
  for (std::size_t j = 0; j < out.size(); ++j)
    out[j] = static_cast<std::uint32_t>(m * s[j / m] + j % m);
  return RationalPermutation(std::move(out));
}

RationalPermutation compose_rperm(const RationalPermutation& g, const RationalPermutation& h) {
  std::size_t n = std::lcm(g.denominator(), h.denominator());
  auto a = refine_rperm(g, n / g.denominator());
  auto b = refine_rperm(h, n / h.denominator());
  return RationalPermutation(perm::compose(a.perm(), b.perm()));
}

RationalPermutation inverse_rperm(const RationalPermutation& g) {
  return RationalPermutation(perm::inverse(g.perm()));
}

bool same_rperm(const RationalPermutation& g, const RationalPermutation& h) {
  std::size_t n = std::lcm(g.denominator(), h.denominator());
  return refine_rperm(g, n / g.denominator()) == refine_rperm(h, n / h.denominator());
}

Rational apply_rperm(const RationalPermutation& g, const Rational& x) {
  if (x < 0 || x >= 1)
    throw Error(ErrorCode::ArgumentOutOfRange, to_string(x) + " is outside [0, 1)");
  Rational nx = x * g.denominator();
  Integer whole = boost::multiprecision::numerator(nx) / boost::multiprecision::denominator(nx);
  Rational frac = nx - Rational(whole);
  auto j = whole.convert_to<std::size_t>();
  return (Rational(g.perm()[j]) + frac) / g.denominator();
}

Rational fix_measure(const RationalPermutation& g) {
  return Rational(perm::fixed_points(g.perm()), g.denominator());
}

Rational char_R(const Exponent& k, const RationalPermutation& g) {
  if (k.infinite)
    return perm::is_identity(g.perm()) ? 1 : 0;
  return pow(fix_measure(g), k.value);
}

Integer br_interval_code(const std::vector<std::size_t>& vertices) {
  std::size_t n = vertices.size();
  Integer code(0);
  // Horner form of sum_j a_j (n+1)!/(j+1)!.
  for (std::size_t j = 1; j <= n; ++j)
    code = code * (j + 1) + vertices[j - 1];
  return code;
}

RationalPermutation to_rperm(const BratteliDiagram& d, const GroupElement& g) {
  require_br(d);
  auto coding = br_coding(d, g.level());
  Permutation s(coding.path_of.size());
  for (std::size_t v = 0; v < g.vertex_count(); ++v)
    for (std::size_t i = 0; i < g.perm(v).size(); ++i)
      s[coding.code_of[v][i]] = static_cast<std::uint32_t>(coding.code_of[v][g.perm(v)[i]]);
  return RationalPermutation(std::move(s));
}

GroupElement from_rperm(const BratteliDiagram& d, const RationalPermutation& g) {
  require_br(d);
  std::size_t q = g.denominator();
  std::size_t factorial = 1;
  for (std::size_t n = 0;; ++n) {
    factorial *= n + 1;  // (n+1)!
    if (factorial > kMaxPathsPerLevel)
      throw Error(ErrorCode::PathSpaceTooLarge,
                  "denominator " + str(q) + " is not carried by any B_R level up to " + str(n - 1));
    if (factorial % q != 0)
      continue;
    auto fine = refine_rperm(g, factorial / q);
    const auto& s = fine.perm();
    bool preserves = true;
    for (std::size_t j = 0; j < s.size() && preserves; ++j)
      preserves = s[j] % (n + 1) == j % (n + 1);
    if (!preserves)
      continue;
    auto coding = br_coding(d, n);
    std::vector<Permutation> perms;
    for (std::size_t v = 0; v < coding.code_of.size(); ++v) {
      Permutation p(coding.code_of[v].size());
      for (std::size_t i = 0; i < p.size(); ++i)
        p[i] = static_cast<std::uint32_t>(coding.path_of[s[coding.code_of[v][i]]].second);
      perms.push_back(std::move(p));
    }
    return GroupElement(n, std::move(perms));
  }
}

} // namespace bratteli
