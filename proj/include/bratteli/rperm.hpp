#pragma once

#include "bratteli/character.hpp"
#include "bratteli/diagram.hpp"
#include "bratteli/permutation.hpp"
#include "bratteli/rational.hpp"

#include <cstdint>
#include <vector>

namespace bratteli {

// g_s(x) = (s(floor(nx)) + {nx}) / n: s permutes the subintervals [j/n, (j+1)/n).
class RationalPermutation {
public:
  RationalPermutation() : perm_{0} {}
  // Throws InvalidArgument unless `perm` is a bijection of {0..n-1}, n >= 1.
  explicit RationalPermutation(Permutation perm);

  static RationalPermutation identity(std::size_t n);

  std::size_t denominator() const { return perm_.size(); }
  const Permutation& perm() const { return perm_; }

  // Representation equality; use same_rperm() for the interval maps.
  friend bool operator==(const RationalPermutation&, const RationalPermutation&) = default;

private:
  Permutation perm_;
};

// s'(j) = m s(floor(j/m)) + (j mod m), denominator n m.
RationalPermutation refine_rperm(const RationalPermutation& g, std::size_t m);
// g(h(x)), computed at the lcm of the denominators.
RationalPermutation compose_rperm(const RationalPermutation& g, const RationalPermutation& h);
RationalPermutation inverse_rperm(const RationalPermutation& g);
bool same_rperm(const RationalPermutation& g, const RationalPermutation& h);
// Throws ArgumentOutOfRange for x outside [0, 1).
Rational apply_rperm(const RationalPermutation& g, const Rational& x);
// Lebesgue measure of the fixed set.
Rational fix_measure(const RationalPermutation& g);
// fix_measure^k; k = 0 gives 1 and k = inf the regular character.
Rational char_R(const Exponent& k, const RationalPermutation& g);

// i_n(a_1..a_n) = sum_j a_j (n+1)!/(j+1)!; not validated against the diagram.
Integer br_interval_code(const std::vector<std::size_t>& vertices);

// Level-n element of the B_R diagram as a permutation of (n+1)! intervals,
// a path with vertices a_1..a_n sitting at i_n(a). Throws WrongDiagram.
RationalPermutation to_rperm(const BratteliDiagram& d, const GroupElement& g);
// Inverse of to_rperm at the least level that carries g. Throws WrongDiagram /
// PathSpaceTooLarge.
GroupElement from_rperm(const BratteliDiagram& d, const RationalPermutation& g);

} // namespace bratteli
