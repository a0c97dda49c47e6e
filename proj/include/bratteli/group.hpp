#pragma once

#include "bratteli/clopen.hpp"
#include "bratteli/diagram.hpp"
#include "bratteli/measure.hpp"
#include "bratteli/permutation.hpp"

#include <optional>
#include <vector>

namespace bratteli {

GroupElement identity(const BratteliDiagram& d, std::size_t n);

// Checks degrees against the path counts and that every entry is a
// bijection. Throws ShapeMismatch / InvalidArgument.
GroupElement make_element(const BratteliDiagram& d, std::size_t n, std::vector<Permutation> perms);

// Block-diagonal image in G_m: a path (prefix, suffix) goes to (g prefix, suffix).
GroupElement embed(const BratteliDiagram& d, const GroupElement& g, std::size_t m);

// Same element at its minimal defining level.
GroupElement reduce(const BratteliDiagram& d, const GroupElement& g);

// (g * h)(x) = g(h(x)); both operands are embedded to the larger level and
// the result is reduced.
GroupElement compose(const BratteliDiagram& d, const GroupElement& g, const GroupElement& h);
GroupElement inverse(const BratteliDiagram& d, const GroupElement& g);
bool same_element(const BratteliDiagram& d, const GroupElement& g, const GroupElement& h);

ClopenSet fix(const BratteliDiagram& d, const GroupElement& g);
ClopenSet support(const BratteliDiagram& d, const GroupElement& g);

struct CycleData {
  std::size_t level = 0;
  std::vector<std::vector<std::size_t>> cycle_types;  // per vertex, sorted descending
  std::vector<std::vector<std::size_t>> periods;      // per vertex, per path index
};

CycleData cycle_data(const GroupElement& g);
// Every cycle has length one or an even length.
bool consists_of_even_cycles(const GroupElement& g);

struct ConjugacyResult {
  bool conjugate = false;
  std::size_t level = 0;
  std::optional<GroupElement> witness;  // q with q g q^{-1} = h at `level`
};

// Decides conjugacy inside G_m only; never a statement about G.
ConjugacyResult conjugate_at_level(const BratteliDiagram& d, const GroupElement& g, const GroupElement& h,
                                   std::size_t m);

struct BundleReport {
  std::size_t source;  // v in V_n
  std::size_t target;  // w in V_{n+1}
  std::int64_t size;
  Rational fixed_fraction;  // (size mod 2) / size
};

struct HnResult {
  GroupElement element;  // at level n + 1
  std::vector<BundleReport> bundles;
  Rational max_fixed_fraction{0};
};

// Involution of G_{n+1}(A) exchanging the first and second halves of every
// edge bundle between levels n and n+1 on paths whose level-n prefix lies in
// A. A must be compatible with level n. Throws NoPairableEdges when a bundle
// reached from A carries a single edge.
HnResult make_hn(const BratteliDiagram& d, const ClopenSet& a, std::size_t n);

struct Claim1Pair {
  Permutation h0;
  Permutation h1;
  std::size_t m = 0;
};

// Two p-cycles on m points (m = 2p for even p, 2p - 2 for odd p) whose
// quotient h0 h1^{-1} has only even cycles and moves every point.
Claim1Pair claim1_pair(std::size_t p);

struct SiFamily {
  std::vector<std::size_t> cuts;  // cuts[0] = level of s, cuts[i] the level of the i-th layer
  std::size_t level = 0;          // level of every element
  std::vector<std::vector<int>> labels;
  std::vector<GroupElement> elements;
};

// The 2^r elements s * g_1^{(a_1)} * ... * g_r^{(a_r)} where g_i acts on the
// segments between cuts[i-1] and cuts[i] through blocks of Claim-1 pairs.
// Cut levels are chosen so every nonempty segment bundle exceeds 2p/eps.
// Throws BundlesTooSmall / DepthExceeded / InvalidArgument.
SiFamily si_family(const BratteliDiagram& d, const GroupElement& s, std::size_t r, const Rational& eps);

struct SiFamilyCheck {
  bool all_conjugate = true;
  bool supports_equal = true;
  bool quotients_even = true;
  Value max_defect{0};  // max over pairs and measures of mu(supp s \ supp s_a s_b^{-1})
  bool defect_below_eps = true;
};

SiFamilyCheck verify_si_family(const BratteliDiagram& d, const GroupElement& s, const SiFamily& family,
                               const Rational& eps, const std::vector<InvariantMeasure>& measures);

// max over the supplied measures of mu{x : g(x) != h(x)}.
Value metric_distance(const BratteliDiagram& d, const GroupElement& g, const GroupElement& h,
                      const std::vector<InvariantMeasure>& measures);

} // namespace bratteli
