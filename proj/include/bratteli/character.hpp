#pragma once

#include "bratteli/clopen.hpp"
#include "bratteli/diagram.hpp"
#include "bratteli/group.hpp"
#include "bratteli/measure.hpp"

#include <optional>
#include <string>
#include <vector>

namespace bratteli {

// An element of {0, 1, 2, ...} together with infinity.
struct Exponent {
  bool infinite = false;
  unsigned value = 0;

  static Exponent finite(unsigned k) { return {false, k}; }
  static Exponent inf() { return {true, 0}; }
  std::string str() const { return infinite ? "inf" : std::to_string(value); }
  friend bool operator==(const Exponent&, const Exponent&) = default;
};

struct CharacterTerm {
  InvariantMeasure measure;
  Exponent alpha;
};

// chi(g) = prod_i mu_i(Fix g)^{alpha_i}; any infinite exponent makes chi the
// regular character.
struct CharacterSpec {
  std::vector<CharacterTerm> terms;

  bool regular() const;
};

// prod_i t_i^{alpha_i} with 0^0 = 1, for a non-regular spec.
Value phi(const CharacterSpec& spec, const std::vector<Value>& t);

Value eval_character(const BratteliDiagram& d, const CharacterSpec& spec, const GroupElement& g);

// prod_i mu_i(X \ A)^{alpha_i}; the regular character gives 1 for A empty and 0 otherwise.
Value trace_projection(const BratteliDiagram& d, const CharacterSpec& spec, const ClopenSet& a);

using ValueMatrix = std::vector<std::vector<Value>>;

// M_ij = chi(g_i g_j^{-1}).
ValueMatrix gram_matrix(const BratteliDiagram& d, const CharacterSpec& spec, const std::vector<GroupElement>& elements);

struct CentralityReport {
  std::size_t pairs_checked = 0;
  // Pairs (i, j) with chi(g_i g_j) != chi(g_j g_i).
  std::vector<std::pair<std::size_t, std::size_t>> violations;
};

CentralityReport centrality_check(const BratteliDiagram& d, const CharacterSpec& spec,
                                  const std::vector<GroupElement>& elements);

struct PsdResult {
  bool psd = true;
  bool exact = true;
  // Only for NotPSD: x with x^T M x < 0 (integer entries on the exact path).
  std::vector<Rational> witness;
  Rational witness_value{0};
  std::optional<double> min_eigenvalue;  // numeric path only
};

// Exact for rational matrices (Schur-complement recursion); interval entries
// go through a numeric eigenvalue check whose tolerance is widened by the
// interval widths. Throws NotSymmetric / ToleranceAmbiguous.
PsdResult psd_check(const ValueMatrix& m, double tolerance = 1e-12);
PsdResult psd_check_exact(const std::vector<std::vector<Rational>>& m);

struct MultiplicativityStep {
  std::size_t n = 0;
  std::size_t level = 0;  // level of h_n
  std::vector<Value> achieved;  // mu_i(B_n)
  Value chi_product;   // chi(g h_n)
  Value predicted;     // chi(g) prod c_i^{alpha_i}
  Value defect;
};

// For each n, a G_n-invariant set B_n of suffix cylinders with mu_i(B_n)
// within `tolerance` of c_i and an element h_n preserving level-n cylinders
// with Fix(h_n) = B_n. Throws UnreachableTarget / InvalidArgument.
std::vector<MultiplicativityStep> multiplicativity_harness(const BratteliDiagram& d, const CharacterSpec& spec,
                                                           const GroupElement& g, const std::vector<Rational>& targets,
                                                           std::size_t n_from, std::size_t n_to,
                                                           const Rational& tolerance = Rational(0));

struct ProjectionStep {
  std::size_t n = 0;
  Value chi_hn;
  Value trace;
  Value defect;
  Rational max_fixed_fraction{0};
  Value bound;  // defect ceiling implied by the per-bundle fixed fractions
  bool within_bound = true;
};

std::vector<ProjectionStep> projection_limit_check(const BratteliDiagram& d, const CharacterSpec& spec,
                                                   const ClopenSet& a, std::size_t n_from, std::size_t n_to);

} // namespace bratteli
