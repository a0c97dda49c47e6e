#pragma once

#include "bratteli/clopen.hpp"
#include "bratteli/diagram.hpp"
#include "bratteli/rational.hpp"

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace bratteli {

// Cylinder weights q_v^{(n)} of a G-invariant probability measure. Every
// cylinder ending at v in V_n has measure q_v^{(n)}.
class InvariantMeasure {
public:
  struct Odometer {
    std::int64_t base;
  };
  struct Br {};
  // Certificate table for levels 0..depth, optionally continued by
  // q^{(n+1)} = ratio * q^{(n)} (stationary incidence beyond the table).
  struct Table {
    std::vector<std::vector<Value>> weights;
    std::optional<Rational> geometric_ratio;
  };
  // Exact Perron data: levels 0..k tabulated, q^{(n)} = q^{(k)} / lambda^{n-k} beyond.
  struct StationaryExact {
    std::vector<std::vector<Rational>> prefix;
    Integer lambda;
  };
  // Certified enclosure q_v^{(n)} in [min_w, max_w] f^{(n,n+L)}_{v,w} / h_w^{(n+L)};
  // valid for uniquely ergodic diagrams.
  struct Hull {
    std::shared_ptr<const BratteliDiagram> diagram;
    std::size_t lookahead;
  };
  // Restriction of a measure to the cut levels of a telescope.
  struct Telescoped {
    std::shared_ptr<const InvariantMeasure> base;
    std::vector<std::size_t> cuts;
  };
  using Rule = std::variant<Odometer, Br, Table, StationaryExact, Hull, Telescoped>;

  explicit InvariantMeasure(Rule rule) : rule_(std::move(rule)) {}

  const Rule& rule() const { return rule_; }
  // Throws DepthExceeded for table measures without a tail.
  Value weight(std::size_t level, std::size_t vertex) const;
  std::vector<Value> weights(std::size_t level) const;
  // Last tabulated level for tail-less tables; nullopt when unbounded.
  std::optional<std::size_t> depth() const;
  bool exact() const;
  std::string describe() const;

private:
  Rule rule_;
};

// Accepts the table iff consistency q_v^{(n)} = sum_w f_{w,v} q_w^{(n+1)} and
// normalization sum_v h_v q_v = 1 hold at every level up to `depth` (exactly
// for rationals, as overlapping enclosures for intervals). Throws
// ConsistencyViolation / NotNormalized / ShapeMismatch / DepthExceeded.
InvariantMeasure validate_certificate(const BratteliDiagram& d, std::vector<std::vector<Value>> table,
                                      std::size_t depth, std::optional<Rational> geometric_ratio = std::nullopt);

// Tabulates any measure on levels 0..depth (for re-validation or export).
std::vector<std::vector<Value>> weight_table(const InvariantMeasure& mu, std::size_t depth);

// Odometer: b^{-n}; BR: 1/(n+1)!; primitive stationary: Perron data (exact
// when the Perron root is an integer, certified interval otherwise);
// telescopes inherit the base measure. Throws NotPrimitive / InvalidArgument.
InvariantMeasure builtin_measure(const BratteliDiagram& d);

Value measure_of(const InvariantMeasure& mu, const ClopenSet& a);

// f^{(n,m)}_{v,w} / h_w^{(m)} indexed [w][v]: the level-n weights of the
// measure concentrated on the simplex vertex w of level m.
std::vector<std::vector<Rational>> limit_ratios(const BratteliDiagram& d, std::size_t n, std::size_t m);

struct HullEstimate {
  std::size_t depth = 0;
  // candidates[w][n][v]: weights of the image of level-N simplex vertex w.
  std::vector<std::vector<std::vector<Rational>>> candidates;
  // diameter[n]: max pairwise sum_v h_v |q_v - q'_v| among candidates at level n.
  std::vector<Rational> diameter;
};

HullEstimate ergodic_hull_estimate(const BratteliDiagram& d, std::size_t depth);

} // namespace bratteli
