#pragma once

#include "bratteli/diagram.hpp"
#include "bratteli/permutation.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace bratteli {

// Union of level-n cylinders, stored as one membership mask per vertex of V_n.
class ClopenSet {
public:
  ClopenSet() = default;
  ClopenSet(std::size_t level, std::vector<std::vector<bool>> members)
      : level_(level), members_(std::move(members)) {}

  static ClopenSet empty(const BratteliDiagram& d, std::size_t level);
  static ClopenSet full(const BratteliDiagram& d, std::size_t level);
  // Throws IndexOutOfRange.
  static ClopenSet cylinder(const BratteliDiagram& d, std::size_t level, std::size_t vertex, std::size_t index);
  static ClopenSet from_indices(const BratteliDiagram& d, std::size_t level,
                                const std::vector<std::vector<std::size_t>>& indices);

  std::size_t level() const { return level_; }
  std::size_t vertex_count() const { return members_.size(); }
  const std::vector<bool>& members(std::size_t v) const { return members_[v]; }
  bool contains(std::size_t v, std::size_t i) const { return members_[v][i]; }
  std::size_t count(std::size_t v) const;
  std::vector<std::size_t> indices(std::size_t v) const;
  bool is_empty() const;
  bool is_full() const;

  // Representation equality (same level, same masks).
  friend bool operator==(const ClopenSet&, const ClopenSet&) = default;

private:
  std::size_t level_ = 0;
  std::vector<std::vector<bool>> members_;
};

ClopenSet refine(const BratteliDiagram& d, const ClopenSet& a, std::size_t m);

enum class BooleanOp { Union, Intersect, Minus, Complement };

// Operands are refined to the larger level first; `b` is ignored for Complement.
ClopenSet boolean(const BratteliDiagram& d, BooleanOp op, const ClopenSet& a, const ClopenSet* b = nullptr);
ClopenSet set_union(const BratteliDiagram& d, const ClopenSet& a, const ClopenSet& b);
ClopenSet intersect(const BratteliDiagram& d, const ClopenSet& a, const ClopenSet& b);
ClopenSet minus(const BratteliDiagram& d, const ClopenSet& a, const ClopenSet& b);
ClopenSet complement(const BratteliDiagram& d, const ClopenSet& a);

// Same subset of the path space.
bool same_set(const BratteliDiagram& d, const ClopenSet& a, const ClopenSet& b);

// Membership depends only on the level-n terminal vertex and the edges
// below level n. Sets coarser than level n are refined first.
bool is_Gn_invariant(const BratteliDiagram& d, const ClopenSet& a, std::size_t n);

struct Halving {
  std::size_t level = 0;
  ClopenSet first;
  ClopenSet second;
  GroupElement involution;  // swaps first and second, identity off the set
};

// Splits a nonempty set into two halves exchanged by an involution, at the
// first level <= search_bound where every vertex sees an even number of paths
// inside the set. nullopt when no such level exists up to the bound.
std::optional<Halving> can_halve(const BratteliDiagram& d, const ClopenSet& a, std::size_t search_bound);

} // namespace bratteli
