#pragma once

#include "bratteli/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

namespace bratteli {

// Dense row-major nonnegative integer matrix.
class IntMatrix {
public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols, std::int64_t fill = 0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  static IntMatrix from_rows(const std::vector<std::vector<std::int64_t>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::int64_t operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::int64_t& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  std::vector<std::vector<std::int64_t>> to_rows() const;

  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::int64_t> data_;
};

// a * b with overflow checks (throws Error(Overflow)).
IntMatrix multiply(const IntMatrix& a, const IntMatrix& b);

class BratteliDiagram;

struct ExplicitTail {
  friend bool operator==(const ExplicitTail&, const ExplicitTail&) = default;
};
struct StationaryTail {
  IntMatrix matrix;
  friend bool operator==(const StationaryTail&, const StationaryTail&) = default;
};
// |V_n| = n + 1, every pair of consecutive-level vertices joined by one edge.
struct BrTail {
  friend bool operator==(const BrTail&, const BrTail&) = default;
};
struct OdometerTail {
  std::int64_t base = 2;
  friend bool operator==(const OdometerTail&, const OdometerTail&) = default;
};
// Telescope of an unbounded base diagram. Level k is base level cut(k); the
// cut list is continued periodically with its last gap.
struct TelescopeTail {
  std::shared_ptr<const BratteliDiagram> base;
  std::vector<std::size_t> cuts;
  friend bool operator==(const TelescopeTail& a, const TelescopeTail& b);
};

using Tail = std::variant<ExplicitTail, StationaryTail, BrTail, OdometerTail, TelescopeTail>;

// A graded diagram given by an explicit prefix of incidence matrices plus a
// rule that generates all deeper levels. F_n is |V_{n+1}| x |V_n| and its
// (w, v) entry counts the edges from v in V_n to w in V_{n+1}.
class BratteliDiagram {
public:
  // Validates every invariant; throws Error(ShapeMismatch | ZeroRowOrColumn
  // | EmptyRootLevel | InvalidArgument).
  static BratteliDiagram build(std::vector<std::size_t> levels, std::vector<IntMatrix> incidence, Tail tail);

  static BratteliDiagram odometer(std::int64_t base);
  static BratteliDiagram br_family();
  // root -> first level given by `root_vector` (a column), then F repeated.
  static BratteliDiagram stationary(const std::vector<std::int64_t>& root_vector, const IntMatrix& f);

  // Number of represented levels beyond the root; nullopt when unbounded.
  std::optional<std::size_t> depth() const;
  bool has_level(std::size_t n) const;
  // Throws Error(DepthExceeded) past an explicit depth.
  std::size_t vertex_count(std::size_t n) const;
  IntMatrix incidence(std::size_t n) const;
  std::int64_t multiplicity(std::size_t n, std::size_t w, std::size_t v) const;

  const std::vector<std::size_t>& prefix_levels() const { return levels_; }
  const std::vector<IntMatrix>& prefix_incidence() const { return incidence_; }
  std::size_t prefix_depth() const { return incidence_.size(); }
  const Tail& tail() const { return tail_; }

  // True when the explicit prefix agrees with what the tail rule generates
  // (needed by the closed-form built-in measures).
  bool prefix_follows_tail() const;
  bool is_br() const;

  // Exact answer for stationary/odometer/BR/telescope tails: no infinite
  // path is isolated. nullopt for explicit diagrams (assumed).
  std::optional<bool> cantor_tail() const;

  friend bool operator==(const BratteliDiagram& a, const BratteliDiagram& b);

private:
  BratteliDiagram() = default;

  std::vector<std::size_t> levels_;
  std::vector<IntMatrix> incidence_;
  Tail tail_;
};

// Exact h_v^{(n)} for every v in V_n.
std::vector<Integer> path_counts(const BratteliDiagram& d, std::size_t n);

// Product F_{b-1} ... F_a (|V_b| x |V_a|); identity when a == b.
IntMatrix incidence_product(const BratteliDiagram& d, std::size_t a, std::size_t b);

// cuts must start at 0 and increase strictly. For unbounded diagrams the cut
// list is continued periodically with its last gap.
BratteliDiagram telescope(const BratteliDiagram& d, const std::vector<std::size_t>& cuts);

// i-th entry of the (periodically continued) cut list.
std::size_t cut_level(const std::vector<std::size_t>& cuts, std::size_t k);

struct SimpleWitness {
  std::size_t from;
  std::size_t to;
};

struct SimplicityReport {
  enum class Verdict { Simple, Unknown, NotSimple };
  Verdict verdict = Verdict::Unknown;
  std::vector<SimpleWitness> witnesses;  // Simple: one (n, m) per checked n
  std::size_t bound = 0;
  std::optional<std::size_t> failed_level;  // Unknown/NotSimple: first n without a witness
};

SimplicityReport is_simple(const BratteliDiagram& d, std::size_t search_bound);

struct EvenTelescoping {
  bool found = false;
  std::vector<std::size_t> cuts;
  std::size_t bound = 0;
};

EvenTelescoping find_even_telescoping(const BratteliDiagram& d, std::size_t search_bound);

struct Edge {
  std::size_t source = 0;  // vertex at level k-1
  std::size_t target = 0;  // vertex at level k
  std::int64_t index = 0;  // position inside the (source, target) bundle
  friend bool operator==(const Edge&, const Edge&) = default;
};
using Path = std::vector<Edge>;

inline constexpr std::size_t kMaxPathsPerLevel = std::size_t{1} << 24;

// Canonical enumeration of the finite paths from the root down to a level.
// Paths ending at v are ordered lexicographically by (source vertex of the
// last edge, index of the prefix path, edge index inside the bundle), so the
// paths entering v from w form one contiguous block of size h_w * f_{v,w}.
class PathTable {
public:
  // Throws DepthExceeded, or PathSpaceTooLarge when a level holds more than
  // kMaxPathsPerLevel paths.
  PathTable(const BratteliDiagram& d, std::size_t level);

  std::size_t level() const { return counts_.size() - 1; }
  std::size_t vertex_count(std::size_t k) const { return counts_[k].size(); }
  std::size_t count(std::size_t k, std::size_t v) const { return counts_[k][v]; }
  std::size_t count(std::size_t v) const { return counts_.back()[v]; }
  const std::vector<std::size_t>& counts(std::size_t k) const { return counts_[k]; }
  std::size_t total(std::size_t k) const;

  // Edges between level k-1 and k (k >= 1).
  std::int64_t multiplicity(std::size_t k, std::size_t v, std::size_t w) const { return incidence_[k - 1](v, w); }
  std::size_t block_offset(std::size_t k, std::size_t v, std::size_t w) const { return offsets_[k - 1][v][w]; }
  std::size_t child_index(std::size_t k, std::size_t v, std::size_t w, std::size_t parent, std::int64_t edge) const {
    return block_offset(k, v, w) + parent * static_cast<std::size_t>(multiplicity(k, v, w)) + static_cast<std::size_t>(edge);
  }
  struct Parent {
    std::size_t vertex;
    std::size_t index;
    std::int64_t edge;
  };
  Parent parent_of(std::size_t k, std::size_t v, std::size_t i) const;

  // Throws IndexOutOfRange.
  Path path_of_index(std::size_t v, std::size_t i) const;
  // Returns (terminal vertex, index). Throws IndexOutOfRange / InvalidArgument.
  std::pair<std::size_t, std::size_t> index_of_path(const Path& path) const;

private:
  std::vector<std::vector<std::size_t>> counts_;
  std::vector<IntMatrix> incidence_;
  std::vector<std::vector<std::vector<std::size_t>>> offsets_;
};

Path path_of_index(const BratteliDiagram& d, std::size_t n, std::size_t v, std::size_t i);
std::pair<std::size_t, std::size_t> index_of_path(const BratteliDiagram& d, std::size_t n, const Path& path);

// Paths between two levels a < b split as (level-a prefix, segment). The
// segments from u in V_a to v in V_b are ordered canonically as paths of the
// diagram re-rooted at u.
class SegmentTable {
public:
  struct Coord {
    std::size_t source;   // u in V_a
    std::size_t prefix;   // index of the level-a prefix in M_a^{(u)}
    std::size_t segment;  // index in the segment set C_{u,v}
  };

  SegmentTable(const BratteliDiagram& d, std::size_t a, std::size_t b);

  std::size_t from() const { return from_; }
  std::size_t to() const { return to_; }
  const PathTable& paths() const { return table_; }
  const Coord& coord(std::size_t v, std::size_t i) const { return coords_[v][i]; }
  std::size_t segment_count(std::size_t v, std::size_t u) const { return segments_[v][u]; }
  std::size_t index_of(std::size_t v, const Coord& c) const;

private:
  std::size_t from_;
  std::size_t to_;
  PathTable table_;
  std::vector<std::vector<Coord>> coords_;
  std::vector<std::vector<std::size_t>> segments_;
  std::vector<std::vector<std::vector<std::size_t>>> inverse_;  // [v][u][prefix * c + seg]
};

} // namespace bratteli
