#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace bratteli {

using Permutation = std::vector<std::uint32_t>;

namespace perm {

Permutation identity(std::size_t n);
bool is_bijection(const Permutation& p);
bool is_identity(const Permutation& p);
// (a * b)(x) = a(b(x)).
Permutation compose(const Permutation& a, const Permutation& b);
Permutation inverse(const Permutation& p);
std::vector<std::vector<std::uint32_t>> cycles(const Permutation& p);
// Sorted descending.
std::vector<std::size_t> cycle_type(const Permutation& p);
std::size_t fixed_points(const Permutation& p);
// "(0 1)(2 3)" without fixed points, "()" for the identity.
std::string cycle_string(const Permutation& p);
// Builds a permutation of {0..n-1} from disjoint cycles.
Permutation from_cycles(std::size_t n, const std::vector<std::vector<std::uint32_t>>& cycles);

} // namespace perm

// An element of G_n = prod_v S(M_n^{(v)}): one permutation of path indices per
// level-n vertex.
class GroupElement {
public:
  GroupElement() = default;
  GroupElement(std::size_t level, std::vector<Permutation> perms) : level_(level), perms_(std::move(perms)) {}

  std::size_t level() const { return level_; }
  std::size_t vertex_count() const { return perms_.size(); }
  const Permutation& perm(std::size_t v) const { return perms_[v]; }
  const std::vector<Permutation>& perms() const { return perms_; }
  bool is_identity() const;

  // Representation equality; use same_element() to compare across levels.
  friend bool operator==(const GroupElement&, const GroupElement&) = default;

private:
  std::size_t level_ = 0;
  std::vector<Permutation> perms_;
};

} // namespace bratteli
