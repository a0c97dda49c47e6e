#include "bratteli/permutation.hpp"

#include "bratteli/error.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace bratteli {

namespace perm {

Permutation identity(std::size_t n) {
  Permutation p(n);
  std::iota(p.begin(), p.end(), 0u);
  return p;
}

bool is_bijection(const Permutation& p) {
  std::vector<bool> seen(p.size());
  for (auto x : p) {
    if (x >= p.size() || seen[x])
      return false;
    seen[x] = true;
  }
  return true;
}

bool is_identity(const Permutation& p) {
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] != i)
      return false;
  return true;
}

Permutation compose(const Permutation& a, const Permutation& b) {
  if (a.size() != b.size())
    throw Error(ErrorCode::ShapeMismatch, "composing permutations of different degree");
  Permutation out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    out[i] = a[b[i]];
  return out;
}

Permutation inverse(const Permutation& p) {
  Permutation out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i)
    out[p[i]] = static_cast<std::uint32_t>(i);
  return out;
}

std::vector<std::vector<std::uint32_t>> cycles(const Permutation& p) {
  std::vector<std::vector<std::uint32_t>> out;
  std::vector<bool> seen(p.size());
  for (std::size_t start = 0; start < p.size(); ++start) {
    if (seen[start])
      continue;
    std::vector<std::uint32_t> cycle;
    for (auto x = static_cast<std::uint32_t>(start); !seen[x]; x = p[x]) {
      seen[x] = true;
      cycle.push_back(x);
    }
    out.push_back(std::move(cycle));
  }
  return out;
}

std::vector<std::size_t> cycle_type(const Permutation& p) {
  std::vector<std::size_t> type;
  for (const auto& c : cycles(p))
    type.push_back(c.size());
  std::sort(type.begin(), type.end(), std::greater<>());
  return type;
}

std::size_t fixed_points(const Permutation& p) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    n += p[i] == i;
  return n;
}

std::string cycle_string(const Permutation& p) {
  std::string out;
  for (const auto& c : cycles(p)) {
    if (c.size() < 2)
      continue;
    out += "(";
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (i)
        out += " ";
      out += std::to_string(c[i]);
    }
    out += ")";
  }
  return out.empty() ? "()" : out;
}

Permutation from_cycles(std::size_t n, const std::vector<std::vector<std::uint32_t>>& cycles) {
  Permutation p = identity(n);
  std::vector<bool> used(n);
  for (const auto& c : cycles)
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (c[i] >= n || used[c[i]])
        throw Error(ErrorCode::InvalidArgument, "cycles are not disjoint or exceed the degree");
      used[c[i]] = true;
      p[c[i]] = c[(i + 1) % c.size()];
    }
  return p;
}

} // namespace perm

bool GroupElement::is_identity() const {
  return std::all_of(perms_.begin(), perms_.end(), [](const Permutation& p) { return perm::is_identity(p); });
}

} // namespace bratteli
