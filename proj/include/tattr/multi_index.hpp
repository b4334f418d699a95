#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <vector>

#include "tattr/error.hpp"

namespace tattr {

/// Exponent vector kappa = (k_1, ..., k_n) identifying one partial derivative
/// or one monomial. Total order |kappa| = sum k_i.
struct MultiIndex {
  std::vector<int> exponents;

  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> k) : exponents(std::move(k)) {}

  static MultiIndex zeros(int n) { return MultiIndex(std::vector<int>(n, 0)); }

  static MultiIndex unit(int n, int var, int power = 1) {
    MultiIndex k = zeros(n);
    k.exponents[var] = power;
    return k;
  }

  int size() const { return static_cast<int>(exponents.size()); }

  int order() const { return std::accumulate(exponents.begin(), exponents.end(), 0); }

  bool is_zero() const { return order() == 0; }

  int operator[](int i) const { return exponents[i]; }
  int& operator[](int i) { return exponents[i]; }

  /// Indices of variables with nonzero exponent.
  std::vector<int> support() const {
    std::vector<int> s;
    for (int i = 0; i < size(); ++i)
      if (exponents[i] > 0) s.push_back(i);
    return s;
  }

  int support_size() const {
    int s = 0;
    for (int e : exponents) s += (e > 0);
    return s;
  }

  /// kappa! = prod k_i! as a double (orders here are small).
  double factorial() const {
    double f = 1.0;
    for (int e : exponents)
      for (int j = 2; j <= e; ++j) f *= j;
    return f;
  }

  auto operator<=>(const MultiIndex&) const = default;
};

/// List of directions (variable indices) with each variable repeated by its
/// exponent; the natural seed list for a nested-dual derivative evaluation.
inline std::vector<int> direction_list(const MultiIndex& kappa) {
  std::vector<int> dirs;
  for (int i = 0; i < kappa.size(); ++i)
    for (int r = 0; r < kappa[i]; ++r) dirs.push_back(i);
  return dirs;
}

/// Number of multi-indices over `vars` variables with order <= max_order,
/// excluding the zero index: C(vars + max_order, max_order) - 1.
inline std::uint64_t multi_index_count(int vars, int max_order) {
  std::uint64_t c = 1;
  for (int i = 1; i <= max_order; ++i) c = c * (vars + i) / i;
  return c - 1;
}

/// Enumerates all multi-indices with 1 <= |kappa| <= max_order over n
/// variables, optionally restricted to a support subset. Deterministic
/// (lexicographic) order. Throws ComplexityError past the budget: the
/// enumeration grows as O(n^k) in the order k.
inline std::vector<MultiIndex> all_multi_indices(int n, int max_order,
                                                 const std::vector<int>* support = nullptr,
                                                 std::uint64_t budget = 100000) {
  std::vector<int> vars;
  if (support != nullptr) {
    vars = *support;
  } else {
    vars.resize(n);
    std::iota(vars.begin(), vars.end(), 0);
  }
  const std::uint64_t count = multi_index_count(static_cast<int>(vars.size()), max_order);
  if (count > budget)
    throw ComplexityError("multi-index enumeration needs " + std::to_string(count) +
                          " entries (O(n^k) growth), budget is " + std::to_string(budget));

  std::vector<MultiIndex> out;
  out.reserve(count);
  MultiIndex k = MultiIndex::zeros(n);
  // Recursive lexicographic fill over the allowed variables.
  auto rec = [&](auto&& self, std::size_t vi, int remaining) -> void {
    if (vi == vars.size()) {
      if (!k.is_zero()) out.push_back(k);
      return;
    }
    for (int e = 0; e <= remaining; ++e) {
      k[vars[vi]] = e;
      self(self, vi + 1, remaining - e);
    }
    k[vars[vi]] = 0;
  };
  rec(rec, 0, max_order);
  return out;
}

}  // namespace tattr
