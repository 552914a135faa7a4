#pragma once

// Exhaustive reference for rectangular assignment. Test-only.

#include <algorithm>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "orchard/assignment.hpp"

namespace orchard::oracle {

struct BruteForceResult {
  double best_cost = std::numeric_limits<double>::infinity();
  // Lexicographically smallest optimal pair list (row-sorted).
  std::vector<std::pair<std::size_t, std::size_t>> best_pairs;
};

/// Enumerates every matching covering min(P, Q) rows/cols.
inline BruteForceResult brute_force_assignment(const CostMatrix& costs, double tie_tol = 1e-12) {
  const std::size_t rows = costs.rows();
  const std::size_t cols = costs.cols();
  BruteForceResult out;
  const bool transpose = rows > cols;
  const std::size_t small = transpose ? cols : rows;
  const std::size_t large = transpose ? rows : cols;
  std::vector<std::size_t> pick(small);
  std::vector<char> used(large, 0);

  auto record = [&] {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    double total = 0;
    for (std::size_t i = 0; i < small; ++i) {
      const std::size_t r = transpose ? pick[i] : i;
      const std::size_t c = transpose ? i : pick[i];
      pairs.emplace_back(r, c);
      total += costs(r, c);
    }
    std::sort(pairs.begin(), pairs.end());
    if (total < out.best_cost - tie_tol) {
      out.best_cost = total;
      out.best_pairs = pairs;
    } else if (total <= out.best_cost + tie_tol && pairs < out.best_pairs) {
      out.best_cost = std::min(out.best_cost, total);
      out.best_pairs = pairs;
    }
  };

  auto recurse = [&](auto&& self, std::size_t depth) -> void {
    if (depth == small) {
      record();
      return;
    }
    for (std::size_t j = 0; j < large; ++j) {
      if (used[j]) continue;
      used[j] = 1;
      pick[depth] = j;
      self(self, depth + 1);
      used[j] = 0;
    }
  };
  recurse(recurse, 0);
  return out;
}

}  // namespace orchard::oracle
