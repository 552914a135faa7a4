#include "orchard/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "orchard/errors.hpp"

namespace orchard {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::ptrdiff_t kNone = -1;

struct SquareProblem {
  std::size_t n;
  std::vector<double> cost;  // n x n, zero outside the real block
  double at(std::size_t r, std::size_t c) const { return cost[r * n + c]; }
};

struct Solution {
  std::vector<std::ptrdiff_t> col4row;
  std::vector<std::ptrdiff_t> row4col;
  std::vector<double> u;
  std::vector<double> v;
};

// Shortest augmenting path, one row at a time, with dual updates after each
// augmentation. Reduced costs c - u - v stay nonnegative and vanish on
// matched pairs.
Solution shortest_augmenting_path(const SquareProblem& prob) {
  const std::size_t n = prob.n;
  Solution sol{std::vector<std::ptrdiff_t>(n, kNone), std::vector<std::ptrdiff_t>(n, kNone),
               std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  std::vector<double> shortest(n);
  std::vector<std::ptrdiff_t> path(n);
  std::vector<std::size_t> remaining(n);
  std::vector<char> scanned_rows(n);
  std::vector<char> scanned_cols(n);

  for (std::size_t cur = 0; cur < n; ++cur) {
    std::fill(shortest.begin(), shortest.end(), kInf);
    std::fill(path.begin(), path.end(), kNone);
    std::fill(scanned_rows.begin(), scanned_rows.end(), 0);
    std::fill(scanned_cols.begin(), scanned_cols.end(), 0);
    // Reverse order so that ties prefer low column indices when popped.
    for (std::size_t j = 0; j < n; ++j) remaining[j] = n - 1 - j;
    std::size_t num_remaining = n;

    double min_val = 0;
    std::size_t i = cur;
    std::ptrdiff_t sink = kNone;
    while (sink == kNone) {
      scanned_rows[i] = 1;
      std::size_t index_lowest = 0;
      double lowest = kInf;
      bool found = false;
      for (std::size_t it = 0; it < num_remaining; ++it) {
        const std::size_t j = remaining[it];
        const double r = min_val + prob.at(i, j) - sol.u[i] - sol.v[j];
        if (r < shortest[j]) {
          path[j] = static_cast<std::ptrdiff_t>(i);
          shortest[j] = r;
        }
        if (!found || shortest[j] < lowest ||
            (shortest[j] == lowest && sol.row4col[j] == kNone)) {
          lowest = shortest[j];
          index_lowest = it;
          found = true;
        }
      }
      min_val = lowest;
      const std::size_t j = remaining[index_lowest];
      if (sol.row4col[j] == kNone) {
        sink = static_cast<std::ptrdiff_t>(j);
      } else {
        i = static_cast<std::size_t>(sol.row4col[j]);
      }
      scanned_cols[j] = 1;
      remaining[index_lowest] = remaining[--num_remaining];
    }

    sol.u[cur] += min_val;
    for (std::size_t r = 0; r < n; ++r) {
      if (scanned_rows[r] && r != cur) {
        sol.u[r] += min_val - shortest[static_cast<std::size_t>(sol.col4row[r])];
      }
    }
    for (std::size_t c = 0; c < n; ++c) {
      if (scanned_cols[c]) sol.v[c] -= min_val - shortest[c];
    }

    std::ptrdiff_t j = sink;
    while (true) {
      const std::ptrdiff_t r = path[static_cast<std::size_t>(j)];
      sol.row4col[static_cast<std::size_t>(j)] = r;
      std::swap(sol.col4row[static_cast<std::size_t>(r)], j);
      if (static_cast<std::size_t>(r) == cur) break;
    }
  }
  return sol;
}

// Among all optimal matchings (perfect matchings of the tight subgraph),
// moves to the lexicographically smallest one over the first `real_rows`
// rows, preferring real columns (index < real_cols) in ascending order.
void lexicographic_canonicalize(const SquareProblem& prob, std::size_t real_rows,
                                std::size_t real_cols, Solution& sol) {
  const std::size_t n = prob.n;
  double scale = 1.0;
  for (double c : prob.cost) scale = std::max(scale, std::abs(c));
  const double tol = 1e-10 * scale;
  auto tight = [&](std::size_t r, std::size_t c) {
    return prob.at(r, c) - sol.u[r] - sol.v[c] <= tol;
  };

  std::vector<char> fixed_row(n, 0);
  std::vector<std::ptrdiff_t> col_parent(n);
  std::vector<char> visited_col(n);
  std::vector<std::size_t> queue;

  for (std::size_t r = 0; r < real_rows; ++r) {
    const auto current = static_cast<std::size_t>(sol.col4row[r]);
    const std::size_t limit = current < real_cols ? current : real_cols;
    for (std::size_t c = 0; c < limit; ++c) {
      if (!tight(r, c)) continue;
      const auto displaced = static_cast<std::size_t>(sol.row4col[c]);
      if (fixed_row[displaced]) continue;
      // Search an alternating path that rematches `displaced` and ends by
      // freeing column `current`, using tight edges of unfixed rows only.
      std::fill(visited_col.begin(), visited_col.end(), 0);
      std::fill(col_parent.begin(), col_parent.end(), kNone);
      visited_col[c] = 1;
      queue.assign(1, displaced);
      std::ptrdiff_t reached = kNone;
      std::vector<std::ptrdiff_t> row_from(n, kNone);  // column through which a row was reached
      for (std::size_t qi = 0; qi < queue.size() && reached == kNone; ++qi) {
        const std::size_t row = queue[qi];
        for (std::size_t col = 0; col < n; ++col) {
          if (visited_col[col] || !tight(row, col)) continue;
          visited_col[col] = 1;
          col_parent[col] = static_cast<std::ptrdiff_t>(row);
          if (col == current) {
            reached = static_cast<std::ptrdiff_t>(col);
            break;
          }
          const auto owner = static_cast<std::size_t>(sol.row4col[col]);
          if (fixed_row[owner] || owner == r) continue;
          row_from[owner] = static_cast<std::ptrdiff_t>(col);
          queue.push_back(owner);
        }
      }
      if (reached == kNone) continue;
      // Flip the path: each row on it takes the column that reached it.
      auto col = static_cast<std::size_t>(reached);
      while (true) {
        const auto row = static_cast<std::size_t>(col_parent[col]);
        const std::ptrdiff_t prev = row_from[row];
        sol.col4row[row] = static_cast<std::ptrdiff_t>(col);
        sol.row4col[col] = static_cast<std::ptrdiff_t>(row);
        if (row == displaced) break;
        col = static_cast<std::size_t>(prev);
      }
      sol.col4row[r] = static_cast<std::ptrdiff_t>(c);
      sol.row4col[c] = static_cast<std::ptrdiff_t>(r);
      break;
    }
    fixed_row[r] = 1;
  }
}

}  // namespace

double Assignment::total_cost(const CostMatrix& costs) const {
  double total = 0;
  for (const auto& [r, c] : pairs) total += costs(r, c);
  return total;
}

Assignment solve_assignment(const CostMatrix& costs) {
  for (double c : costs.data()) {
    if (!std::isfinite(c)) throw NonFiniteCost("cost matrix contains NaN or infinity");
  }
  const std::size_t rows = costs.rows();
  const std::size_t cols = costs.cols();
  if (rows == 0 || cols == 0) return {};

  SquareProblem prob{std::max(rows, cols), {}};
  prob.cost.assign(prob.n * prob.n, 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) prob.cost[r * prob.n + c] = costs(r, c);
  }

  Solution sol = shortest_augmenting_path(prob);
  lexicographic_canonicalize(prob, rows, cols, sol);

  Assignment out;
  for (std::size_t r = 0; r < rows; ++r) {
    const auto c = static_cast<std::size_t>(sol.col4row[r]);
    if (c < cols) out.pairs.emplace_back(r, c);
  }
  return out;
}

Assignment associate_boxes(std::span<const BoundingBox> a, std::span<const BoundingBox> b,
                           double min_iou) {
  if (a.empty() || b.empty()) return {};
  CostMatrix costs(a.size(), b.size());
  CostMatrix overlaps(a.size(), b.size());
  for (std::size_t p = 0; p < a.size(); ++p) {
    for (std::size_t q = 0; q < b.size(); ++q) {
      overlaps(p, q) = iou(a[p], b[q]);
      costs(p, q) = 1.0 - overlaps(p, q);
    }
  }
  Assignment solved = solve_assignment(costs);
  std::erase_if(solved.pairs, [&](const auto& pq) { return overlaps(pq.first, pq.second) <= min_iou; });
  return solved;
}

}  // namespace orchard
