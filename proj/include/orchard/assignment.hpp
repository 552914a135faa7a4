#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "orchard/geometry.hpp"

namespace orchard {

/// Dense row-major P x Q cost matrix.
class CostMatrix {
 public:
  CostMatrix() = default;
  CostMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::span<const double> data() const { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct Assignment {
  /// (row, col) pairs sorted by row; rows and cols each appear at most once.
  std::vector<std::pair<std::size_t, std::size_t>> pairs;

  double total_cost(const CostMatrix& costs) const;
  bool empty() const { return pairs.empty(); }
  std::size_t size() const { return pairs.size(); }
  friend bool operator==(const Assignment&, const Assignment&) = default;
};

/// Minimum-cost one-to-one matching covering min(P, Q) rows/columns.
///
/// Shortest augmenting path (Jonker-Volgenant family) without the
/// initialization phase. Unbalanced problems are padded to square with
/// zero-cost dummies. Among equal-cost optima the lexicographically smallest
/// pair list is returned. Throws NonFiniteCost on NaN or infinite entries.
Assignment solve_assignment(const CostMatrix& costs);

/// Matches boxes in `a` to boxes in `b` with cost 1 - IoU and drops every
/// resulting pair whose IoU is not strictly above `min_iou` (default: drop
/// only zero-overlap pairs).
Assignment associate_boxes(std::span<const BoundingBox> a, std::span<const BoundingBox> b,
                           double min_iou = 0.0);

}  // namespace orchard
