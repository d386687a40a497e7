#pragma once

#include <cstddef>
#include <vector>

namespace captem::face {

/// Dense row-major cost matrix.
class CostMatrix {
 public:
  CostMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }

 private:
  std::size_t rows_, cols_;
  std::vector<double> data_;
};

inline constexpr int kUnassigned = -1;

/// Minimum-cost one-to-one assignment (Hungarian method with potentials,
/// O(min^2 * max)). Returns, for each row, its column or kUnassigned; exactly
/// min(rows, cols) rows are assigned.
std::vector<int> solve_assignment(const CostMatrix& cost);

/// Sum of cost over assigned rows, accumulated in row order.
double assignment_cost(const CostMatrix& cost, const std::vector<int>& row_to_col);

}  // namespace captem::face
