#include "face/hungarian.hpp"

#include <limits>

namespace captem::face {

namespace {

// Requires n <= m. a(i, j) is the cost of row i (1-based) to column j (1-based).
template <typename Cost>
std::vector<int> hungarian(std::size_t n, std::size_t m, Cost a) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0), minv(m + 1);
  std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);
  std::vector<bool> used(m + 1);

  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::fill(used.begin(), used.end(), false);
    do {
      used[j0] = true;
      const std::size_t i0 = p[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = a(i0, j) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> row_to_col(n, kUnassigned);
  for (std::size_t j = 1; j <= m; ++j) {
    if (p[j] != 0) row_to_col[p[j] - 1] = static_cast<int>(j - 1);
  }
  return row_to_col;
}

}  // namespace

std::vector<int> solve_assignment(const CostMatrix& cost) {
  const std::size_t r = cost.rows();
  const std::size_t c = cost.cols();
  if (r == 0 || c == 0) return std::vector<int>(r, kUnassigned);

  if (r <= c) {
    return hungarian(r, c, [&](std::size_t i, std::size_t j) { return cost(i - 1, j - 1); });
  }
  const auto col_to_row =
      hungarian(c, r, [&](std::size_t i, std::size_t j) { return cost(j - 1, i - 1); });
  std::vector<int> row_to_col(r, kUnassigned);
  for (std::size_t j = 0; j < c; ++j) {
    row_to_col[static_cast<std::size_t>(col_to_row[j])] = static_cast<int>(j);
  }
  return row_to_col;
}

double assignment_cost(const CostMatrix& cost, const std::vector<int>& row_to_col) {
  double total = 0.0;
  for (std::size_t i = 0; i < row_to_col.size(); ++i) {
    if (row_to_col[i] != kUnassigned) total += cost(i, static_cast<std::size_t>(row_to_col[i]));
  }
  return total;
}

}  // namespace captem::face
