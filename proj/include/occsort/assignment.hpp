// assignment.hpp: optimal bipartite assignment on similarity matrices and
// the two-step confirmation used for re-identification and target creation.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

namespace occsort {

/// Dense row-major similarity matrix. Larger values are better matches.
class ScoreMatrix {
 public:
  ScoreMatrix() = default;
  ScoreMatrix(int rows, int cols) : rows_(rows), cols_(cols), values_(checked_size(rows, cols)) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  double& operator()(int r, int c) { return values_[static_cast<std::size_t>(r) * cols_ + c]; }
  double operator()(int r, int c) const { return values_[static_cast<std::size_t>(r) * cols_ + c]; }

 private:
  static std::size_t checked_size(int rows, int cols) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("ScoreMatrix: negative dimension");
    return static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> values_;
};

/// Result of a bipartite assignment. matches together with the unmatched
/// lists partition both index sets; every index appears exactly once.
struct Assignment {
  std::vector<std::pair<int, int>> matches;  // (row, col), ascending by row
  std::vector<int> unmatched_rows;
  std::vector<int> unmatched_cols;
};

/// One confirmed two-step match: `row` matched `primary_col` in the primary
/// problem and `support_col` in the support problem.
struct TwoStepMatch {
  int row = 0;
  int primary_col = 0;
  int support_col = 0;
};

namespace detail {

inline void check_scores(const ScoreMatrix& m) {
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = 0; c < m.cols(); ++c) {
      const double v = m(r, c);
      if (!std::isfinite(v) || v < 0.0) {
        throw std::invalid_argument("ScoreMatrix: values must be finite and >= 0");
      }
    }
  }
}

// Shortest augmenting path solver for the square min-cost assignment
// problem (Jonker-Volgenant potentials, 1-indexed internally). Rows are
// introduced in ascending order and column scans break ties toward lower
// indices, which keeps the result deterministic.
inline std::vector<int> solve_square_min_cost(const std::vector<std::vector<double>>& cost) {
  const int n = static_cast<int>(cost.size());
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> match_of_col(n + 1, 0);  // p[j]: row matched to col j
  std::vector<int> way(n + 1, 0);

  for (int i = 1; i <= n; ++i) {
    match_of_col[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, kInf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = match_of_col[j0];
      int j1 = 0;
      double delta = kInf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match_of_col[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match_of_col[j0] != 0);
    do {
      const int j1 = way[j0];
      match_of_col[j0] = match_of_col[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> col_of_row(n, -1);
  for (int j = 1; j <= n; ++j) {
    if (match_of_col[j] != 0) col_of_row[match_of_col[j] - 1] = j - 1;
  }
  return col_of_row;
}

}  // namespace detail

/// Maximum-total-score assignment of min(rows, cols) pairs. Rectangular
/// matrices are padded internally; padding never displaces a real pair.
/// Deterministic under ties (lowest row index, then lowest col index wins).
inline Assignment hungarian_max(const ScoreMatrix& m) {
  detail::check_scores(m);
  Assignment out;
  if (m.empty()) {
    for (int r = 0; r < m.rows(); ++r) out.unmatched_rows.push_back(r);
    for (int c = 0; c < m.cols(); ++c) out.unmatched_cols.push_back(c);
    return out;
  }

  const int n = std::max(m.rows(), m.cols());
  std::vector<std::vector<double>> cost(n, std::vector<double>(n, 0.0));
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = 0; c < m.cols(); ++c) cost[r][c] = -m(r, c);
  }

  const std::vector<int> col_of_row = detail::solve_square_min_cost(cost);

  std::vector<char> row_used(m.rows(), 0), col_used(m.cols(), 0);
  for (int r = 0; r < m.rows(); ++r) {
    const int c = col_of_row[r];
    if (c >= 0 && c < m.cols()) {
      out.matches.emplace_back(r, c);
      row_used[r] = 1;
      col_used[c] = 1;
    }
  }
  for (int r = 0; r < m.rows(); ++r) {
    if (!row_used[r]) out.unmatched_rows.push_back(r);
  }
  for (int c = 0; c < m.cols(); ++c) {
    if (!col_used[c]) out.unmatched_cols.push_back(c);
  }
  return out;
}

/// hungarian_max with every match scoring below `min_score` demoted to
/// unmatched on both sides.
inline Assignment gated_assign(const ScoreMatrix& m, double min_score) {
  Assignment raw = hungarian_max(m);
  Assignment out;
  for (const auto& [r, c] : raw.matches) {
    if (m(r, c) < min_score) {
      raw.unmatched_rows.push_back(r);
      raw.unmatched_cols.push_back(c);
    } else {
      out.matches.emplace_back(r, c);
    }
  }
  out.unmatched_rows = std::move(raw.unmatched_rows);
  out.unmatched_cols = std::move(raw.unmatched_cols);
  std::sort(out.unmatched_rows.begin(), out.unmatched_rows.end());
  std::sort(out.unmatched_cols.begin(), out.unmatched_cols.end());
  return out;
}

/// Runs a gated assignment on each matrix independently. A (row, col) match
/// from the primary matrix is confirmed only when the same row also obtained
/// a match in the support matrix; the supporting column is reported so that
/// callers can recover full chains.
inline std::vector<TwoStepMatch> two_step_match(const ScoreMatrix& primary,
                                                const ScoreMatrix& support, double gate) {
  if (primary.rows() != support.rows()) {
    throw std::invalid_argument("two_step_match: shared dimension mismatch");
  }
  const Assignment prim = gated_assign(primary, gate);
  const Assignment sup = gated_assign(support, gate);

  std::vector<int> support_col(primary.rows(), -1);
  for (const auto& [r, c] : sup.matches) support_col[r] = c;

  std::vector<TwoStepMatch> confirmed;
  for (const auto& [r, c] : prim.matches) {
    if (support_col[r] >= 0) confirmed.push_back({r, c, support_col[r]});
  }
  return confirmed;
}

}  // namespace occsort
