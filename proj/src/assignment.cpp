#include "topiceval/assignment.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace topiceval {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Shortest-augmenting-path Hungarian over an n x m matrix with n <= m.
// Returns the optimal total cost of matching every row.
double hungarian_cost(const Eigen::Ref<const Eigen::MatrixXd>& a) {
  int n = static_cast<int>(a.rows());
  int m = static_cast<int>(a.cols());
  std::vector<double> u(static_cast<size_t>(n) + 1, 0.0);
  std::vector<double> v(static_cast<size_t>(m) + 1, 0.0);
  std::vector<int> match(static_cast<size_t>(m) + 1, 0);  // col -> row, 1-based
  std::vector<int> way(static_cast<size_t>(m) + 1, 0);
  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<double> minv(static_cast<size_t>(m) + 1, kInf);
    std::vector<char> used(static_cast<size_t>(m) + 1, 0);
    do {
      used[static_cast<size_t>(j0)] = 1;
      int i0 = match[static_cast<size_t>(j0)];
      int j1 = -1;
      double delta = kInf;
      for (int j = 1; j <= m; ++j) {
        if (used[static_cast<size_t>(j)]) continue;
        double cur = a(i0 - 1, j - 1) - u[static_cast<size_t>(i0)] - v[static_cast<size_t>(j)];
        if (cur < minv[static_cast<size_t>(j)]) {
          minv[static_cast<size_t>(j)] = cur;
          way[static_cast<size_t>(j)] = j0;
        }
        if (minv[static_cast<size_t>(j)] < delta) {
          delta = minv[static_cast<size_t>(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[static_cast<size_t>(j)]) {
          u[static_cast<size_t>(match[static_cast<size_t>(j)])] += delta;
          v[static_cast<size_t>(j)] -= delta;
        } else {
          minv[static_cast<size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (match[static_cast<size_t>(j0)] != 0);
    do {
      int j1 = way[static_cast<size_t>(j0)];
      match[static_cast<size_t>(j0)] = match[static_cast<size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }
  double total = 0.0;
  for (int j = 1; j <= m; ++j)
    if (match[static_cast<size_t>(j)] != 0) total += a(match[static_cast<size_t>(j)] - 1, j - 1);
  return total;
}

// Cost of matching min(rows, cols) pairs; orients the matrix so rows <= cols.
double core_cost(const Eigen::MatrixXd& c) {
  if (c.rows() == 0 || c.cols() == 0) return 0.0;
  if (c.rows() <= c.cols()) return hungarian_cost(c);
  Eigen::MatrixXd t = c.transpose();
  return hungarian_cost(t);
}

Eigen::MatrixXd submatrix(const Eigen::Ref<const Eigen::MatrixXd>& c, int row_begin,
                          const std::vector<int>& cols) {
  Eigen::MatrixXd sub(c.rows() - row_begin, static_cast<long>(cols.size()));
  for (long i = row_begin; i < c.rows(); ++i)
    for (size_t j = 0; j < cols.size(); ++j) sub(i - row_begin, static_cast<long>(j)) = c(i, cols[j]);
  return sub;
}

}  // namespace

AssignmentResult solve_assignment(const Eigen::Ref<const Eigen::MatrixXd>& cost) {
  long n = cost.rows();
  long m = cost.cols();
  if (n == 0 || m == 0) throw std::invalid_argument("solve_assignment: empty cost matrix");
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < m; ++j)
      if (!std::isfinite(cost(i, j)))
        throw std::invalid_argument("solve_assignment: non-finite cost entry");

  const double optimum = core_cost(cost);
  const double tol = 1e-9;
  const size_t required = static_cast<size_t>(std::min(n, m));

  // Fix matches greedily in lexicographic order; a pair is kept when some
  // optimal completion (using only later rows) contains it.
  AssignmentResult result;
  std::vector<int> free_cols;
  for (long j = 0; j < m; ++j) free_cols.push_back(static_cast<int>(j));
  double fixed_cost = 0.0;

  for (long i = 0; i < n && result.matches.size() < required; ++i) {
    size_t remaining = required - result.matches.size();
    for (size_t cj = 0; cj < free_cols.size(); ++cj) {
      int j = free_cols[cj];
      std::vector<int> rest = free_cols;
      rest.erase(rest.begin() + static_cast<long>(cj));
      double completion = 0.0;
      if (remaining > 1) completion = core_cost(submatrix(cost, static_cast<int>(i) + 1, rest));
      double candidate = fixed_cost + cost(i, j) + completion;
      if (std::abs(candidate - optimum) <= tol) {
        result.matches.emplace_back(static_cast<int>(i), j);
        fixed_cost += cost(i, j);
        free_cols = std::move(rest);
        break;
      }
    }
  }

  if (result.matches.size() != required)
    throw std::logic_error("solve_assignment: failed to reconstruct an optimal matching");
  result.cost = 0.0;
  for (const auto& [i, j] : result.matches) result.cost += cost(i, j);
  return result;
}

}  // namespace topiceval
