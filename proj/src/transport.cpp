#include "topiceval/transport.hpp"

#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>
#include <vector>

namespace topiceval {
namespace {

constexpr double kEnterTol = 1e-11;  // reduced-cost threshold for pivoting

struct Simplex {
  const Eigen::Ref<const Eigen::MatrixXd>& c;
  int n, m;
  Eigen::MatrixXd x;
  std::vector<std::vector<char>> basic;  // n x m

  Simplex(const Eigen::Ref<const Eigen::MatrixXd>& cost, int rows, int cols)
      : c(cost), n(rows), m(cols), x(Eigen::MatrixXd::Zero(rows, cols)),
        basic(static_cast<size_t>(rows), std::vector<char>(static_cast<size_t>(cols), 0)) {}

  // Northwest-corner start: exactly n+m-1 basic cells (degenerate zeros kept).
  void init(Eigen::VectorXd a, Eigen::VectorXd b) {
    int i = 0, j = 0;
    while (true) {
      double amt = std::max(0.0, std::min(a[i], b[j]));
      x(i, j) = amt;
      basic[static_cast<size_t>(i)][static_cast<size_t>(j)] = 1;
      a[i] -= amt;
      b[j] -= amt;
      if (i == n - 1 && j == m - 1) break;
      if (i < n - 1 && (a[i] <= b[j] || j == m - 1))
        ++i;
      else
        ++j;
    }
  }

  // Duals from the basis tree: u_i + v_j = c_ij on basic cells, u_0 = 0.
  void compute_duals(std::vector<double>& u, std::vector<double>& v) const {
    u.assign(static_cast<size_t>(n), std::numeric_limits<double>::quiet_NaN());
    v.assign(static_cast<size_t>(m), std::numeric_limits<double>::quiet_NaN());
    u[0] = 0.0;
    std::deque<int> queue{0};  // nodes: rows 0..n-1, cols n..n+m-1
    while (!queue.empty()) {
      int node = queue.front();
      queue.pop_front();
      if (node < n) {
        for (int j = 0; j < m; ++j)
          if (basic[static_cast<size_t>(node)][static_cast<size_t>(j)] && std::isnan(v[static_cast<size_t>(j)])) {
            v[static_cast<size_t>(j)] = c(node, j) - u[static_cast<size_t>(node)];
            queue.push_back(n + j);
          }
      } else {
        int j = node - n;
        for (int i = 0; i < n; ++i)
          if (basic[static_cast<size_t>(i)][static_cast<size_t>(j)] && std::isnan(u[static_cast<size_t>(i)])) {
            u[static_cast<size_t>(i)] = c(i, j) - v[static_cast<size_t>(j)];
            queue.push_back(i);
          }
      }
    }
    for (double d : u)
      if (std::isnan(d)) throw std::logic_error("solve_ot: basis not connected");
    for (double d : v)
      if (std::isnan(d)) throw std::logic_error("solve_ot: basis not connected");
  }

  // Unique path of basic cells from row `si` to col `sj` in the basis tree.
  // Returned as the sequence of cells traversed.
  std::vector<std::pair<int, int>> tree_path(int si, int sj) const {
    int total = n + m;
    std::vector<int> parent(static_cast<size_t>(total), -1);
    std::vector<char> seen(static_cast<size_t>(total), 0);
    std::deque<int> queue{si};
    seen[static_cast<size_t>(si)] = 1;
    int goal = n + sj;
    while (!queue.empty()) {
      int node = queue.front();
      queue.pop_front();
      if (node == goal) break;
      if (node < n) {
        for (int j = 0; j < m; ++j) {
          if (!basic[static_cast<size_t>(node)][static_cast<size_t>(j)]) continue;
          int next = n + j;
          if (seen[static_cast<size_t>(next)]) continue;
          seen[static_cast<size_t>(next)] = 1;
          parent[static_cast<size_t>(next)] = node;
          queue.push_back(next);
        }
      } else {
        int j = node - n;
        for (int i = 0; i < n; ++i) {
          if (!basic[static_cast<size_t>(i)][static_cast<size_t>(j)]) continue;
          if (seen[static_cast<size_t>(i)]) continue;
          seen[static_cast<size_t>(i)] = 1;
          parent[static_cast<size_t>(i)] = node;
          queue.push_back(i);
        }
      }
    }
    if (!seen[static_cast<size_t>(goal)]) throw std::logic_error("solve_ot: no basis path");
    std::vector<std::pair<int, int>> cells;
    int node = goal;
    while (node != si) {
      int par = parent[static_cast<size_t>(node)];
      int row = node < n ? node : par;
      int col = node < n ? par - n : node - n;
      cells.emplace_back(row, col);
      node = par;
    }
    std::reverse(cells.begin(), cells.end());  // row si -> ... -> col sj
    return cells;
  }

  // One simplex pivot; returns false at optimality. Bland's rule both ways.
  bool pivot() {
    std::vector<double> u, v;
    compute_duals(u, v);
    int ei = -1, ej = -1;
    for (int i = 0; i < n && ei < 0; ++i)
      for (int j = 0; j < m; ++j) {
        if (basic[static_cast<size_t>(i)][static_cast<size_t>(j)]) continue;
        if (c(i, j) - u[static_cast<size_t>(i)] - v[static_cast<size_t>(j)] < -kEnterTol) {
          ei = i;
          ej = j;
          break;
        }
      }
    if (ei < 0) return false;

    // Cycle = entering cell (+) then alternating -,+ along the tree path.
    std::vector<std::pair<int, int>> path = tree_path(ei, ej);
    double theta = std::numeric_limits<double>::infinity();
    for (size_t t = 0; t < path.size(); t += 2)  // minus positions
      theta = std::min(theta, x(path[t].first, path[t].second));
    // Leaving cell: smallest (row, col) among the blocking minus cells.
    int leave = -1;
    for (size_t t = 0; t < path.size(); t += 2) {
      if (x(path[t].first, path[t].second) > theta) continue;
      if (leave < 0 || path[t] < path[static_cast<size_t>(leave)]) leave = static_cast<int>(t);
    }
    if (leave < 0) throw std::logic_error("solve_ot: unbounded pivot");

    x(ei, ej) += theta;
    for (size_t t = 0; t < path.size(); ++t) {
      if (t % 2 == 0)
        x(path[t].first, path[t].second) -= theta;
      else
        x(path[t].first, path[t].second) += theta;
    }
    auto [li, lj] = path[static_cast<size_t>(leave)];
    x(li, lj) = 0.0;
    basic[static_cast<size_t>(li)][static_cast<size_t>(lj)] = 0;
    basic[static_cast<size_t>(ei)][static_cast<size_t>(ej)] = 1;
    return true;
  }
};

}  // namespace

TransportPlan solve_ot(const Eigen::Ref<const Eigen::MatrixXd>& cost,
                       const Eigen::Ref<const Eigen::VectorXd>& source,
                       const Eigen::Ref<const Eigen::VectorXd>& target) {
  int n = static_cast<int>(cost.rows());
  int m = static_cast<int>(cost.cols());
  if (n == 0 || m == 0) throw std::invalid_argument("solve_ot: empty cost matrix");
  if (source.size() != n || target.size() != m)
    throw std::invalid_argument("solve_ot: marginal length mismatch");
  for (int i = 0; i < n; ++i)
    if (source[i] < 0.0) throw std::invalid_argument("solve_ot: negative source mass");
  for (int j = 0; j < m; ++j)
    if (target[j] < 0.0) throw std::invalid_argument("solve_ot: negative target mass");
  double sa = source.sum();
  double sb = target.sum();
  if (std::abs(sa - 1.0) > 1e-8 || std::abs(sb - 1.0) > 1e-8 || std::abs(sa - sb) > 1e-8)
    throw std::invalid_argument("solve_ot: infeasible marginals (masses must sum to 1)");

  Simplex s(cost, n, m);
  // Rescale the target so supplies and demands balance exactly.
  s.init(source, target * (sa / sb));

  long max_pivots = 1000L * (n + m);
  long pivots = 0;
  while (s.pivot()) {
    if (++pivots > max_pivots) throw std::logic_error("solve_ot: pivot limit exceeded");
  }

  TransportPlan result;
  result.plan = s.x.cwiseMax(0.0);
  result.cost = (cost.array() * result.plan.array()).sum();
  return result;
}

}  // namespace topiceval
