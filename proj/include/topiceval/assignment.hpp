#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

namespace topiceval {

// Minimum-cost one-to-one matching covering the smaller side of a
// rectangular cost matrix.
struct AssignmentResult {
  std::vector<std::pair<int, int>> matches;  // (row, col), sorted by row; min(N, M) pairs
  double cost = 0.0;
};

// Exact rectangular assignment (Hungarian / shortest augmenting path). Among
// optimal solutions, returns the lexicographically smallest match set.
AssignmentResult solve_assignment(const Eigen::Ref<const Eigen::MatrixXd>& cost);

}  // namespace topiceval
