#pragma once

#include <Eigen/Dense>

namespace topiceval {

// Optimal coupling between two discrete distributions under a cost matrix.
struct TransportPlan {
  Eigen::MatrixXd plan;  // N x M, nonnegative, marginals = source / target
  double cost = 0.0;
};

// Exact LP optimum via the transportation simplex (no regularization). The
// returned plan is a basic solution: at most N+M-1 nonzero entries.
// `source` and `target` must each sum to 1 within 1e-8.
TransportPlan solve_ot(const Eigen::Ref<const Eigen::MatrixXd>& cost,
                       const Eigen::Ref<const Eigen::VectorXd>& source,
                       const Eigen::Ref<const Eigen::VectorXd>& target);

}  // namespace topiceval
