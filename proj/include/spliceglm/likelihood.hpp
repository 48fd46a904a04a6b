#pragma once

#include <Eigen/Dense>
#include <vector>

#include "spliceglm/dataset.hpp"
#include "spliceglm/types.hpp"

namespace spliceglm {

// Hessian diagonal entries are clamped below at this floor so forward
// sacrifices stay finite.
inline double hessian_floor(int n) { return 1e-8 * static_cast<double>(n); }

// Negative log-likelihood with the c(y, phi) term dropped:
//   l(beta) = -sum_i { y_i * theta_i - b(theta_i) },  theta_i = x_i'beta (+ intercept).
double neg_log_likelihood(const Dataset& data, const Coefficients& coef);

// Gradient of l: component j is -sum_i x_ij (y_i - b'(theta_i)). Descent in
// this vector decreases the loss.
Eigen::VectorXd gradient(const Dataset& data, const Coefficients& coef);

// Diagonal of the Hessian of l: sum_i b''(theta_i) x_ij^2, clamped below at
// hessian_floor(n).
Eigen::VectorXd hessian_diagonal(const Dataset& data, const Coefficients& coef);

// Per-observation state shared by the loss and its derivatives.
struct ModelEval {
    Eigen::VectorXd theta;  // linear predictor
    Eigen::VectorXd mu;     // b'(theta)
    Eigen::VectorXd w;      // b''(theta)
    double loss = 0.0;
};

ModelEval evaluate_model(const Dataset& data, const Coefficients& coef);
ModelEval evaluate_theta(const Dataset& data, const Eigen::VectorXd& theta);

// Loss derivatives restricted to an index pool, computed from a ModelEval.
// Cost is O(n * |pool|) regardless of p.
Eigen::VectorXd gradient_on_pool(const Dataset& data, const ModelEval& eval,
                                 const std::vector<int>& pool);
Eigen::VectorXd hessian_diagonal_on_pool(const Dataset& data, const ModelEval& eval,
                                         const std::vector<int>& pool);

}  // namespace spliceglm
