#include "spliceglm/likelihood.hpp"

#include <string>

#include "spliceglm/errors.hpp"

namespace spliceglm {

namespace {

void check_dims(const Dataset& data, const Coefficients& coef, const char* op) {
    if (coef.beta.size() != data.p())
        throw InvalidInputError(std::string(op) + ": coefficient length " +
                                std::to_string(coef.beta.size()) + " does not match p = " +
                                std::to_string(data.p()));
}

Eigen::VectorXd linear_predictor(const Dataset& data, const Coefficients& coef) {
    // Multiply through the support only; the sweep keeps most of beta at zero.
    Eigen::VectorXd theta = Eigen::VectorXd::Constant(data.n(), coef.intercept.value_or(0.0));
    for (int j : coef.support) theta += coef.beta[j] * data.X.col(j);
    return theta;
}

}  // namespace

ModelEval evaluate_theta(const Dataset& data, const Eigen::VectorXd& theta) {
    const int n = data.n();
    ModelEval ev;
    ev.theta = theta;
    ev.mu.resize(n);
    ev.w.resize(n);
    double loss = 0.0;
    for (int i = 0; i < n; ++i) {
        const double t = theta[i];
        loss -= data.y[i] * t - cumulant(data.family, t);
        ev.mu[i] = mean_function(data.family, t);
        ev.w[i] = variance_function(data.family, t);
    }
    ev.loss = loss;
    return ev;
}

ModelEval evaluate_model(const Dataset& data, const Coefficients& coef) {
    check_dims(data, coef, "evaluate_model");
    return evaluate_theta(data, linear_predictor(data, coef));
}

double neg_log_likelihood(const Dataset& data, const Coefficients& coef) {
    check_dims(data, coef, "neg_log_likelihood");
    const Eigen::VectorXd theta = linear_predictor(data, coef);
    double loss = 0.0;
    for (int i = 0; i < data.n(); ++i)
        loss -= data.y[i] * theta[i] - cumulant(data.family, theta[i]);
    return loss;
}

Eigen::VectorXd gradient(const Dataset& data, const Coefficients& coef) {
    check_dims(data, coef, "gradient");
    const ModelEval ev = evaluate_model(data, coef);
    return data.X.transpose() * (ev.mu - data.y);
}

Eigen::VectorXd hessian_diagonal(const Dataset& data, const Coefficients& coef) {
    check_dims(data, coef, "hessian_diagonal");
    const ModelEval ev = evaluate_model(data, coef);
    const double floor = hessian_floor(data.n());
    Eigen::VectorXd h = (data.X.array().square().matrix().transpose() * ev.w).cwiseMax(floor);
    return h;
}

Eigen::VectorXd gradient_on_pool(const Dataset& data, const ModelEval& eval,
                                 const std::vector<int>& pool) {
    const Eigen::VectorXd resid = eval.mu - data.y;
    Eigen::VectorXd g(pool.size());
    for (std::size_t k = 0; k < pool.size(); ++k) g[k] = data.X.col(pool[k]).dot(resid);
    return g;
}

Eigen::VectorXd hessian_diagonal_on_pool(const Dataset& data, const ModelEval& eval,
                                         const std::vector<int>& pool) {
    const double floor = hessian_floor(data.n());
    Eigen::VectorXd h(pool.size());
    for (std::size_t k = 0; k < pool.size(); ++k) {
        const int j = pool[k];
        h[k] = std::max(data.X.col(j).array().square().matrix().dot(eval.w), floor);
    }
    return h;
}

}  // namespace spliceglm
