#include "spliceglm/newton.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <string>

#include "spliceglm/errors.hpp"

namespace spliceglm {

bool should_continue_newton(double l1, double l2, int max_iters, int m,
                            double budget_loss, double tau) {
    const double remaining = static_cast<double>(max_iters - m);
    // Optimistic forecast: every remaining update repeats the latest decrease.
    return l2 - remaining * (l1 - l2) <= budget_loss - tau;
}

namespace {

constexpr int kMaxHalvings = 10;
constexpr double kLossSlack = 1e-10;  // accepted steps may not increase loss beyond this

void check_active(const Dataset& data, const std::vector<int>& active) {
    int prev = -1;
    for (int j : active) {
        if (j < 0 || j >= data.p())
            throw InvalidInputError("restricted_mle: active index " + std::to_string(j) +
                                    " out of range");
        if (j <= prev)
            throw InvalidInputError("restricted_mle: active set must be sorted and unique");
        prev = j;
    }
}

}  // namespace

RestrictedFit restricted_mle(const Dataset& data, const std::vector<int>& active,
                             const Coefficients& init, const NewtonConfig& cfg) {
    check_active(data, active);
    if (init.beta.size() != data.p())
        throw InvalidInputError("restricted_mle: init length does not match p");
    if (cfg.epsilon <= 0.0 || cfg.max_iters < 1)
        throw InvalidInputError("restricted_mle: epsilon must be positive, max_iters >= 1");

    const int n = data.n();
    const int m = static_cast<int>(active.size());
    const bool icept = init.intercept.has_value();
    const int dim = m + (icept ? 1 : 0);

    // Restricted design: active columns, then a ones column for the intercept.
    Eigen::MatrixXd XA(n, dim);
    for (int k = 0; k < m; ++k) XA.col(k) = data.X.col(active[k]);
    if (icept) XA.col(m) = Eigen::VectorXd::Ones(n);

    Eigen::VectorXd b(dim);
    for (int k = 0; k < m; ++k) b[k] = init.beta[active[k]];
    if (icept) b[m] = *init.intercept;

    auto pack = [&](const Eigen::VectorXd& v) {
        Coefficients out = Coefficients::zeros(data.p(), icept);
        for (int k = 0; k < m; ++k) out.beta[active[k]] = v[k];
        if (icept) out.intercept = v[m];
        out.refresh_support();
        return out;
    };

    Eigen::VectorXd theta = dim > 0 ? Eigen::VectorXd(XA * b) : Eigen::VectorXd::Zero(n);
    ModelEval ev = evaluate_theta(data, theta);

    RestrictedFit fit;
    if (dim == 0) {  // null model, nothing to iterate
        fit.coef = pack(b);
        fit.loss = ev.loss;
        fit.converged = true;
        return fit;
    }

    const double pivot_floor = 1e-10 * n;
    const double ridge = 1e-6 * n;
    bool converged = false;
    int iters = 0;

    for (int it = 1; it <= cfg.max_iters; ++it) {
        const Eigen::VectorXd g = XA.transpose() * (ev.mu - data.y);
        Eigen::MatrixXd H = XA.transpose() * ev.w.asDiagonal() * XA;

        // NaN pivots must register as failures, so compare elementwise instead
        // of through minCoeff (which skips NaN).
        auto pivots_ok = [&](const Eigen::LDLT<Eigen::MatrixXd>& f) {
            return (f.vectorD().array() >= pivot_floor).all() && f.info() == Eigen::Success;
        };
        Eigen::LDLT<Eigen::MatrixXd> ldlt(H);
        if (!pivots_ok(ldlt)) {
            H.diagonal().array() += ridge;
            ldlt.compute(H);
            if (!pivots_ok(ldlt))
                throw NumericalFailureError(
                    active, "restricted Hessian is singular after ridge damping");
        }

        const Eigen::VectorXd delta = ldlt.solve(g);
        const Eigen::VectorXd dir = XA * delta;

        // Backtrack until the loss stops increasing.
        double t = 1.0;
        double new_loss = std::numeric_limits<double>::quiet_NaN();
        Eigen::VectorXd new_theta;
        ModelEval new_ev;
        bool accepted = false;
        for (int h = 0; h <= kMaxHalvings; ++h) {
            new_theta = theta - t * dir;
            new_ev = evaluate_theta(data, new_theta);
            new_loss = new_ev.loss;
            if (new_loss <= ev.loss + kLossSlack) {
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) break;  // flat or noisy region, keep the incumbent

        const double prev_loss = ev.loss;
        b -= t * delta;
        theta = std::move(new_theta);
        ev = std::move(new_ev);
        iters = it;

        if ((t * delta).norm() <= cfg.epsilon) {
            converged = true;
            break;
        }
        if (cfg.early_stop.enabled &&
            !should_continue_newton(prev_loss, ev.loss, cfg.max_iters, it,
                                    cfg.early_stop.budget_loss, cfg.early_stop.tau))
            break;  // cannot beat the incumbent within the remaining budget
    }

    fit.coef = pack(b);
    fit.loss = ev.loss;
    fit.converged = converged;
    fit.iters = iters;
    return fit;
}

}  // namespace spliceglm
