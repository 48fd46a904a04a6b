#pragma once

#include <limits>
#include <vector>

#include "spliceglm/dataset.hpp"
#include "spliceglm/likelihood.hpp"
#include "spliceglm/types.hpp"

namespace spliceglm {

// Optional abandon-early rule for fits that only matter if they beat an
// incumbent loss by at least tau (candidate refits during splicing).
struct EarlyStop {
    bool enabled = false;
    double budget_loss = std::numeric_limits<double>::infinity();
    double tau = 0.0;
};

struct NewtonConfig {
    double epsilon = 1e-6;  // stop when the step norm falls below this
    int max_iters = 80;
    EarlyStop early_stop{};
};

struct RestrictedFit {
    Coefficients coef;  // zeros outside the active set
    double loss = 0.0;
    bool converged = false;  // step-norm criterion fired within the budget
    int iters = 0;
};

// Linear extrapolation of per-iteration progress: keep iterating only while
// the remaining max_iters - m updates could plausibly reach budget_loss - tau.
// l1 is the loss before the latest update, l2 after it.
bool should_continue_newton(double l1, double l2, int max_iters, int m,
                            double budget_loss, double tau);

// Minimizes the loss over the coordinates in active (plus the intercept when
// init carries one), all other coordinates pinned at zero. Damped Newton with
// step halving; the restricted Hessian gets a ridge of 1e-6*n added once if
// its smallest pivot drops below 1e-10*n, and a second failure raises
// NumericalFailureError with the active set. An empty active set is legal and
// yields the null fit.
RestrictedFit restricted_mle(const Dataset& data, const std::vector<int>& active,
                             const Coefficients& init, const NewtonConfig& cfg = {});

}  // namespace spliceglm
