#pragma once

#include <optional>
#include <vector>

#include "spliceglm/dataset.hpp"
#include "spliceglm/splicing.hpp"
#include "spliceglm/types.hpp"

namespace spliceglm {

struct SelectorConfig {
    std::optional<int> s_max;        // default: adaptive budget, see resolve_s_max
    int k_max = 5;
    std::optional<double> tau;       // default: default_tau(s, p, n) per size
    bool screening = true;
    std::optional<int> screen_size;  // default: max(100, 5 * s_max), capped at p
    bool intercept = false;
    bool candidate_early_stop = true;
    NewtonConfig newton{};
    int max_outer_iters = 100;
};

struct SizeFit {
    int size = 0;
    Coefficients beta;
    std::vector<int> active;
    double gic = 0.0;
    double loss = 0.0;
    int splicing_iters = 0;
    bool failed = false;
};

struct FitResult {
    std::vector<SizeFit> per_size;  // sizes 1..s_max in order
    int selected_size = 0;          // smallest size attaining the minimum GIC
    Coefficients selected;
    long long sacrifice_evals = 0;
};

// Generalized information criterion: loss + |support| * log(p) * log(log(n)),
// natural logs, intercept excluded from the support count. Requires n >= 16
// and p >= 2.
double gic(const Dataset& data, const Coefficients& coef);

// Penalty charged per support element. Requires n >= 3 and p >= 2; this is
// the relaxed guard used inside the sweep when the caller supplied an
// explicit tau for small samples.
double gic_penalty(int n, int p);

// Nearest integer of (n / log p)^(1/4), floored at 1 and capped at min(n, p).
int default_s_max(int n, int p);

// Search budget used when SelectorConfig.s_max is unset: the larger of
// default_s_max and the GIC affordability bound ceil(n / (log p * log log n)),
// capped at min(n, p).
int resolve_s_max(int n, int p);

// Active set plus the d inactive variables with the largest forward
// sacrifices, ties toward the smaller index. Requires 1 <= d <= p; d >= |I|
// returns all of 0..p-1.
std::vector<int> important_subset(const Dataset& data, const ActiveModel& model, int d);

// Sweeps sizes 1..s_max, each warm-started from the previous size's active
// set plus its largest-|gradient| inactive coordinate, and returns every
// per-size fit along with the GIC minimizer (ties to the smaller size). A
// size whose solve fails is recorded with infinite GIC; if every size fails,
// NumericalFailureError propagates.
FitResult abess(const Dataset& data, const SelectorConfig& cfg = {});

}  // namespace spliceglm
