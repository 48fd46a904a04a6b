#pragma once

#include <Eigen/Dense>
#include <optional>
#include <utility>
#include <vector>

#include "spliceglm/dataset.hpp"
#include "spliceglm/newton.hpp"
#include "spliceglm/types.hpp"

namespace spliceglm {

struct SpliceConfig {
    int k_max = 5;               // largest swap size tried per iteration
    double tau = 0.0;            // required loss drop for accepting a splice
    int max_outer_iters = 100;   // safety cap on splicing iterations
    std::optional<int> screen_size;  // confine swaps to this many top-ranked
                                     // inactive variables plus the active set
    bool candidate_early_stop = true;  // abandon candidate refits that cannot
                                       // beat the incumbent by tau
    NewtonConfig newton{};
};

// A restricted fit together with the full-dimension gradient at it.
struct ActiveModel {
    std::vector<int> active;    // sorted
    std::vector<int> inactive;  // sorted complement
    Coefficients beta;
    Eigen::VectorXd grad;       // gradient of the loss at beta, length p
    double loss = 0.0;
};

ActiveModel fit_active_model(const Dataset& data, std::vector<int> active,
                             const Coefficients& init, const NewtonConfig& cfg = {});

// (index, value) pairs sorted by index.
using SacrificeList = std::vector<std::pair<int, double>>;

// Backward sacrifice for each active j: xi_j = H_jj(beta) * beta_j^2, the
// second-order loss increase from dropping j. H_jj is the clamped Hessian
// diagonal.
SacrificeList backward_sacrifices(const Dataset& data, const ActiveModel& model);

// Forward sacrifice for each inactive j: zeta_j = grad_j^2 / H_jj(beta), the
// second-order loss decrease from admitting j.
SacrificeList forward_sacrifices(const Dataset& data, const ActiveModel& model);

// The k backward indices with the smallest xi and the k forward indices with
// the largest zeta, ties broken toward the smaller index. Both sets come back
// sorted by index. Requires 1 <= k <= min(|xi|, |zeta|).
std::pair<std::vector<int>, std::vector<int>> splice_sets(const SacrificeList& xi,
                                                          const SacrificeList& zeta,
                                                          int k);

struct BessResult {
    Coefficients beta;
    std::vector<int> active;  // sorted, exactly s elements
    Eigen::VectorXd grad;     // full gradient at beta
    double loss = 0.0;
    bool converged = false;  // fixed point reached within the iteration cap
    int outer_iters = 0;     // splicing sweeps performed
    long long sacrifice_evals = 0;  // per-coordinate sacrifice evaluations
    std::vector<double> loss_path;  // initial fit, then every accepted splice
};

// Best-subset search at fixed size s: repeatedly swap the k least valuable
// active variables for the k most promising inactive ones, k = 1..k_max,
// accepting the first swap that lowers the loss by more than tau, until no
// swap does. With screen_size set, swaps are confined to the active set plus
// the top-ranked inactive variables, re-ranking on the full dimension after
// every confined fixed point until the confined pool stops changing.
BessResult bess_glm(const Dataset& data, int s, const std::vector<int>& initial_active,
                    const SpliceConfig& cfg, bool intercept = false);

// Size-s initial active set from univariate fits: each coordinate gets its
// own one-variable maximum likelihood estimate and the s largest in absolute
// value win, ties toward the smaller index. A coordinate whose univariate fit
// fails falls back to its |gradient at zero|.
std::vector<int> sis_init(const Dataset& data, int s);

// Splicing threshold for size s: 0.01 * s * log(p) * log(log(n)).
// Requires n >= 16 and p >= 2 so the factors are safely positive.
double default_tau(int s, int p, int n);

}  // namespace spliceglm
