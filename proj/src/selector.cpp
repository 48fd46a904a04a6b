#include "spliceglm/selector.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "spliceglm/errors.hpp"
#include "spliceglm/likelihood.hpp"

namespace spliceglm {

double gic_penalty(int n, int p) {
    if (n < 3) throw InvalidInputError("gic_penalty: n must be at least 3");
    if (p < 2) throw InvalidInputError("gic_penalty: p must be at least 2");
    return std::log(static_cast<double>(p)) * std::log(std::log(static_cast<double>(n)));
}

double gic(const Dataset& data, const Coefficients& coef) {
    if (data.n() < 16) throw InvalidInputError("gic: n must be at least 16");
    if (data.p() < 2) throw InvalidInputError("gic: p must be at least 2");
    return neg_log_likelihood(data, coef) +
           static_cast<double>(coef.support.size()) * gic_penalty(data.n(), data.p());
}

int default_s_max(int n, int p) {
    if (n < 1) throw InvalidInputError("default_s_max: n must be positive");
    if (p < 2) throw InvalidInputError("default_s_max: p must be at least 2");
    const double raw = std::pow(static_cast<double>(n) / std::log(static_cast<double>(p)), 0.25);
    const long s = std::lround(raw);
    return static_cast<int>(std::clamp<long>(s, 1, std::min(n, p)));
}

int resolve_s_max(int n, int p) {
    if (n < 3) throw InvalidInputError("resolve_s_max: n must be at least 3");
    const double budget =
        static_cast<double>(n) / (std::log(static_cast<double>(p)) *
                                  std::log(std::log(static_cast<double>(n))));
    const long affordable = std::min<long>(p, static_cast<long>(std::ceil(budget)));
    const long s = std::max<long>(default_s_max(n, p), affordable);
    return static_cast<int>(std::clamp<long>(s, 1, std::min(n, p)));
}

std::vector<int> important_subset(const Dataset& data, const ActiveModel& model, int d) {
    const int p = data.p();
    if (d < 1 || d > p) throw InvalidInputError("important_subset: d must lie in 1..p");

    SacrificeList zeta = forward_sacrifices(data, model);
    std::sort(zeta.begin(), zeta.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    std::vector<int> out(model.active);
    const int take = std::min<int>(d, static_cast<int>(zeta.size()));
    for (int i = 0; i < take; ++i) out.push_back(zeta[i].first);
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

// Largest-|gradient| index outside the given sorted set, ties to the smaller
// index.
int best_outside(const Eigen::VectorXd& grad, const std::vector<int>& sorted_set) {
    int best = -1;
    double best_val = -1.0;
    std::size_t k = 0;
    for (int j = 0; j < grad.size(); ++j) {
        if (k < sorted_set.size() && sorted_set[k] == j) {
            ++k;
            continue;
        }
        const double v = std::abs(grad[j]);
        if (v > best_val) {
            best_val = v;
            best = j;
        }
    }
    return best;
}

}  // namespace

FitResult abess(const Dataset& data, const SelectorConfig& cfg) {
    const int n = data.n();
    const int p = data.p();
    if (p < 2) throw InvalidInputError("abess: p must be at least 2");
    if (cfg.tau) {
        if (!(*cfg.tau >= 0.0)) throw InvalidInputError("abess: tau must be nonnegative");
        if (n < 3) throw InvalidInputError("abess: n must be at least 3");
    } else if (n < 16) {
        throw InvalidInputError("abess: n must be at least 16 unless tau is given explicitly");
    }
    if (cfg.k_max < 1) throw InvalidInputError("abess: k_max must be positive");
    if (cfg.s_max && (*cfg.s_max < 1 || *cfg.s_max > std::min(n, p)))
        throw InvalidInputError("abess: s_max must lie in 1..min(n, p)");
    if (cfg.screen_size && *cfg.screen_size < 1)
        throw InvalidInputError("abess: screen_size must be positive");

    const int s_max = cfg.s_max ? *cfg.s_max : resolve_s_max(n, p);
    std::optional<int> screen;
    if (cfg.screening)
        screen = cfg.screen_size ? *cfg.screen_size
                                 : std::min(p, std::max(100, 5 * s_max));

    // Gradient at the null model seeds the size-1 set and the failure
    // fallback. With an intercept the null model is the intercept-only fit.
    Coefficients null_coef = Coefficients::zeros(p, cfg.intercept);
    if (cfg.intercept) null_coef = restricted_mle(data, {}, null_coef, cfg.newton).coef;
    const Eigen::VectorXd grad0 = gradient(data, null_coef);

    const double penalty = gic_penalty(n, p);

    FitResult result;
    result.per_size.reserve(s_max);
    std::vector<int> init{best_outside(grad0, {})};

    for (int s = 1; s <= s_max; ++s) {
        SpliceConfig sc;
        sc.k_max = std::min(cfg.k_max, s);
        sc.tau = cfg.tau ? *cfg.tau : default_tau(s, p, n);
        sc.max_outer_iters = cfg.max_outer_iters;
        sc.screen_size = screen;
        sc.candidate_early_stop = cfg.candidate_early_stop;
        sc.newton = cfg.newton;

        SizeFit entry;
        entry.size = s;
        try {
            BessResult res = bess_glm(data, s, init, sc, cfg.intercept);
            entry.beta = res.beta;
            entry.active = res.active;
            entry.loss = res.loss;
            entry.gic = res.loss + static_cast<double>(res.beta.support.size()) * penalty;
            entry.splicing_iters = res.outer_iters;
            result.sacrifice_evals += res.sacrifice_evals;
            if (s < s_max) {
                init = res.active;
                init.push_back(best_outside(res.grad, res.active));
                std::sort(init.begin(), init.end());
            }
        } catch (const NumericalFailureError&) {
            entry.failed = true;
            entry.beta = Coefficients::zeros(p, cfg.intercept);
            entry.active = init;
            entry.loss = std::numeric_limits<double>::infinity();
            entry.gic = std::numeric_limits<double>::infinity();
            if (s < s_max) {
                init.push_back(best_outside(grad0, init));
                std::sort(init.begin(), init.end());
            }
        }
        result.per_size.push_back(std::move(entry));
    }

    int best = -1;
    double best_gic = std::numeric_limits<double>::infinity();
    for (const SizeFit& e : result.per_size) {
        if (!e.failed && e.gic < best_gic) {
            best_gic = e.gic;
            best = e.size;
        }
    }
    if (best < 0)
        throw NumericalFailureError(init, "abess: every size in the sweep failed");
    result.selected_size = best;
    result.selected = result.per_size[best - 1].beta;
    return result;
}

}  // namespace spliceglm
