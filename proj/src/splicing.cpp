#include "spliceglm/splicing.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spliceglm/errors.hpp"
#include "spliceglm/likelihood.hpp"

namespace spliceglm {

namespace {

std::vector<int> complement_of(int p, const std::vector<int>& sorted_subset) {
    std::vector<int> out;
    out.reserve(p - sorted_subset.size());
    std::size_t k = 0;
    for (int j = 0; j < p; ++j) {
        if (k < sorted_subset.size() && sorted_subset[k] == j)
            ++k;
        else
            out.push_back(j);
    }
    return out;
}

void check_sorted_unique(const std::vector<int>& idx, int p, const char* what) {
    int prev = -1;
    for (int j : idx) {
        if (j < 0 || j >= p)
            throw InvalidInputError(std::string(what) + ": index " + std::to_string(j) +
                                    " out of range");
        if (j <= prev)
            throw InvalidInputError(std::string(what) + ": indices must be sorted and unique");
        prev = j;
    }
}

// Everything bess_glm tracks about the incumbent between sweeps.
struct SpliceState {
    std::vector<int> active;
    std::vector<int> inactive;
    Coefficients beta;
    ModelEval ev;
};

SacrificeList xi_on(const Dataset& data, const SpliceState& st, long long& evals) {
    const Eigen::VectorXd h = hessian_diagonal_on_pool(data, st.ev, st.active);
    SacrificeList out(st.active.size());
    for (std::size_t k = 0; k < st.active.size(); ++k) {
        const int j = st.active[k];
        out[k] = {j, h[k] * st.beta.beta[j] * st.beta.beta[j]};
    }
    evals += static_cast<long long>(st.active.size());
    return out;
}

SacrificeList zeta_on(const Dataset& data, const SpliceState& st,
                      const std::vector<int>& pool, long long& evals) {
    const Eigen::VectorXd g = gradient_on_pool(data, st.ev, pool);
    const Eigen::VectorXd h = hessian_diagonal_on_pool(data, st.ev, pool);
    SacrificeList out(pool.size());
    for (std::size_t k = 0; k < pool.size(); ++k) out[k] = {pool[k], g[k] * g[k] / h[k]};
    evals += static_cast<long long>(pool.size());
    return out;
}

SpliceState make_state(const Dataset& data, std::vector<int> active,
                       const RestrictedFit& fit) {
    SpliceState st;
    st.inactive = complement_of(data.p(), active);
    st.active = std::move(active);
    st.beta = fit.coef;
    st.ev = evaluate_model(data, fit.coef);
    return st;
}

// One splicing sweep over the given inactive pool. Accepts the first swap
// size whose refit beats the incumbent loss by more than tau and updates the
// state in place. pre_zeta, when given, must hold the pool's forward
// sacrifices evaluated at the current state; it is reused instead of
// recomputed.
bool try_splice(const Dataset& data, SpliceState& st, const std::vector<int>& pool,
                const SpliceConfig& cfg, bool intercept, long long& evals,
                const SacrificeList* pre_zeta = nullptr) {
    const int kcap =
        std::min({cfg.k_max, static_cast<int>(st.active.size()), static_cast<int>(pool.size())});
    if (kcap < 1) return false;

    const double L = st.ev.loss;
    const SacrificeList xi = xi_on(data, st, evals);
    const SacrificeList zeta = pre_zeta ? *pre_zeta : zeta_on(data, st, pool, evals);

    for (int k = 1; k <= kcap; ++k) {
        auto [drop, add] = splice_sets(xi, zeta, k);

        std::vector<int> cand;
        cand.reserve(st.active.size());
        std::set_difference(st.active.begin(), st.active.end(), drop.begin(), drop.end(),
                            std::back_inserter(cand));
        cand.insert(cand.end(), add.begin(), add.end());
        std::sort(cand.begin(), cand.end());

        Coefficients init = Coefficients::zeros(data.p(), intercept);
        for (int j : cand) init.beta[j] = st.beta.beta[j];  // entering coords stay zero
        if (intercept) init.intercept = st.beta.intercept;
        init.refresh_support();

        NewtonConfig nc = cfg.newton;
        if (cfg.candidate_early_stop) nc.early_stop = {true, L, cfg.tau};

        RestrictedFit fit;
        try {
            fit = restricted_mle(data, cand, init, nc);
        } catch (const NumericalFailureError&) {
            continue;  // unfittable candidate counts as a rejected splice
        }
        if (L - fit.loss > cfg.tau) {
            st = make_state(data, std::move(cand), fit);
            return true;
        }
    }
    return false;
}

// Inactive members of the confined universe, i.e. universe minus active.
std::vector<int> pool_within(const std::vector<int>& universe, const std::vector<int>& active) {
    std::vector<int> out;
    out.reserve(universe.size());
    std::set_difference(universe.begin(), universe.end(), active.begin(), active.end(),
                        std::back_inserter(out));
    return out;
}

}  // namespace

ActiveModel fit_active_model(const Dataset& data, std::vector<int> active,
                             const Coefficients& init, const NewtonConfig& cfg) {
    const RestrictedFit fit = restricted_mle(data, active, init, cfg);
    ActiveModel model;
    model.inactive = complement_of(data.p(), active);
    model.active = std::move(active);
    model.beta = fit.coef;
    model.grad = gradient(data, fit.coef);
    model.loss = fit.loss;
    return model;
}

SacrificeList backward_sacrifices(const Dataset& data, const ActiveModel& model) {
    check_sorted_unique(model.active, data.p(), "backward_sacrifices");
    const ModelEval ev = evaluate_model(data, model.beta);
    const Eigen::VectorXd h = hessian_diagonal_on_pool(data, ev, model.active);
    SacrificeList out(model.active.size());
    for (std::size_t k = 0; k < model.active.size(); ++k) {
        const int j = model.active[k];
        out[k] = {j, h[k] * model.beta.beta[j] * model.beta.beta[j]};
    }
    return out;
}

SacrificeList forward_sacrifices(const Dataset& data, const ActiveModel& model) {
    check_sorted_unique(model.inactive, data.p(), "forward_sacrifices");
    if (model.grad.size() != data.p())
        throw InvalidInputError("forward_sacrifices: gradient length does not match p");
    const ModelEval ev = evaluate_model(data, model.beta);
    const Eigen::VectorXd h = hessian_diagonal_on_pool(data, ev, model.inactive);
    SacrificeList out(model.inactive.size());
    for (std::size_t k = 0; k < model.inactive.size(); ++k) {
        const int j = model.inactive[k];
        out[k] = {j, model.grad[j] * model.grad[j] / h[k]};
    }
    return out;
}

std::pair<std::vector<int>, std::vector<int>> splice_sets(const SacrificeList& xi,
                                                          const SacrificeList& zeta,
                                                          int k) {
    const int limit = static_cast<int>(std::min(xi.size(), zeta.size()));
    if (k < 1 || k > limit)
        throw InvalidInputError("splice_sets: k = " + std::to_string(k) +
                                " outside 1..min(|xi|, |zeta|) = " + std::to_string(limit));

    SacrificeList lo = xi;
    std::sort(lo.begin(), lo.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second < b.second : a.first < b.first;
    });
    SacrificeList hi = zeta;
    std::sort(hi.begin(), hi.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second > b.second : a.first < b.first;
    });

    std::vector<int> drop(k), add(k);
    for (int i = 0; i < k; ++i) {
        drop[i] = lo[i].first;
        add[i] = hi[i].first;
    }
    std::sort(drop.begin(), drop.end());
    std::sort(add.begin(), add.end());
    return {std::move(drop), std::move(add)};
}

BessResult bess_glm(const Dataset& data, int s, const std::vector<int>& initial_active,
                    const SpliceConfig& cfg, bool intercept) {
    const int n = data.n();
    const int p = data.p();
    if (s < 1 || s > std::min(n, p))
        throw InvalidInputError("bess_glm: s must lie in 1..min(n, p)");
    check_sorted_unique(initial_active, p, "bess_glm initial active set");
    if (static_cast<int>(initial_active.size()) != s)
        throw InvalidInputError("bess_glm: initial active set must have exactly s elements");
    if (cfg.k_max < 1 || cfg.k_max > s)
        throw InvalidInputError("bess_glm: k_max must lie in 1..s");
    if (!(cfg.tau >= 0.0)) throw InvalidInputError("bess_glm: tau must be nonnegative");
    if (cfg.max_outer_iters < 1)
        throw InvalidInputError("bess_glm: max_outer_iters must be positive");
    if (cfg.screen_size && *cfg.screen_size < 1)
        throw InvalidInputError("bess_glm: screen_size must be positive");

    BessResult res;

    // Initial restricted fit runs with no early-stop budget.
    NewtonConfig full_cfg = cfg.newton;
    full_cfg.early_stop = {};
    SpliceState st =
        make_state(data, initial_active,
                   restricted_mle(data, initial_active,
                                  Coefficients::zeros(p, intercept), full_cfg));
    res.loss_path.push_back(st.ev.loss);

    const bool screened = cfg.screen_size && *cfg.screen_size < p - s;
    bool converged = false;

    if (!screened) {
        while (res.outer_iters < cfg.max_outer_iters) {
            ++res.outer_iters;
            if (!try_splice(data, st, st.inactive, cfg, intercept, res.sacrifice_evals)) {
                converged = true;
                break;
            }
            res.loss_path.push_back(st.ev.loss);
        }
    } else {
        const int d = *cfg.screen_size;
        std::vector<int> universe;  // previous confined universe, empty before round one
        while (res.outer_iters < cfg.max_outer_iters) {
            // Rank all inactive variables and rebuild the confined universe.
            const SacrificeList zeta = zeta_on(data, st, st.inactive, res.sacrifice_evals);
            SacrificeList ranked = zeta;
            std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
                return a.second != b.second ? a.second > b.second : a.first < b.first;
            });
            std::vector<int> top;
            const int take = std::min<int>(d, static_cast<int>(ranked.size()));
            top.reserve(take);
            for (int i = 0; i < take; ++i) top.push_back(ranked[i].first);
            std::sort(top.begin(), top.end());
            std::vector<int> next_universe(st.active);
            next_universe.insert(next_universe.end(), top.begin(), top.end());
            std::sort(next_universe.begin(), next_universe.end());

            if (next_universe == universe) {
                // The full-dimension ranking confirms the confined pool.
                converged = true;
                break;
            }
            universe = std::move(next_universe);

            // The first confined sweep reuses the ranking's forward
            // sacrifices, which were just evaluated at this very state.
            std::vector<int> pool = pool_within(universe, st.active);
            SacrificeList pool_zeta;
            pool_zeta.reserve(pool.size());
            std::size_t zi = 0;
            for (int j : pool) {
                while (zeta[zi].first < j) ++zi;
                pool_zeta.push_back(zeta[zi]);
            }

            bool accepted_any = false;
            bool confined_converged = false;
            const SacrificeList* reuse = &pool_zeta;
            while (res.outer_iters < cfg.max_outer_iters) {
                ++res.outer_iters;
                if (!try_splice(data, st, pool, cfg, intercept, res.sacrifice_evals, reuse)) {
                    confined_converged = true;
                    break;
                }
                reuse = nullptr;
                accepted_any = true;
                res.loss_path.push_back(st.ev.loss);
                pool = pool_within(universe, st.active);
            }
            if (!confined_converged) break;  // cap ran out mid-round
            if (!accepted_any) {
                // Nothing moved, so recomputing the ranking at this unchanged
                // state would reproduce the universe verbatim.
                converged = true;
                break;
            }
        }
    }

    res.beta = st.beta;
    res.active = st.active;
    res.grad = gradient(data, st.beta);
    res.loss = st.ev.loss;
    res.converged = converged;
    return res;
}

std::vector<int> sis_init(const Dataset& data, int s) {
    const int p = data.p();
    if (s < 1 || s > p) throw InvalidInputError("sis_init: s must lie in 1..p");

    const Eigen::VectorXd grad0 =
        gradient(data, Coefficients::zeros(p));  // fallback ranking only

    NewtonConfig cfg;
    cfg.epsilon = 1e-8;
    cfg.max_iters = 50;

    std::vector<std::pair<int, double>> score(p);
    const Coefficients zero = Coefficients::zeros(p);
    for (int j = 0; j < p; ++j) {
        double val;
        try {
            const RestrictedFit fit = restricted_mle(data, {j}, zero, cfg);
            val = std::abs(fit.coef.beta[j]);
            if (!std::isfinite(val)) val = std::abs(grad0[j]);
        } catch (const NumericalFailureError&) {
            val = std::abs(grad0[j]);
        }
        score[j] = {j, val};
    }
    std::sort(score.begin(), score.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    std::vector<int> out(s);
    for (int i = 0; i < s; ++i) out[i] = score[i].first;
    std::sort(out.begin(), out.end());
    return out;
}

double default_tau(int s, int p, int n) {
    if (n < 16) throw InvalidInputError("default_tau: n must be at least 16");
    if (p < 2) throw InvalidInputError("default_tau: p must be at least 2");
    if (s < 0) throw InvalidInputError("default_tau: s must be nonnegative");
    return 0.01 * static_cast<double>(s) * std::log(static_cast<double>(p)) *
           std::log(std::log(static_cast<double>(n)));
}

}  // namespace spliceglm
