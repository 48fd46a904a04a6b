#include "spliceglm/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <thread>

#include "spliceglm/errors.hpp"
#include "spliceglm/io.hpp"

namespace spliceglm {

Eigen::MatrixXd generate_design(int n, int p, double rho, Rng& rng) {
    if (n < 1 || p < 1) throw InvalidInputError("generate_design: n and p must be positive");
    if (!(rho >= 0.0 && rho < 1.0))
        throw InvalidInputError("generate_design: rho must lie in [0, 1)");

    Eigen::MatrixXd X(n, p);
    if (rho == 0.0) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < p; ++j) X(i, j) = rng.normal();
        return X;
    }
    const double shared = std::sqrt(rho);
    const double own = std::sqrt(1.0 - rho);
    for (int i = 0; i < n; ++i) {
        const double z0 = rng.normal();
        for (int j = 0; j < p; ++j) X(i, j) = shared * z0 + own * rng.normal();
    }
    return X;
}

Coefficients place_true_beta(int p, const std::vector<double>& pattern) {
    const long long k = static_cast<long long>(pattern.size());
    if (p < 1) throw InvalidInputError("place_true_beta: p must be positive");
    if (k < 1 || k > p)
        throw InvalidInputError("place_true_beta: pattern size must lie in 1..p");
    Coefficients beta = Coefficients::zeros(p);
    for (long long t = 1; t <= k; ++t) {
        if (pattern[t - 1] == 0.0)
            throw InvalidInputError("place_true_beta: pattern values must be nonzero");
        const long long idx = ((t - 1) * p) / k;  // floor(1 + (t-1)p/k), 0-based
        beta.beta[idx] = pattern[t - 1];
    }
    beta.refresh_support();
    return beta;
}

Eigen::VectorXd simulate_response(const Eigen::MatrixXd& X, const Coefficients& beta_star,
                                  Family family, Rng& rng, double gaussian_sigma) {
    if (beta_star.beta.size() != X.cols())
        throw InvalidInputError("simulate_response: beta length does not match design");
    if (!(gaussian_sigma >= 0.0))
        throw InvalidInputError("simulate_response: sigma must be nonnegative");

    const Eigen::VectorXd theta =
        X * beta_star.beta +
        Eigen::VectorXd::Constant(X.rows(), beta_star.intercept.value_or(0.0));
    Eigen::VectorXd y(X.rows());
    for (int i = 0; i < y.size(); ++i) {
        switch (family) {
            case Family::gaussian:
                y[i] = theta[i] + gaussian_sigma * rng.normal();
                break;
            case Family::logistic:
                y[i] = rng.bernoulli(mean_function(Family::logistic, theta[i])) ? 1.0 : 0.0;
                break;
            case Family::poisson:
                y[i] = static_cast<double>(
                    rng.poisson(mean_function(Family::poisson, theta[i])));
                break;
        }
    }
    return y;
}

namespace {

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg, int threads) {
    if (cfg.p < 2) throw InvalidInputError("run_experiment: p must be at least 2");
    if (cfg.replications < 1)
        throw InvalidInputError("run_experiment: replications must be positive");
    if (cfg.n_grid.empty()) throw InvalidInputError("run_experiment: n_grid is empty");

    std::vector<int> grid = cfg.n_grid;
    std::sort(grid.begin(), grid.end());
    if (std::adjacent_find(grid.begin(), grid.end()) != grid.end())
        throw InvalidInputError("run_experiment: n_grid has duplicate entries");
    for (int n : grid)
        if (n < 1) throw InvalidInputError("run_experiment: grid sizes must be positive");

    ExperimentResult result;
    result.beta_star = place_true_beta(cfg.p, cfg.beta_pattern).beta;
    const Coefficients beta_star = place_true_beta(cfg.p, cfg.beta_pattern);
    const double star_norm = beta_star.beta.norm();

    const int reps = cfg.replications;
    const std::size_t total = grid.size() * static_cast<std::size_t>(reps);
    result.rows.resize(total);
    result.beta_hats.assign(total, Eigen::VectorXd::Zero(cfg.p));

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= total) return;
            const int n = grid[i / reps];
            const int r = static_cast<int>(i % reps);

            Rng rng = Rng::for_replication(cfg.seed, static_cast<std::uint64_t>(n),
                                           static_cast<std::uint64_t>(r));
            MetricsRow row;
            row.family = family_name(cfg.family);
            row.n = n;
            row.p = cfg.p;
            row.rho = cfg.rho;
            row.replication = r;

            const Eigen::MatrixXd X = generate_design(n, cfg.p, cfg.rho, rng);
            const Eigen::VectorXd y =
                simulate_response(X, beta_star, cfg.family, rng, cfg.gaussian_sigma);
            try {
                const Dataset ds = Dataset::from_raw(cfg.family, X, y);
                const auto t0 = std::chrono::steady_clock::now();
                const FitResult fit = abess(ds, cfg.solver);
                const auto t1 = std::chrono::steady_clock::now();
                if (cfg.measure_runtime)
                    row.runtime_seconds = std::chrono::duration<double>(t1 - t0).count();

                const Eigen::VectorXd beta_orig =
                    fit.selected.beta.cwiseProduct(ds.col_scale);
                result.beta_hats[i] = beta_orig;

                const std::vector<int>& est = fit.selected.support;
                row.covered_active = std::includes(est.begin(), est.end(),
                                                   beta_star.support.begin(),
                                                   beta_star.support.end());
                row.covered_inactive = std::includes(beta_star.support.begin(),
                                                     beta_star.support.end(),
                                                     est.begin(), est.end());
                row.exact = row.covered_active && row.covered_inactive;
                row.re_err = (beta_orig - beta_star.beta).norm() / star_norm;
                row.selected_size = static_cast<int>(est.size());
            } catch (const std::exception&) {
                // Keep the replication as a flagged null-model row.
                row.failed = 1;
                row.covered_inactive = 1;  // empty estimate is inside the true support
                row.re_err = 1.0;
            }
            result.rows[i] = std::move(row);
        }
    };

    const int nthreads =
        std::max(1, std::min<int>(threads, static_cast<int>(total)));
    if (nthreads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nthreads);
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
        AggregateRow agg;
        agg.family = family_name(cfg.family);
        agg.n = grid[gi];
        agg.p = cfg.p;
        agg.rho = cfg.rho;
        agg.replications = reps;
        std::vector<double> errs;
        errs.reserve(reps);
        for (int r = 0; r < reps; ++r) {
            const MetricsRow& row = result.rows[gi * reps + r];
            agg.prob_cover_active += row.covered_active;
            agg.prob_cover_inactive += row.covered_inactive;
            agg.prob_exact += row.exact;
            agg.mean_runtime_seconds += row.runtime_seconds;
            errs.push_back(row.re_err);
        }
        agg.prob_cover_active /= reps;
        agg.prob_cover_inactive /= reps;
        agg.prob_exact /= reps;
        agg.mean_runtime_seconds /= reps;
        agg.median_re_err = median_of(std::move(errs));
        result.aggregates.push_back(std::move(agg));
    }
    return result;
}

void write_metrics_csv(const std::string& path, const std::vector<MetricsRow>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidInputError("cannot write '" + path + "'");
    out << "family,n,p,rho,replication,covered_active,covered_inactive,exact,"
           "re_err,selected_size,runtime_seconds,failed\n";
    for (const MetricsRow& r : rows) {
        out << r.family << ',' << r.n << ',' << r.p << ',' << format_double(r.rho) << ','
            << r.replication << ',' << r.covered_active << ',' << r.covered_inactive << ','
            << r.exact << ',' << format_double(r.re_err) << ',' << r.selected_size << ','
            << format_double(r.runtime_seconds) << ',' << r.failed << '\n';
    }
}

void write_aggregate_csv(const std::string& path, const std::vector<AggregateRow>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidInputError("cannot write '" + path + "'");
    out << "family,n,p,rho,prob_cover_active,prob_cover_inactive,prob_exact,"
           "median_re_err,mean_runtime_seconds,replications\n";
    for (const AggregateRow& r : rows) {
        out << r.family << ',' << r.n << ',' << r.p << ',' << format_double(r.rho) << ','
            << format_double(r.prob_cover_active) << ','
            << format_double(r.prob_cover_inactive) << ',' << format_double(r.prob_exact)
            << ',' << format_double(r.median_re_err) << ','
            << format_double(r.mean_runtime_seconds) << ',' << r.replications << '\n';
    }
}

ExperimentConfig preset_config(const std::string& name) {
    ExperimentConfig cfg;
    cfg.p = 500;
    cfg.replications = 50;
    cfg.seed = 1;
    if (name == "logistic-independent" || name == "logistic-constant") {
        cfg.family = Family::logistic;
        cfg.rho = name == "logistic-constant" ? 0.4 : 0.0;
        cfg.beta_pattern = {2, 2, 8, 8, 8, 8, 10, 10, 10, 10};
        cfg.n_grid = {500, 1000, 1500, 2000, 2500, 3000};
        cfg.solver.s_max = 20;
    } else if (name == "poisson-independent" || name == "poisson-constant") {
        cfg.family = Family::poisson;
        cfg.rho = name == "poisson-constant" ? 0.2 : 0.0;
        cfg.beta_pattern = {1, 1, 1};
        cfg.n_grid = {500, 1000, 1500};
        cfg.solver.s_max = 10;
    } else {
        throw InvalidInputError("unknown preset '" + name + "'");
    }
    return cfg;
}

}  // namespace spliceglm
