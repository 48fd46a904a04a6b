#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "spliceglm/rng.hpp"
#include "spliceglm/selector.hpp"

namespace spliceglm {

struct ExperimentConfig {
    Family family = Family::gaussian;
    int p = 0;
    double rho = 0.0;  // pairwise design correlation; 0 means independent columns
    std::vector<double> beta_pattern;  // nonzero values, placed at equi-spaced indices
    std::vector<int> n_grid;
    int replications = 50;
    std::uint64_t seed = 1;
    double gaussian_sigma = 1.0;  // response noise level, gaussian family only
    bool measure_runtime = false;  // wall time breaks byte-level reproducibility
    SelectorConfig solver{};
};

// One CSV row per (n, replication).
struct MetricsRow {
    std::string family;
    int n = 0;
    int p = 0;
    double rho = 0.0;
    int replication = 0;
    int covered_active = 0;    // true support contained in the estimate
    int covered_inactive = 0;  // estimate contained in the true support
    int exact = 0;
    double re_err = 0.0;  // ||beta_hat - beta*||_2 / ||beta*||_2, original scale
    int selected_size = 0;
    double runtime_seconds = 0.0;  // abess call only; 0 when timing is off
    int failed = 0;
};

struct AggregateRow {
    std::string family;
    int n = 0;
    int p = 0;
    double rho = 0.0;
    double prob_cover_active = 0.0;
    double prob_cover_inactive = 0.0;
    double prob_exact = 0.0;
    double median_re_err = 0.0;
    double mean_runtime_seconds = 0.0;
    int replications = 0;
};

// Rows of X drawn i.i.d. from N(0, Sigma) with unit variances and constant
// pairwise correlation rho: x = sqrt(rho) * z0 * 1 + sqrt(1 - rho) * z.
// rho = 0 skips the shared draw.
Eigen::MatrixXd generate_design(int n, int p, double rho, Rng& rng);

// Nonzero values from pattern placed at 0-based indices
// floor(1 + (t - 1) * p / k) - 1 for t = 1..k, k = |pattern|.
Coefficients place_true_beta(int p, const std::vector<double>& pattern);

// Response draws on the raw (unnormalized) design: gaussian adds
// N(0, sigma^2) noise, logistic draws Bernoulli(sigmoid(theta)), poisson
// draws Poisson(exp(theta)) with theta capped like the fitting side.
Eigen::VectorXd simulate_response(const Eigen::MatrixXd& X, const Coefficients& beta_star,
                                  Family family, Rng& rng, double gaussian_sigma = 1.0);

struct ExperimentResult {
    std::vector<MetricsRow> rows;  // sorted by (n, replication)
    std::vector<AggregateRow> aggregates;
    std::vector<Eigen::VectorXd> beta_hats;  // original-scale estimate per row
    Eigen::VectorXd beta_star;
};

// Runs the full grid. Replications may run on several threads; each one owns
// the stream derived from (seed, n, replication), so the output is identical
// for every thread count. A replication whose solve throws is kept as a
// flagged row with the null-model relative error.
ExperimentResult run_experiment(const ExperimentConfig& cfg, int threads = 1);

void write_metrics_csv(const std::string& path, const std::vector<MetricsRow>& rows);
void write_aggregate_csv(const std::string& path, const std::vector<AggregateRow>& rows);

// Built-in experiment configurations: logistic-independent, logistic-constant,
// poisson-independent, poisson-constant.
ExperimentConfig preset_config(const std::string& name);

}  // namespace spliceglm
