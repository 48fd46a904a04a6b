#include <CLI11.hpp>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <thread>

#include "spliceglm/errors.hpp"
#include "spliceglm/io.hpp"
#include "spliceglm/selector.hpp"
#include "spliceglm/simulate.hpp"

namespace {

using nlohmann::json;
using namespace spliceglm;

constexpr int kExitOk = 0;
constexpr int kExitBadInput = 2;
constexpr int kExitNumerical = 3;

long long parse_int(const std::string& s, const std::string& what) {
    long long v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw InvalidInputError("cannot parse '" + s + "' as an integer for " + what);
    return v;
}

double parse_real(const std::string& s, const std::string& what) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw InvalidInputError("cannot parse '" + s + "' as a number for " + what);
    return v;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const std::size_t comma = s.find(',', start);
        if (comma == std::string::npos) {
            out.push_back(s.substr(start));
            break;
        }
        out.push_back(s.substr(start, comma - start));
        start = comma + 1;
    }
    return out;
}

struct FitOptions {
    std::string input;
    std::string response;
    std::string family;
    std::optional<int> s_max;
    std::optional<int> k_max;
    std::optional<double> tau;
    std::optional<int> screen_size;
    bool no_screening = false;
    bool no_intercept = false;
    std::string output;
    bool quiet = false;
};

int run_fit(const FitOptions& opt) {
    const Family family = family_from_string(opt.family);
    const Table table = read_csv_table(opt.input);

    int y_col = -1;
    for (std::size_t j = 0; j < table.columns.size(); ++j)
        if (table.columns[j] == opt.response) y_col = static_cast<int>(j);
    if (y_col < 0)
        throw InvalidInputError("response column '" + opt.response + "' not found in '" +
                                opt.input + "'");

    const int n = static_cast<int>(table.values.rows());
    const int p = static_cast<int>(table.columns.size()) - 1;
    if (p < 2)
        throw InvalidInputError("need at least 2 predictor columns, got " + std::to_string(p));

    std::vector<std::string> names;
    Eigen::MatrixXd X(n, p);
    int col = 0;
    for (std::size_t j = 0; j < table.columns.size(); ++j) {
        if (static_cast<int>(j) == y_col) continue;
        names.push_back(table.columns[j]);
        X.col(col++) = table.values.col(j);
    }
    const Eigen::VectorXd y = table.values.col(y_col);

    if (family == Family::logistic && y.minCoeff() == y.maxCoeff())
        throw InvalidInputError("response column '" + opt.response +
                                "' is degenerate: constant response cannot be fit with the "
                                "logistic family");
    validate_response(family, y);

    if (n < 16 && !opt.tau)
        throw InvalidInputError("n = " + std::to_string(n) +
                                " is below 16; pass an explicit --tau for small samples");

    Dataset ds;
    try {
        ds = Dataset::from_raw(family, std::move(X), y);
    } catch (const DegenerateColumnError& e) {
        throw InvalidInputError("predictor column '" + names[e.column] +
                                "' is degenerate: zero norm");
    }

    SelectorConfig cfg;
    cfg.s_max = opt.s_max;
    if (opt.k_max) cfg.k_max = *opt.k_max;
    cfg.tau = opt.tau;
    cfg.screening = !opt.no_screening;
    cfg.screen_size = opt.screen_size;
    cfg.intercept = !opt.no_intercept;

    const FitResult fit = abess(ds, cfg);

    json out;
    out["family"] = family_name(family);
    out["n"] = n;
    out["p"] = p;
    out["config"] = {{"s_max", cfg.s_max ? json(*cfg.s_max) : json(resolve_s_max(n, p))},
                     {"k_max", cfg.k_max},
                     {"tau", cfg.tau ? json(*cfg.tau) : json()},
                     {"screening", cfg.screening},
                     {"intercept", cfg.intercept}};

    auto support_names = [&](const std::vector<int>& idx) {
        json arr = json::array();
        for (int j : idx) arr.push_back(names[j]);
        return arr;
    };

    const SizeFit& sel = fit.per_size[fit.selected_size - 1];
    json coef = json::object();
    for (int j : fit.selected.support)
        coef[names[j]] = fit.selected.beta[j] * ds.col_scale[j];
    out["selected"] = {{"size", fit.selected_size},
                       {"gic", sel.gic},
                       {"loss", sel.loss},
                       {"support", support_names(fit.selected.support)},
                       {"coefficients", coef}};
    if (fit.selected.intercept) out["selected"]["intercept"] = *fit.selected.intercept;

    json path = json::array();
    for (const SizeFit& e : fit.per_size) {
        json row = {{"size", e.size},
                    {"loss", e.failed ? json() : json(e.loss)},
                    {"gic", e.failed ? json() : json(e.gic)},
                    {"splicing_iters", e.splicing_iters},
                    {"failed", e.failed}};
        row["support"] = support_names(e.beta.support);
        path.push_back(std::move(row));
    }
    out["path"] = std::move(path);
    out["diagnostics"] = {{"sacrifice_evaluations", fit.sacrifice_evals}};

    const std::string text = out.dump(2) + "\n";
    if (opt.output.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(opt.output, std::ios::binary);
        if (!f) throw InvalidInputError("cannot write '" + opt.output + "'");
        f << text;
    }
    if (!opt.quiet)
        std::cerr << "selected " << fit.selected_size << " of " << p
                  << " predictors (gic " << format_double(sel.gic) << ")\n";
    return kExitOk;
}

struct SimulateOptions {
    std::string preset;
    std::string config_file;
    std::optional<int> replications;
    std::optional<std::uint64_t> seed;
    std::string n_grid;
    std::string output_dir = ".";
    std::optional<int> threads;
    bool timing = false;
    bool quiet = false;
};

ExperimentConfig config_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInputError("cannot open config '" + path + "'");
    ExperimentConfig cfg;
    cfg.solver.s_max = std::nullopt;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw InvalidInputError("config line " + std::to_string(lineno) +
                                    " is not key=value");
        const std::string key = line.substr(0, eq);
        const std::string val = line.substr(eq + 1);
        if (key == "family") {
            cfg.family = family_from_string(val);
        } else if (key == "p") {
            cfg.p = static_cast<int>(parse_int(val, key));
        } else if (key == "rho") {
            cfg.rho = parse_real(val, key);
        } else if (key == "pattern") {
            cfg.beta_pattern.clear();
            for (const std::string& tok : split_list(val))
                cfg.beta_pattern.push_back(parse_real(tok, key));
        } else if (key == "n_grid") {
            cfg.n_grid.clear();
            for (const std::string& tok : split_list(val))
                cfg.n_grid.push_back(static_cast<int>(parse_int(tok, key)));
        } else if (key == "replications") {
            cfg.replications = static_cast<int>(parse_int(val, key));
        } else if (key == "seed") {
            cfg.seed = static_cast<std::uint64_t>(parse_int(val, key));
        } else if (key == "sigma") {
            cfg.gaussian_sigma = parse_real(val, key);
        } else if (key == "s_max") {
            cfg.solver.s_max = static_cast<int>(parse_int(val, key));
        } else if (key == "k_max") {
            cfg.solver.k_max = static_cast<int>(parse_int(val, key));
        } else if (key == "tau") {
            cfg.solver.tau = parse_real(val, key);
        } else if (key == "screening") {
            cfg.solver.screening = parse_int(val, key) != 0;
        } else if (key == "screen_size") {
            cfg.solver.screen_size = static_cast<int>(parse_int(val, key));
        } else if (key == "intercept") {
            cfg.solver.intercept = parse_int(val, key) != 0;
        } else {
            throw InvalidInputError("unknown config key '" + key + "' on line " +
                                    std::to_string(lineno));
        }
    }
    if (cfg.p == 0 || cfg.beta_pattern.empty() || cfg.n_grid.empty())
        throw InvalidInputError("config must set p, pattern and n_grid");
    return cfg;
}

int run_simulate(const SimulateOptions& opt) {
    if (opt.preset.empty() == opt.config_file.empty())
        throw InvalidInputError("pass exactly one of --preset or --config");
    ExperimentConfig cfg =
        opt.preset.empty() ? config_from_file(opt.config_file) : preset_config(opt.preset);

    if (opt.replications) cfg.replications = *opt.replications;
    if (opt.seed) cfg.seed = *opt.seed;
    if (!opt.n_grid.empty()) {
        cfg.n_grid.clear();
        for (const std::string& tok : split_list(opt.n_grid))
            cfg.n_grid.push_back(static_cast<int>(parse_int(tok, "--n-grid")));
    }
    cfg.measure_runtime = opt.timing;

    const int threads = opt.threads
                            ? *opt.threads
                            : std::max(1u, std::thread::hardware_concurrency());
    if (threads < 1) throw InvalidInputError("--threads must be positive");

    std::filesystem::create_directories(opt.output_dir);
    const ExperimentResult res = run_experiment(cfg, threads);

    const std::string rep_path =
        (std::filesystem::path(opt.output_dir) / "replications.csv").string();
    const std::string agg_path =
        (std::filesystem::path(opt.output_dir) / "aggregate.csv").string();
    write_metrics_csv(rep_path, res.rows);
    write_aggregate_csv(agg_path, res.aggregates);

    if (!opt.quiet) {
        for (const AggregateRow& a : res.aggregates)
            std::cerr << "n=" << a.n << ": exact " << format_double(a.prob_exact)
                      << ", median re_err " << format_double(a.median_re_err) << "\n";
        std::cerr << "wrote " << rep_path << " and " << agg_path << "\n";
    }

    // Surface total failure as a numerical error so scripts can distinguish it.
    bool any_ok = false;
    for (const MetricsRow& r : res.rows) any_ok = any_ok || !r.failed;
    if (!any_ok) {
        std::cerr << "every replication failed\n";
        return kExitNumerical;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"best-subset GLM selection via splicing"};
    app.require_subcommand(1);

    FitOptions fo;
    CLI::App* fit = app.add_subcommand("fit", "fit a model to a CSV dataset");
    fit->add_option("--input", fo.input, "CSV file with a header row")->required();
    fit->add_option("--response", fo.response, "name of the response column")->required();
    fit->add_option("--family", fo.family, "gaussian, logistic or poisson")->required();
    fit->add_option("--s-max", fo.s_max, "largest support size to try");
    fit->add_option("--k-max", fo.k_max, "largest swap size per splicing step");
    fit->add_option("--tau", fo.tau, "splicing acceptance threshold");
    fit->add_option("--screen-size", fo.screen_size, "inactive pool size for screening");
    fit->add_flag("--no-screening", fo.no_screening, "disable importance screening");
    fit->add_flag("--no-intercept", fo.no_intercept, "fit without an intercept");
    fit->add_option("--output", fo.output, "write the JSON report here instead of stdout");
    fit->add_flag("--quiet", fo.quiet, "suppress progress messages on stderr");

    SimulateOptions so;
    CLI::App* sim = app.add_subcommand("simulate", "run a synthetic experiment grid");
    sim->add_option("--preset", so.preset,
                    "logistic-independent, logistic-constant, poisson-independent or "
                    "poisson-constant");
    sim->add_option("--config", so.config_file, "key=value experiment description");
    sim->add_option("--replications", so.replications, "replications per grid point");
    sim->add_option("--seed", so.seed, "base seed for the replication streams");
    sim->add_option("--n-grid", so.n_grid, "comma separated sample sizes");
    sim->add_option("--output-dir", so.output_dir, "directory for the CSV outputs");
    sim->add_option("--threads", so.threads, "worker threads (default: all cores)");
    sim->add_flag("--timing", so.timing,
                  "record wall time per replication (makes outputs nondeterministic)");
    sim->add_flag("--quiet", so.quiet, "suppress progress messages on stderr");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitBadInput;
    }

    try {
        if (fit->parsed()) return run_fit(fo);
        return run_simulate(so);
    } catch (const NumericalFailureError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    }
}
