#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "spliceglm/errors.hpp"
#include "spliceglm/splicing.hpp"

using namespace spliceglm;

namespace {

// Loss increase measured by refitting without j, the quantity the backward
// sacrifice approximates.
double drop_cost(const Dataset& data, const std::vector<int>& active, int j) {
    std::vector<int> without;
    for (int a : active)
        if (a != j) without.push_back(a);
    NewtonConfig cfg;
    cfg.epsilon = 1e-10;
    cfg.max_iters = 200;
    const double with_j = restricted_mle(data, active, Coefficients::zeros(data.p()), cfg).loss;
    const double wo_j = restricted_mle(data, without, Coefficients::zeros(data.p()), cfg).loss;
    return wo_j - with_j;
}

}  // namespace

TEST_CASE("gaussian sacrifices reduce to closed forms") {
    std::mt19937 gen(11);
    auto inst = oracles::make_instance(Family::gaussian, 50, 6, {0, 2}, 1.5, gen);
    const ActiveModel model =
        fit_active_model(inst.data, {0, 2}, Coefficients::zeros(6));

    // gaussian Hessian diagonal is X_j'X_j = n after normalization
    const double n = inst.data.n();
    const SacrificeList xi = backward_sacrifices(inst.data, model);
    REQUIRE(xi.size() == 2);
    CHECK(xi[0].first == 0);
    CHECK(xi[0].second == doctest::Approx(n * model.beta.beta[0] * model.beta.beta[0]));
    CHECK(xi[1].first == 2);
    CHECK(xi[1].second == doctest::Approx(n * model.beta.beta[2] * model.beta.beta[2]));

    const SacrificeList zeta = forward_sacrifices(inst.data, model);
    REQUIRE(zeta.size() == 4);
    for (const auto& [j, value] : zeta) {
        CHECK(model.beta.beta[j] == 0.0);
        CHECK(value == doctest::Approx(model.grad[j] * model.grad[j] / n));
    }
}

TEST_CASE("a zero coefficient has zero backward sacrifice") {
    std::mt19937 gen(17);
    auto inst = oracles::make_instance(Family::logistic, 60, 5, {1}, 2.0, gen);
    ActiveModel model = fit_active_model(inst.data, {1, 3}, Coefficients::zeros(5));
    model.beta.beta[3] = 0.0;  // force the degenerate case
    const SacrificeList xi = backward_sacrifices(inst.data, model);
    REQUIRE(xi.size() == 2);
    CHECK(xi[1].first == 3);
    CHECK(xi[1].second == 0.0);
}

TEST_CASE("backward sacrifices track refit loss increases") {
    // on well-separated gaussian data the quadratic model is exact, so the
    // sacrifice ordering must match the refit ordering
    std::mt19937 gen(29);
    for (int rep = 0; rep < 5; ++rep) {
        auto inst = oracles::make_instance(Family::gaussian, 80, 6, {0, 1, 2}, 1.0, gen);
        const ActiveModel model =
            fit_active_model(inst.data, {0, 1, 2}, Coefficients::zeros(6));
        const SacrificeList xi = backward_sacrifices(inst.data, model);

        std::vector<std::pair<double, int>> by_xi, by_cost;
        for (const auto& [j, v] : xi) {
            by_xi.push_back({v, j});
            by_cost.push_back({drop_cost(inst.data, {0, 1, 2}, j), j});
        }
        std::sort(by_xi.begin(), by_xi.end());
        std::sort(by_cost.begin(), by_cost.end());
        // skip near-ties, the quadratic approximation cannot order those
        bool separated = true;
        for (size_t i = 1; i < by_cost.size(); ++i)
            if (by_cost[i].first < 1.1 * by_cost[i - 1].first) separated = false;
        if (!separated) continue;
        for (size_t i = 0; i < by_xi.size(); ++i) CHECK(by_xi[i].second == by_cost[i].second);
    }
}

TEST_CASE("forward sacrifices rank single-variable improvements") {
    // zeta_j approximates the loss drop from admitting j alone; validate the
    // ranking against one-dimensional golden-section minimization
    std::mt19937 gen(43);
    int checked = 0;
    for (int rep = 0; rep < 10; ++rep) {
        // one strong signal (5) left out of the active set, so a clear winner exists
        auto inst = oracles::make_instance(Family::logistic, 120, 8, {0, 5}, 1.5, gen);
        const ActiveModel model = fit_active_model(inst.data, {0}, Coefficients::zeros(8));
        const SacrificeList zeta = forward_sacrifices(inst.data, model);

        std::vector<std::pair<double, int>> by_zeta, by_gain;
        for (const auto& [j, v] : zeta) {
            by_zeta.push_back({v, j});
            Coefficients base = model.beta;
            auto along_j = [&](double t) {
                Coefficients c = base;
                c.beta[j] = t;
                c.refresh_support();
                return neg_log_likelihood(inst.data, c);
            };
            const double t = oracles::golden_minimize(along_j, -10.0, 10.0);
            by_gain.push_back({model.loss - along_j(t), j});
        }
        std::sort(by_zeta.rbegin(), by_zeta.rend());
        std::sort(by_gain.rbegin(), by_gain.rend());
        // compare only the clear winner, and only when it wins by 10% or more
        if (by_gain[0].first < 1.1 * by_gain[1].first) continue;
        CHECK(by_zeta[0].second == by_gain[0].second);
        ++checked;
    }
    CHECK(checked >= 5);
}

TEST_CASE("splice_sets picks extremes with index tie-breaks") {
    const SacrificeList xi = {{0, 3.0}, {2, 1.0}, {5, 1.0}, {7, 0.5}};
    const SacrificeList zeta = {{1, 2.0}, {3, 9.0}, {4, 2.0}, {6, 0.1}};

    auto [out1, in1] = splice_sets(xi, zeta, 1);
    CHECK(out1 == std::vector<int>{7});
    CHECK(in1 == std::vector<int>{3});

    // ties at xi=1.0 and zeta=2.0 resolve toward indices 2 and 1
    auto [out2, in2] = splice_sets(xi, zeta, 2);
    CHECK(out2 == std::vector<int>{2, 7});
    CHECK(in2 == std::vector<int>{1, 3});

    auto [out3, in3] = splice_sets(xi, zeta, 3);
    CHECK(out3 == std::vector<int>{2, 5, 7});
    CHECK(in3 == std::vector<int>{1, 3, 4});

    CHECK_THROWS_AS(splice_sets(xi, zeta, 0), InvalidInputError);
    CHECK_THROWS_AS(splice_sets(xi, zeta, 5), InvalidInputError);
}

TEST_CASE("orthogonal gaussian design selects the top correlations") {
    // with X'X = nI the size-s optimum is exactly the s largest |X'y|
    const int n = 64, p = 8;
    Eigen::MatrixXd X = Eigen::MatrixXd::Zero(n, p);
    // orthogonal columns from a Hadamard-like sign pattern
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < p; ++j) {
            int bits = i & (1 << j % 6);  // keep patterns distinct for p <= 8
            X(i, j) = ((i >> (j % 6)) & 1) ? 1.0 : -1.0;
            (void)bits;
        }
    // columns j and j+6 coincide for j >= 6; perturb to keep them distinct
    X.col(6) = X.col(0).cwiseProduct(X.col(1));
    X.col(7) = X.col(2).cwiseProduct(X.col(3));

    std::mt19937 gen(71);
    std::normal_distribution<double> noise(0.0, 0.3);
    Eigen::VectorXd y = 2.0 * X.col(1) - 1.2 * X.col(4) + 0.8 * X.col(6);
    for (int i = 0; i < n; ++i) y[i] += noise(gen);

    Dataset d = Dataset::from_raw(Family::gaussian, X, y);
    const Eigen::VectorXd score = (d.X.transpose() * d.y).cwiseAbs();
    std::vector<int> order(p);
    for (int j = 0; j < p; ++j) order[j] = j;
    std::sort(order.begin(), order.end(), [&](int a, int b) { return score[a] > score[b]; });

    SpliceConfig cfg;
    cfg.k_max = 3;
    const BessResult res = bess_glm(d, 3, {0, 2, 5}, cfg);
    std::vector<int> expect(order.begin(), order.begin() + 3);
    std::sort(expect.begin(), expect.end());
    CHECK(res.active == expect);
    CHECK(res.converged);
}

TEST_CASE("infinite threshold freezes the initial active set") {
    std::mt19937 gen(83);
    auto inst = oracles::make_instance(Family::gaussian, 50, 6, {0, 1}, 2.0, gen);
    SpliceConfig cfg;
    cfg.k_max = 2;
    cfg.tau = std::numeric_limits<double>::infinity();
    const BessResult res = bess_glm(inst.data, 2, {3, 4}, cfg);
    CHECK(res.active == std::vector<int>{3, 4});
    CHECK(res.converged);
    CHECK(res.outer_iters == 1);  // one sweep proves the fixed point
    CHECK(res.loss_path.size() == 1);
}

TEST_CASE("splicing matches exhaustive search on small instances") {
    std::mt19937 gen(97);
    int optimal = 0;
    const int total = 30;
    for (int rep = 0; rep < total; ++rep) {
        const Family family = rep % 2 == 0 ? Family::gaussian : Family::logistic;
        auto inst = oracles::make_instance(family, 150, 7, {0, 3, 6}, 1.5, gen);
        const auto oracle = oracles::exhaustive_best_subset(inst.data, 3);

        SpliceConfig cfg;
        cfg.k_max = 3;
        const BessResult res = bess_glm(inst.data, 3, sis_init(inst.data, 3), cfg);
        if (res.active == oracle.active)
            ++optimal;
        else
            // a missed optimum must still be within the acceptance threshold
            CHECK(res.loss <= oracle.loss + default_tau(3, 7, 150) + 1e-9);
    }
    CHECK(optimal >= 27);
}

TEST_CASE("splicing invariants hold across random instances") {
    std::mt19937 gen(113);
    for (int rep = 0; rep < 40; ++rep) {
        const Family family = Family(rep % 3);
        const int s = 1 + rep % 4;
        auto inst = oracles::make_instance(family, 100, 10, {0, 2, 4, 6}, 1.0, gen);

        SpliceConfig cfg;
        cfg.k_max = std::min(5, s);
        cfg.tau = default_tau(s, 10, 100);
        const BessResult res = bess_glm(inst.data, s, sis_init(inst.data, s), cfg);

        CHECK(res.converged);
        CHECK(res.outer_iters <= cfg.max_outer_iters);
        CHECK(static_cast<int>(res.active.size()) == s);
        CHECK(std::is_sorted(res.active.begin(), res.active.end()));
        // support of beta is confined to the reported active set
        for (int j : res.beta.support)
            CHECK(std::binary_search(res.active.begin(), res.active.end(), j));
        // every accepted splice lowered the loss by more than tau
        for (size_t i = 1; i < res.loss_path.size(); ++i)
            CHECK(res.loss_path[i - 1] - res.loss_path[i] > cfg.tau);
        CHECK(res.loss == doctest::Approx(res.loss_path.back()));
    }
}

TEST_CASE("bess_glm input guards") {
    std::mt19937 gen(5);
    auto inst = oracles::make_instance(Family::gaussian, 30, 5, {0}, 1.0, gen);
    SpliceConfig cfg;
    CHECK_THROWS_AS(bess_glm(inst.data, 0, {}, cfg), InvalidInputError);
    CHECK_THROWS_AS(bess_glm(inst.data, 6, {0, 1, 2, 3, 4}, cfg), InvalidInputError);
    CHECK_THROWS_AS(bess_glm(inst.data, 2, {0}, cfg), InvalidInputError);       // |A0| != s
    CHECK_THROWS_AS(bess_glm(inst.data, 2, {1, 0}, cfg), InvalidInputError);    // unsorted
    CHECK_THROWS_AS(bess_glm(inst.data, 2, {0, 0}, cfg), InvalidInputError);    // duplicate
    SpliceConfig bad = cfg;
    bad.tau = -1.0;
    CHECK_THROWS_AS(bess_glm(inst.data, 2, {0, 1}, bad), InvalidInputError);
    bad = cfg;
    bad.k_max = 0;
    CHECK_THROWS_AS(bess_glm(inst.data, 2, {0, 1}, bad), InvalidInputError);
    bad = cfg;
    bad.k_max = 3;  // exceeds s
    CHECK_THROWS_AS(bess_glm(inst.data, 2, {0, 1}, bad), InvalidInputError);
}

TEST_CASE("sis_init ranks gaussian coordinates by |X'y|") {
    std::mt19937 gen(131);
    auto inst = oracles::make_instance(Family::gaussian, 70, 9, {1, 4, 7}, 1.5, gen);
    const Eigen::VectorXd score = (inst.data.X.transpose() * inst.data.y).cwiseAbs();
    std::vector<int> order(9);
    for (int j = 0; j < 9; ++j) order[j] = j;
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return score[a] > score[b]; });

    for (int s : {1, 3, 5}) {
        std::vector<int> expect(order.begin(), order.begin() + s);
        std::sort(expect.begin(), expect.end());
        CHECK(sis_init(inst.data, s) == expect);
    }
    // s = p returns everything
    std::vector<int> all(9);
    for (int j = 0; j < 9; ++j) all[j] = j;
    CHECK(sis_init(inst.data, 9) == all);
}

TEST_CASE("sis_init logistic scores match univariate minimization") {
    std::mt19937 gen(139);
    auto inst = oracles::make_instance(Family::logistic, 90, 6, {0, 3}, 2.0, gen);

    std::vector<double> score(6);
    for (int j = 0; j < 6; ++j) {
        auto along_j = [&](double t) {
            Coefficients c = Coefficients::zeros(6);
            c.beta[j] = t;
            c.refresh_support();
            return neg_log_likelihood(inst.data, c);
        };
        double best = 0.0, best_loss = along_j(0.0);
        // locate the univariate minimizer by golden section on a wide bracket
        for (double lo : {-20.0, 0.0}) {
            const double t = oracles::golden_minimize(along_j, lo, lo + 20.0);
            if (along_j(t) < best_loss) {
                best = t;
                best_loss = along_j(t);
            }
        }
        score[j] = std::abs(best);
    }
    std::vector<int> order(6);
    for (int j = 0; j < 6; ++j) order[j] = j;
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return score[a] > score[b]; });

    std::vector<int> expect(order.begin(), order.begin() + 2);
    std::sort(expect.begin(), expect.end());
    CHECK(sis_init(inst.data, 2) == expect);
}

TEST_CASE("default_tau formula and guards") {
    CHECK(default_tau(10, 500, 3000) ==
          doctest::Approx(0.01 * 10 * std::log(500.0) * std::log(std::log(3000.0))));
    CHECK(default_tau(0, 500, 3000) == 0.0);
    CHECK(default_tau(1, 2, 16) > 0.0);
    CHECK_THROWS_AS(default_tau(1, 500, 15), InvalidInputError);
    CHECK_THROWS_AS(default_tau(1, 1, 3000), InvalidInputError);
    CHECK_THROWS_AS(default_tau(-1, 500, 3000), InvalidInputError);
}
