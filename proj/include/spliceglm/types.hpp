#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

namespace spliceglm {

// A coefficient vector plus an optional unpenalized intercept. The support is
// kept equal to the exact nonzero pattern of beta; the intercept is never part
// of it.
struct Coefficients {
    Eigen::VectorXd beta;
    std::optional<double> intercept;
    std::vector<int> support;  // sorted 0-based indices with beta[j] != 0

    static Coefficients zeros(int p, bool with_intercept = false);
    static Coefficients from_beta(Eigen::VectorXd b,
                                  std::optional<double> icept = std::nullopt);

    // Recomputes support from beta. Call after mutating beta in place.
    void refresh_support();
};

}  // namespace spliceglm
