#include "spliceglm/types.hpp"

namespace spliceglm {

Coefficients Coefficients::zeros(int p, bool with_intercept) {
    Coefficients c;
    c.beta = Eigen::VectorXd::Zero(p);
    if (with_intercept) c.intercept = 0.0;
    return c;
}

Coefficients Coefficients::from_beta(Eigen::VectorXd b, std::optional<double> icept) {
    Coefficients c;
    c.beta = std::move(b);
    c.intercept = icept;
    c.refresh_support();
    return c;
}

void Coefficients::refresh_support() {
    support.clear();
    for (int j = 0; j < beta.size(); ++j)
        if (beta[j] != 0.0) support.push_back(j);
}

}  // namespace spliceglm
