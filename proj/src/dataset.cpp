#include "spliceglm/dataset.hpp"

#include <cmath>
#include <string>

#include "spliceglm/errors.hpp"

namespace spliceglm {

NormalizedDesign normalize(const Eigen::MatrixXd& raw) {
    const int n = static_cast<int>(raw.rows());
    const int p = static_cast<int>(raw.cols());
    if (n < 1 || p < 1) throw InvalidInputError("normalize: design must be nonempty");
    if (!raw.allFinite()) throw InvalidInputError("normalize: design has non-finite entries");

    NormalizedDesign out;
    out.design = raw;
    out.col_scale.resize(p);
    const double target = std::sqrt(static_cast<double>(n));
    for (int j = 0; j < p; ++j) {
        const double norm = raw.col(j).norm();
        if (norm == 0.0)
            throw DegenerateColumnError(
                j, "normalize: column " + std::to_string(j) + " has zero norm");
        const double scale = target / norm;
        out.design.col(j) *= scale;
        out.col_scale[j] = scale;
    }
    return out;
}

void validate_response(Family family, const Eigen::VectorXd& y) {
    for (int i = 0; i < y.size(); ++i) {
        const double v = y[i];
        if (!std::isfinite(v))
            throw InvalidInputError("response row " + std::to_string(i) + " is not finite");
        switch (family) {
            case Family::gaussian:
                break;
            case Family::logistic:
                if (v != 0.0 && v != 1.0)
                    throw InvalidInputError("logistic response row " + std::to_string(i) +
                                            " is not 0 or 1");
                break;
            case Family::poisson:
                if (v < 0.0 || v != std::floor(v))
                    throw InvalidInputError("poisson response row " + std::to_string(i) +
                                            " is not a nonnegative integer");
                break;
        }
    }
}

Dataset Dataset::from_raw(Family family, Eigen::MatrixXd raw_X, Eigen::VectorXd y) {
    if (raw_X.rows() != y.size())
        throw InvalidInputError("design has " + std::to_string(raw_X.rows()) +
                                " rows but response has " + std::to_string(y.size()));
    validate_response(family, y);
    NormalizedDesign nd = normalize(raw_X);
    Dataset ds;
    ds.family = family;
    ds.X = std::move(nd.design);
    ds.y = std::move(y);
    ds.col_scale = std::move(nd.col_scale);
    return ds;
}

}  // namespace spliceglm
