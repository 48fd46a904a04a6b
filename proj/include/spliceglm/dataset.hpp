#pragma once

#include <Eigen/Dense>

#include "spliceglm/family.hpp"

namespace spliceglm {

struct NormalizedDesign {
    Eigen::MatrixXd design;     // each column scaled to squared norm n
    Eigen::VectorXd col_scale;  // beta_original[j] = beta_normalized[j] * col_scale[j]
};

// Scales every column of raw to squared norm n. A column with zero norm is
// unusable and raises DegenerateColumnError carrying its index.
NormalizedDesign normalize(const Eigen::MatrixXd& raw);

// Response sanity per family: finite everywhere; {0,1} for logistic;
// nonnegative integers for poisson. Raises InvalidInputError.
void validate_response(Family family, const Eigen::VectorXd& y);

// Fitting-ready data: normalized design, response, and the scale factors that
// map coefficients back to the raw design.
struct Dataset {
    Family family = Family::gaussian;
    Eigen::MatrixXd X;  // n x p, every column has squared norm n
    Eigen::VectorXd y;
    Eigen::VectorXd col_scale;

    int n() const { return static_cast<int>(X.rows()); }
    int p() const { return static_cast<int>(X.cols()); }

    static Dataset from_raw(Family family, Eigen::MatrixXd raw_X, Eigen::VectorXd y);
};

}  // namespace spliceglm
