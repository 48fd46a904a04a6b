#pragma once

#include <string>

namespace spliceglm {

enum class Family { gaussian, logistic, poisson };

Family family_from_string(const std::string& name);
const char* family_name(Family family);

// Linear predictors are capped at this value for the poisson family before
// exponentiation, in the loss and all derivatives as well as in simulated
// responses, so fits and data generation see the same model.
inline constexpr double kPoissonThetaCap = 30.0;

// Cumulant b(theta): theta^2/2 (gaussian), log(1 + e^theta) (logistic),
// e^theta (poisson). Rejects non-finite theta.
double cumulant(Family family, double theta);

// b'(theta), the mean function.
double mean_function(Family family, double theta);

// b''(theta), the variance function. Nonnegative everywhere.
double variance_function(Family family, double theta);

}  // namespace spliceglm
