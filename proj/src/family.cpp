#include "spliceglm/family.hpp"

#include <cmath>

#include "spliceglm/errors.hpp"

namespace spliceglm {

Family family_from_string(const std::string& name) {
    if (name == "gaussian") return Family::gaussian;
    if (name == "logistic") return Family::logistic;
    if (name == "poisson") return Family::poisson;
    throw InvalidInputError("unknown family '" + name +
                            "' (expected gaussian, logistic or poisson)");
}

const char* family_name(Family family) {
    switch (family) {
        case Family::gaussian: return "gaussian";
        case Family::logistic: return "logistic";
        case Family::poisson: return "poisson";
    }
    return "?";
}

double cumulant(Family family, double theta) {
    if (!std::isfinite(theta)) throw InvalidInputError("cumulant: theta is not finite");
    switch (family) {
        case Family::gaussian:
            return 0.5 * theta * theta;
        case Family::logistic:
            // log(1 + e^theta) without overflow for large |theta|
            return std::max(theta, 0.0) + std::log1p(std::exp(-std::abs(theta)));
        case Family::poisson:
            return std::exp(std::min(theta, kPoissonThetaCap));
    }
    return 0.0;
}

double mean_function(Family family, double theta) {
    if (!std::isfinite(theta)) throw InvalidInputError("mean_function: theta is not finite");
    switch (family) {
        case Family::gaussian:
            return theta;
        case Family::logistic:
            // sigmoid, evaluated on the side that keeps the exponent negative
            if (theta >= 0.0) return 1.0 / (1.0 + std::exp(-theta));
            {
                const double e = std::exp(theta);
                return e / (1.0 + e);
            }
        case Family::poisson:
            return std::exp(std::min(theta, kPoissonThetaCap));
    }
    return 0.0;
}

double variance_function(Family family, double theta) {
    if (!std::isfinite(theta)) throw InvalidInputError("variance_function: theta is not finite");
    switch (family) {
        case Family::gaussian:
            return 1.0;
        case Family::logistic: {
            const double m = mean_function(Family::logistic, theta);
            return m * (1.0 - m);
        }
        case Family::poisson:
            return std::exp(std::min(theta, kPoissonThetaCap));
    }
    return 0.0;
}

}  // namespace spliceglm
