#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace spliceglm {

// Malformed or inconsistent caller input (dimensions, guards, flags).
struct InvalidInputError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A design column that cannot be scaled to squared norm n.
struct DegenerateColumnError : InvalidInputError {
    DegenerateColumnError(int col, const std::string& msg)
        : InvalidInputError(msg), column(col) {}
    int column;  // 0-based index of the offending column
};

// The solver could not produce a usable fit; carries the active set it was on.
struct NumericalFailureError : std::runtime_error {
    NumericalFailureError(std::vector<int> act, const std::string& msg)
        : std::runtime_error(msg), active(std::move(act)) {}
    std::vector<int> active;
};

}  // namespace spliceglm
