#pragma once

#include <stdexcept>
#include <string>

namespace truncft {

/// Bad arguments or inconsistent parameters (CLI maps this to exit code 3).
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Iteration caps hit, non-convergence and the like (CLI exit code 4).
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace truncft
