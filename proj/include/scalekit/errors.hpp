#pragma once

#include <stdexcept>

namespace scalekit {

// Precondition violations on operation arguments (bad dimensions, mode
// mismatches). The CLI maps these to exit code 2.
struct invalid_input : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Input files that cannot be parsed or whose rows fail validation.
struct data_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Fits called with too few or degenerate samples.
struct insufficient_data : data_error {
    using data_error::data_error;
};

// No optimizer initialization reached the convergence tolerance.
struct no_convergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace scalekit
