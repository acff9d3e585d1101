#pragma once

#include <stdexcept>
#include <string>

namespace iaq {

// Error taxonomy mirrored by the CLI exit codes: 2 usage, 3 data, 4 numerical.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed or contradictory input data (CSV rows, config files, series shape).
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Failure of a numerical procedure (singular operator, divergent candidate, ...).
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ExitCode : int {
    Ok = 0,
    Usage = 2,
    Data = 3,
    Numerical = 4,
};

} // namespace iaq
