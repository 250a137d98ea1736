#pragma once

#include <stdexcept>
#include <string>

namespace coxstab {

// Error taxonomy mirrored by the CLI exit codes: parse = 2, numerical = 3,
// contract = 4.

// Malformed or inconsistent input files.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Non-finite values, degenerate resamples and similar data-dependent failures.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Violated preconditions: bad dimensions, out-of-range hyperparameters.
struct ContractError : std::logic_error {
    using std::logic_error::logic_error;
};

}  // namespace coxstab
