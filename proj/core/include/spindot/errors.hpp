#pragma once

#include <stdexcept>

namespace spindot {

/// Malformed config input (bad syntax, unknown key, invalid value).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parameters fall outside the validated weak-coupling regime.
struct RegimeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A time, window or step-size request violates an integrator/scenario contract.
struct ScheduleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace spindot
