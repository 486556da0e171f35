#pragma once

#include <stdexcept>
#include <string>

namespace repeaterlab {

// A closed-form bound was requested outside its domain of validity
// (e.g. a negative square argument or nonpositive denominator).
struct bound_inapplicable_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A transcendental solve failed to bracket a sign change.
struct root_not_found_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid run configuration (bad flag/file values, unknown keys).
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct empty_stats_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace repeaterlab
