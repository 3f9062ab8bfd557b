#pragma once

#include <stdexcept>
#include <string>

namespace rmt {

// Invalid parameters or geometrically impossible requests (bad contours,
// delta >= alpha, pi outside its admissible interval, ...).
struct domain_error : std::domain_error {
    using std::domain_error::domain_error;
};

// Quadrature failed to reach its accuracy contract after full escalation.
struct accuracy_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Non-finite intermediate value (overflow, failed eigensolve, NaN sample).
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace rmt
