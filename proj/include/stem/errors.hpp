#pragma once

#include <stdexcept>
#include <string>

namespace stem {

// Observation point coincides with a source filament.
struct SingularPointError : std::domain_error {
    using std::domain_error::domain_error;
};

// A physical quantity left the range the model is valid for.
struct ValidityError : std::domain_error {
    using std::domain_error::domain_error;
};

// Simulation state left the lumped model's validity range (|x| > 5 mm).
struct InstabilityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// No feasible design in the requested sweep region.
struct EmptyFeasibleSetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Requested design violates the volume envelope.
struct InfeasibleDesignError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Wire too thick for the coil cross-section.
struct ZeroTurnError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A step trace never reaches 90% of its steady value.
struct NoCrossingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed text input; carries the 1-based line number.
struct ParseError : std::runtime_error {
    ParseError(std::size_t line_no, const std::string& what_arg)
        : std::runtime_error("line " + std::to_string(line_no) + ": " + what_arg),
          line(line_no) {}
    std::size_t line;
};

} // namespace stem
