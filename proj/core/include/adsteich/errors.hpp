#pragma once

#include <stdexcept>
#include <string>

namespace ats {

// Thrown when an element fails a geometric classification test
// (e.g. asking for the translation length of an elliptic element).
struct classification_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Geometric precondition violations (point on the wrong side, degenerate
// line data, non-spacelike segment, ...).
struct geom_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Parameter out of documented range.
struct range_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Enumeration budget exhausted before a count stabilized.
struct budget_error : std::runtime_error {
    budget_error(const std::string& what, long partial)
        : std::runtime_error(what), partial_count(partial) {}
    long partial_count;
};

// Iterative solver failed to converge; carries the best residual found.
struct convergence_error : std::runtime_error {
    convergence_error(const std::string& what, double residual)
        : std::runtime_error(what), best_residual(residual) {}
    double best_residual;
};

// Experiment spec validation failure; carries the offending field path.
struct validation_error : std::runtime_error {
    validation_error(const std::string& field, const std::string& what)
        : std::runtime_error(field + ": " + what), field_path(field) {}
    std::string field_path;
};

// Internal consistency failure: a state the implementation promises
// cannot happen for valid inputs.
struct internal_error : std::logic_error {
    using std::logic_error::logic_error;
};

} // namespace ats
