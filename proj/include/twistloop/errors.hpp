#pragma once

#include <stdexcept>
#include <string>

namespace twistloop {

// Bad user input: unparsable words, malformed files, flattening violations.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Data that parses but is inconsistent with what an operation needs.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain (t = 0, degenerate shapes).
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SolverFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace twistloop
