#pragma once

#include <stdexcept>
#include <string>

namespace xcfb {

// Shape / size mismatch (empty matrix, antenna count, list length).
struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Rank-deficient system passed to a solver that needs full column rank.
struct SingularSystemError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input outside the operation's domain (non-HPD matrix, negative DoF, ...).
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// Per-transmitter power constraint violated.
struct ConstraintError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Operation requested in the wrong mode (e.g. rate analysis of a noiseless run).
struct ModeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad experiment configuration (unknown key, missing file, invalid parameters).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace xcfb
