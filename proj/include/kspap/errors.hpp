#pragma once

#include <stdexcept>
#include <string>

namespace kspap {

// Thrown when a grid or coefficient array does not match the domain layout.
struct SizeMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Thrown when two trajectories/signals live on different time grids.
struct GridMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// (-Delta + 0*I) cannot be inverted on fields with a nonzero mean mode.
struct NotInvertibleOnConstants : std::domain_error {
    NotInvertibleOnConstants()
        : std::domain_error("resolvent with gamma=0 requires a mean-zero field") {}
};

// Initial data for the IVP solver must have zero spatial mean.
struct MeanNotZero : std::domain_error {
    using std::domain_error::domain_error;
};

// Forcing sup-norm exceeds the admissible threshold f_max of the ledger.
struct ForcingTooLarge : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Picard iteration hit max_iter before reaching tolerance.
struct NoConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Decay-rate fit received fewer than the required usable samples.
struct InsufficientSamples : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Experiment/CLI configuration could not be parsed or validated.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace kspap
