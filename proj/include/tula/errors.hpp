#pragma once

#include <stdexcept>
#include <string>

namespace tula {

/// A model or oracle parameter outside its admissible range.
struct InvalidParameter : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// An argument of the wrong shape (dimension mismatch, empty input, non-finite start).
struct InvalidArgument : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A combination of components that is not defined, e.g. partial taming on a non double-well model.
struct InvalidConfiguration : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// An experiment spec or config file rejected before any computation.
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NumericalFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The linear ULA recursion has no stationary variance for this step size.
struct InstabilityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InsufficientData : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace tula
