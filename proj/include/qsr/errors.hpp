#pragma once

#include <stdexcept>
#include <string>

namespace qsr {

// Input violates an operation precondition (bad dimension, bad parameter range).
struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Exact computation would exceed the configured state/enumeration budget.
struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A documented contract between modules was violated (e.g. nontrivial residual
// syndrome handed to residual_class, class map missing a syndrome).
struct ContractError : std::logic_error {
    using std::logic_error::logic_error;
};

// Estimator input became empty (empty batch, nothing survives a discard stage).
struct EmptyInputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace qsr
