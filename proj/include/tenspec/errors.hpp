#pragma once

#include <stdexcept>
#include <string>

namespace tenspec {

struct ShapeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

struct SymmetryError : DomainError {
    using DomainError::DomainError;
};

// hypothesis of a theorem not met by the input
struct HypothesisError : DomainError {
    using DomainError::DomainError;
};

struct CapabilityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConvergenceError : std::runtime_error {
    ConvergenceError(const std::string& what, double lower, double upper, std::size_t iterations)
        : std::runtime_error(what), lower(lower), upper(upper), iterations(iterations) {}
    double lower;
    double upper;
    std::size_t iterations;
};

}  // namespace tenspec
