#pragma once

#include <stdexcept>
#include <string>

namespace loancost {

/// Thrown when a domain object is constructed from values that break its invariants.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A strategy prescribes a payment rate outside [m(t), M(t)].
class AdmissibilityError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Inputs are well-formed but outside the domain of the requested operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Requested discretization exceeds the documented caps.
class ResourceLimitError : public std::length_error {
public:
    using std::length_error::length_error;
};

/// Internal numerical failure (e.g. a root that should be bracketed is not).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace loancost
