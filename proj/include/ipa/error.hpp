#pragma once

#include <stdexcept>
#include <string>

namespace ipa {

/// Base for every error raised by the audit library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Malformed input file or descriptor.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Well-formed input that violates a structural invariant.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Iterative routine failed to reach its tolerance.
class NumericalError : public Error {
public:
    using Error::Error;
};

}  // namespace ipa
