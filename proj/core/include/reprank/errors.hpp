#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace reprank {

/// Base class for every error raised by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid configuration (bad lambda, tolerance, alpha, paths, ...). CLI exit code 2.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Malformed input data. Carries the 1-based line number when known. CLI exit code 3.
class ParseError : public Error {
public:
    explicit ParseError(const std::string& msg) : Error(msg), line_(0) {}
    ParseError(const std::string& msg, std::size_t line)
        : Error(msg + " (line " + std::to_string(line) + ")"), line_(line) {}

    /// 1-based line number of the offending record, 0 if not tied to a line.
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// A rating value outside the declared scale.
class RangeError : public ParseError {
public:
    using ParseError::ParseError;
};

/// A duplicate (user, item) pair; silently keeping either copy would corrupt results.
class IntegrityError : public ParseError {
public:
    using ParseError::ParseError;
};

/// A code with no entry in the configured mapping (e.g. an unknown age code).
class MappingError : public ParseError {
public:
    using ParseError::ParseError;
};

/// Numerical/domain failures: empty inputs, mismatched domains, ids out of range,
/// failed convergence where convergence is required. CLI exit code 4.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Audit-stage failures: empty classes, users without an attribute assignment,
/// harmonized reputations escaping ]0,1]. CLI exit code 4.
class AuditError : public Error {
public:
    using Error::Error;
};

} // namespace reprank
