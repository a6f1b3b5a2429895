#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ppsv {

/// Out-of-range numeric parameter (epsilon, delta, workers, generator knobs).
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A value in a sample stream or input file violates its contract.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed scenario document. Carries a 1-based line/column when the
/// failure is syntactic.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
        : std::runtime_error(what), line_(line), column_(column) {}
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// Scenario failed validation; holds every violation found.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(std::vector<std::string> violations);
    const std::vector<std::string>& violations() const noexcept { return violations_; }

private:
    std::vector<std::string> violations_;
};

/// The exact oracle only handles discrete deviation models.
class OracleInapplicable : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Convolution support or some other bounded resource blew its guard.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A worker failed while producing samples for a task.
class RunError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace ppsv
