#pragma once

#include <stdexcept>
#include <string>

namespace metaslab {

/// A quantity was requested outside the region where it is defined
/// (evanescent lead, critical interior in a closed form, zero flux, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Exponent growth inside an evanescent layer exceeded the representable range.
class NumericalRangeError : public std::range_error {
public:
    using std::range_error::range_error;
};

/// Malformed structure or configuration input.
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& what, int line = 0)
        : std::invalid_argument(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}

    int line() const noexcept { return line_; }

private:
    int line_;
};

} // namespace metaslab
