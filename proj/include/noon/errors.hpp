#pragma once

#include <stdexcept>
#include <string>

namespace noon {

// Invalid state or parameter values (negative weights, broken trace, ...).
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Quadrature non-convergence, eigensolver stalls, non-finite intermediates.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

// Raised where the error-propagation denominator vanishes; sweeps catch this
// and skip the point instead of emitting infinities.
class PhaseInsensitiveError : public std::runtime_error {
public:
    explicit PhaseInsensitiveError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed sweep configuration.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace noon
