#ifndef CONEWAVE_ERRORS_HPP
#define CONEWAVE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace conewave {

// Precondition / argument violations (bad nu, chart violation, ...).
class DomainError : public std::invalid_argument {
public:
    explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

// Bad run configuration (schema violation, CFL violation, missing file named
// by the config).  CLI exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A pipeline stage was asked to consume an upstream artifact that does not
// exist yet.  CLI exit code 3.
class MissingInputError : public std::runtime_error {
public:
    explicit MissingInputError(const std::string& what) : std::runtime_error(what) {}
};

// Numeric-stage failures (quadrature non-convergence, divergent Mellin
// integral, ill-conditioned fit, ...).  CLI exit code 4.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

class QuadratureError : public NumericError {
public:
    explicit QuadratureError(const std::string& what) : NumericError(what) {}
};

class ConvergenceError : public NumericError {
public:
    explicit ConvergenceError(const std::string& what) : NumericError(what) {}
};

class ConditioningError : public NumericError {
public:
    explicit ConditioningError(const std::string& what) : NumericError(what) {}
};

} // namespace conewave

#endif
