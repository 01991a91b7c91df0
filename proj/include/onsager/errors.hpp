#pragma once

#include <stdexcept>
#include <string>

namespace onsager {

/// Argument outside the domain of a formula (z = 0 for a Hankel function,
/// the Onsager pole 2 eps + 1 = 0, an observation point inside the sphere).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// |Im z| beyond the range where exp(|Im z|) stays representable.
class OverflowError : public std::overflow_error {
public:
    using std::overflow_error::overflow_error;
};

/// A closed-form coefficient denominator collapsed to (numerically) zero.
class SingularDenominator : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The boundary-condition solve left a residual above tolerance.
class IllConditioned : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Adaptive quadrature did not reach the requested tolerance.
class QuadratureFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid sweep configuration. `where()` names the line or field at fault.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string where, const std::string& what)
        : std::runtime_error(where + ": " + what), where_(std::move(where)) {}

    [[nodiscard]] const std::string& where() const noexcept { return where_; }

private:
    std::string where_;
};

}  // namespace onsager
