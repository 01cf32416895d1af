#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace lrsd {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Raised when operands have inconsistent shapes.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when input data contains NaN or infinite entries.
class InvalidInputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a scalar argument is outside its admissible range.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Raised on malformed or inconsistent configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when a numerical routine fails its residual check.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when a file cannot be read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline void require_finite(const ComplexMatrix& m, const std::string& who) {
    if (!m.allFinite()) {
        throw InvalidInputError(who + ": non-finite entries");
    }
}

inline void require_finite(const ComplexVector& v, const std::string& who) {
    if (!v.allFinite()) {
        throw InvalidInputError(who + ": non-finite entries");
    }
}

} // namespace lrsd
