#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace eitcav {

using Complex = std::complex<double>;
using Eigen::Matrix2cd;
using Eigen::Matrix2d;
using Eigen::Matrix4cd;
using Eigen::Matrix4d;
using Eigen::RowVector4cd;
using Eigen::Vector2cd;
using Eigen::Vector4cd;
using Eigen::Vector4d;

inline constexpr Complex kImag{0.0, 1.0};

/// Inputs outside the admissible range of a formula (negative rate,
/// drive intensity out of the branch's domain, ...).
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Physical configuration violates the symmetric two-transition scheme.
struct AsymmetryError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Total intracavity intensity below the floor where the reduced
/// polarizations are defined.
struct SingularInput : std::domain_error {
    using std::domain_error::domain_error;
};

/// Newton/continuation failed to reach the residual tolerance.
struct NoConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Newton Jacobian numerically singular (typically at a fold).
struct SingularJacobian : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Resolvent (-i w I - A) not invertible; fluctuation response diverges.
struct SingularMatrix : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A correlation denominator spectrum fell below threshold.
struct DegenerateSpectrum : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid or inconsistent scenario configuration.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

}  // namespace eitcav
