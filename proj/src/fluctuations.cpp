#include "eitcav/fluctuations.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

namespace eitcav {

namespace {

constexpr double kSpectrumFloor = 1e-14;

/// Symmetrized vacuum input spectral matrix: <{da, da+}>/2 per mode.
const Matrix4cd& vacuum_symmetrized() {
    static const Matrix4cd ns = [] {
        Matrix4cd m = Matrix4cd::Zero();
        m(0, 1) = m(1, 0) = 0.5;
        m(2, 3) = m(3, 2) = 0.5;
        return m;
    }();
    return ns;
}

double output_phase(const SteadyState& state, int field) {
    return field == 1 ? state.phi1_out : state.phi2_out;
}

double input_phase(const SteadyState& state, int field) {
    return field == 1 ? state.phi1_in : state.phi2_in;
}

void require_field_index(int field) {
    if (field != 1 && field != 2)
        throw DomainError("fluctuations: field index must be 1 or 2");
}

double real_pairing(const RowVector4cd& a_plus, const RowVector4cd& b_minus) {
    return spectral_pairing(a_plus, b_minus).real();
}

}  // namespace

RowVector4cd quadrature_row(int field, double phase) {
    require_field_index(field);
    RowVector4cd row = RowVector4cd::Zero();
    const int base = 2 * (field - 1);
    row(base) = std::polar(1.0, -phase);
    row(base + 1) = std::polar(1.0, phase);
    return row;
}

Complex spectral_pairing(const RowVector4cd& port_a_plus,
                         const RowVector4cd& port_b_minus) {
    return port_a_plus * vacuum_symmetrized() * port_b_minus.transpose();
}

ScatteringMatrix scattering_matrix(const DriftMatrix& drift, double omega) {
    if (!std::isfinite(omega))
        throw DomainError("scattering_matrix: omega must be finite");
    if (drift.state.stability == Stability::Unstable)
        throw DomainError(
            "scattering_matrix: fluctuation analysis needs a stable state");
    const Matrix4cd resolvent_arg =
        -kImag * omega * Matrix4cd::Identity() - drift.matrix;
    Eigen::FullPivLU<Matrix4cd> lu(resolvent_arg);
    if (!lu.isInvertible())
        throw SingularMatrix(
            "scattering_matrix: diverging response (marginal state at w = 0)");
    ScatteringMatrix out;
    out.omega = omega;
    out.theta = 2.0 * lu.inverse() - Matrix4cd::Identity();
    return out;
}

double squeezing_spectrum(const SteadyState& state, const DriftMatrix& drift,
                          const QuadratureSpec& quad, double omega) {
    require_field_index(quad.field);
    const double phase_abs = output_phase(state, quad.field) + quad.phase;
    const RowVector4cd row = quadrature_row(quad.field, phase_abs);
    const Matrix4cd theta_plus = scattering_matrix(drift, omega).theta;
    const Matrix4cd theta_minus = scattering_matrix(drift, -omega).theta;
    return real_pairing(row * theta_plus, row * theta_minus);
}

Matrix2d output_quadrature_covariance(const SteadyState& state,
                                      const DriftMatrix& drift, int field,
                                      double omega) {
    require_field_index(field);
    const double base_phase = output_phase(state, field);
    const RowVector4cd c0 = quadrature_row(field, base_phase);
    const RowVector4cd c90 = quadrature_row(field, base_phase + M_PI / 2.0);
    const Matrix4cd theta_plus = scattering_matrix(drift, omega).theta;
    const Matrix4cd theta_minus = scattering_matrix(drift, -omega).theta;
    const RowVector4cd f0_plus = c0 * theta_plus;
    const RowVector4cd f0_minus = c0 * theta_minus;
    const RowVector4cd f90_plus = c90 * theta_plus;
    const RowVector4cd f90_minus = c90 * theta_minus;
    Matrix2d cov;
    cov(0, 0) = real_pairing(f0_plus, f0_minus);
    cov(1, 1) = real_pairing(f90_plus, f90_minus);
    cov(0, 1) = cov(1, 0) = real_pairing(f0_plus, f90_minus);
    return cov;
}

BestSqueezing best_squeezing(const SteadyState& state, const DriftMatrix& drift,
                             int field, double omega) {
    const Matrix2d cov = output_quadrature_covariance(state, drift, field, omega);
    Eigen::SelfAdjointEigenSolver<Matrix2d> solver(cov);
    const auto& values = solver.eigenvalues();  // ascending
    const auto& vectors = solver.eigenvectors();
    BestSqueezing best;
    best.value = values(0);
    best.worst_value = values(1);
    double phase = std::atan2(vectors(1, 0), vectors(0, 0));
    if (phase < 0.0) phase += M_PI;
    if (phase >= M_PI) phase -= M_PI;
    best.phase = phase;
    best.worst_phase = phase + M_PI / 2.0;
    if (best.worst_phase >= M_PI) best.worst_phase -= M_PI;
    return best;
}

QndCoefficients qnd_coefficients(const SteadyState& state, const DriftMatrix& drift,
                                 const QndRoles& roles, double omega) {
    require_field_index(roles.meter);
    require_field_index(roles.signal);
    if (roles.meter == roles.signal)
        throw DomainError("qnd_coefficients: meter and signal must differ");

    const RowVector4cd x_in =
        quadrature_row(roles.signal, input_phase(state, roles.signal));
    const RowVector4cd x_out_row =
        quadrature_row(roles.signal, output_phase(state, roles.signal));
    const RowVector4cd y_out_row =
        quadrature_row(roles.meter, output_phase(state, roles.meter) + M_PI / 2.0);

    const Matrix4cd theta_plus = scattering_matrix(drift, omega).theta;
    const Matrix4cd theta_minus = scattering_matrix(drift, -omega).theta;
    const RowVector4cd x_out_plus = x_out_row * theta_plus;
    const RowVector4cd x_out_minus = x_out_row * theta_minus;
    const RowVector4cd y_out_plus = y_out_row * theta_plus;
    const RowVector4cd y_out_minus = y_out_row * theta_minus;

    const double s_in = real_pairing(x_in, x_in);
    const double s_out = real_pairing(x_out_plus, x_out_minus);
    const double s_y = real_pairing(y_out_plus, y_out_minus);
    if (s_in < kSpectrumFloor || s_out < kSpectrumFloor || s_y < kSpectrumFloor)
        throw DegenerateSpectrum("qnd_coefficients: denominator spectrum below " +
                                 std::to_string(kSpectrumFloor));

    const Complex in_out = spectral_pairing(x_in, x_out_minus);
    const Complex in_y = spectral_pairing(x_in, y_out_minus);
    const Complex out_y = spectral_pairing(x_out_plus, y_out_minus);

    QndCoefficients qnd;
    qnd.cs = std::norm(in_out) / (s_in * s_out);
    qnd.cm = std::norm(in_y) / (s_in * s_y);
    qnd.vsm = s_out * (1.0 - std::norm(out_y) / (s_out * s_y));
    return qnd;
}

void require_adiabatic(const ModelParams& params, bool allow_bad_cavity) {
    if (params.gamma_over_kappa < 5.0 && !allow_bad_cavity)
        throw DomainError(
            "fluctuation analysis outside the good-cavity regime "
            "(gamma/kappa < 5); pass the override to proceed");
}

}  // namespace eitcav
