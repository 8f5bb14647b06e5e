#include "eitcav/model.hpp"

#include <cmath>

namespace eitcav {

namespace {

constexpr double kPolarizationFloor = 1e-30;
constexpr double kSymmetryRelTol = 1e-9;

bool close_rel(double a, double b, double tol) {
    const double scale = std::max({std::abs(a), std::abs(b), 1.0});
    return std::abs(a - b) <= tol * scale;
}

}  // namespace

void validate(const ModelParams& params) {
    if (!std::isfinite(params.epsilon) || params.epsilon <= 0.0)
        throw DomainError("ModelParams: epsilon must be finite and > 0");
    if (!std::isfinite(params.cooperativity) || params.cooperativity < 0.0)
        throw DomainError("ModelParams: cooperativity must be finite and >= 0");
    if (!std::isfinite(params.theta1) || !std::isfinite(params.theta2))
        throw DomainError("ModelParams: cavity detunings must be finite");
    if (!std::isfinite(params.gamma_over_kappa) || params.gamma_over_kappa <= 0.0)
        throw DomainError("ModelParams: gamma_over_kappa must be finite and > 0");
}

std::vector<std::string> validity_warnings(const ModelParams& params) {
    std::vector<std::string> warnings;
    if (params.gamma_over_kappa < 5.0)
        warnings.push_back(
            "gamma/kappa = " + std::to_string(params.gamma_over_kappa) +
            " < 5: atomic variables may not follow the fields adiabatically");
    if (params.epsilon > 0.5)
        warnings.push_back(
            "epsilon = " + std::to_string(params.epsilon) +
            " > 0.5: first-order polarization expansion strained");
    return warnings;
}

void validate(const DriveSpec& drive) {
    if (!std::isfinite(drive.intensity) || drive.intensity < 0.0)
        throw DomainError("DriveSpec: intensity Y must be finite and >= 0");
    if (!std::isfinite(drive.phase1) || !std::isfinite(drive.phase2))
        throw DomainError("DriveSpec: input phases must be finite");
}

double intensity_scale(const ModelParams& params) {
    const double scale = 4.0 * params.cooperativity * params.epsilon;
    return scale > 0.0 ? scale : 1.0;
}

double input_amplitude_modulus(const ModelParams& params, const DriveSpec& drive) {
    return std::sqrt(intensity_scale(params) * drive.intensity);
}

Complex input_amplitude(const ModelParams& params, const DriveSpec& drive, int field) {
    const double modulus = input_amplitude_modulus(params, drive);
    const double phase = (field == 1) ? drive.phase1 : drive.phase2;
    return std::polar(modulus, phase);
}

std::string to_string(BranchLabel label) {
    switch (label) {
        case BranchLabel::SymmetricPlus: return "symmetric_plus";
        case BranchLabel::SymmetricMinus: return "symmetric_minus";
        case BranchLabel::SymmetricLow: return "symmetric_low";
        case BranchLabel::AsymmetricA: return "asymmetric_a";
        case BranchLabel::AsymmetricB: return "asymmetric_b";
        case BranchLabel::Continued: return "continued";
    }
    return "continued";
}

std::string to_string(Stability stability) {
    switch (stability) {
        case Stability::Stable: return "stable";
        case Stability::Unstable: return "unstable";
        case Stability::Marginal: return "marginal";
        case Stability::Unknown: return "unknown";
    }
    return "unknown";
}

std::pair<ModelParams, DriveSpec> normalize_params(const PhysicalParams& p) {
    if (p.atom_number <= 0.0)
        throw DomainError("normalize_params: atom number must be > 0");
    for (double rate : {p.g1, p.g2, p.gamma1, p.gamma2, p.kappa1, p.kappa2})
        if (!(rate > 0.0))
            throw DomainError("normalize_params: rates must be strictly positive");
    for (double t : {p.transmissivity1, p.transmissivity2})
        if (!(t > 0.0 && t <= 1.0))
            throw DomainError("normalize_params: transmissivities must lie in (0, 1]");

    if (!close_rel(p.gamma1, p.gamma2, kSymmetryRelTol))
        throw AsymmetryError("normalize_params: gamma_1 != gamma_2");
    if (!close_rel(p.kappa1, p.kappa2, kSymmetryRelTol))
        throw AsymmetryError("normalize_params: kappa_1 != kappa_2");
    if (!close_rel(p.g1, p.g2, kSymmetryRelTol))
        throw AsymmetryError("normalize_params: g_1 != g_2");

    const double gamma_w = 0.5 * (p.gamma1 + p.gamma2);
    const double kappa = 0.5 * (p.kappa1 + p.kappa2);
    const double g = 0.5 * (p.g1 + p.g2);

    const double epsilon1 = (p.omega_a1 - p.omega1) / gamma_w;
    const double epsilon2 = (p.omega2 - p.omega_a2) / gamma_w;
    if (std::abs(epsilon1 - epsilon2) > kSymmetryRelTol)
        throw AsymmetryError("normalize_params: atomic detunings not symmetric");
    const double epsilon = 0.5 * (epsilon1 + epsilon2);
    if (epsilon <= 0.0)
        throw DomainError("normalize_params: epsilon must be > 0");

    ModelParams params;
    params.epsilon = epsilon;
    params.cooperativity = g * g * p.atom_number / (gamma_w * kappa);
    params.theta1 = (p.omega_c1 - p.omega1) / p.kappa1;
    params.theta2 = (p.omega_c2 - p.omega2) / p.kappa2;
    params.gamma_over_kappa = gamma_w / kappa;
    validate(params);

    // y_j = (sqrt(2) g / gamma_w) (2 / sqrt(T_j)) E_j^in
    const double y1 = std::sqrt(2.0) * g / gamma_w * 2.0 /
                      std::sqrt(p.transmissivity1) * p.e_in1;
    const double y2 = std::sqrt(2.0) * g / gamma_w * 2.0 /
                      std::sqrt(p.transmissivity2) * p.e_in2;
    if (!close_rel(std::abs(y1), std::abs(y2), kSymmetryRelTol))
        throw AsymmetryError("normalize_params: |y_1| != |y_2|");
    const double y_mod = 0.5 * (std::abs(y1) + std::abs(y2));

    DriveSpec drive;
    drive.intensity = y_mod * y_mod / (4.0 * params.cooperativity * params.epsilon);
    drive.phase1 = (y1 < 0.0) ? M_PI : 0.0;
    drive.phase2 = (y2 < 0.0) ? M_PI : 0.0;
    return {params, drive};
}

Polarizations reduced_polarizations(Complex x1, Complex x2, double epsilon) {
    const double s = std::norm(x1) + std::norm(x2);
    if (s < kPolarizationFloor)
        throw SingularInput(
            "reduced_polarizations: total intensity below expansion floor");
    const double s2 = s * s;
    Polarizations p;
    p.v = kImag * (4.0 * epsilon) * x1 * std::norm(x2) / s2;
    p.w = -kImag * (4.0 * epsilon) * x2 * std::norm(x1) / s2;
    return p;
}

std::pair<Complex, Complex> steady_residual(const SteadyState& state,
                                            const ModelParams& params,
                                            const DriveSpec& drive) {
    validate(params);
    validate(drive);
    const Complex y1 = input_amplitude(params, drive, 1);
    const Complex y2 = input_amplitude(params, drive, 2);
    const Complex cavity1 = (1.0 + kImag * params.theta1) * state.x1;
    const Complex cavity2 = (1.0 + kImag * params.theta2) * state.x2;

    Polarizations p;  // zero for a dark cavity or with the medium decoupled
    const double s = std::norm(state.x1) + std::norm(state.x2);
    if (params.cooperativity > 0.0 && s != 0.0)
        p = reduced_polarizations(state.x1, state.x2, params.epsilon);

    const double two_c = 2.0 * params.cooperativity;
    return {cavity1 + two_c * p.v - y1, cavity2 + two_c * p.w - y2};
}

PhaseSet io_phases(const SteadyState& state) {
    PhaseSet phases;
    switch (state.branch) {
        case BranchLabel::SymmetricLow:
            phases.phi1_in = M_PI / 2.0;
            phases.phi2_in = -M_PI / 2.0;
            break;
        case BranchLabel::AsymmetricA:
        case BranchLabel::AsymmetricB: {
            if (state.i1 <= 0.0 || state.i2 <= 0.0)
                throw DomainError("io_phases: asymmetric phases need I1, I2 > 0");
            phases.phi1_in = std::atan(std::sqrt(state.i2 / state.i1));
            phases.phi2_in = -std::atan(std::sqrt(state.i1 / state.i2));
            break;
        }
        default: {
            const double intensity = 0.5 * (state.i1 + state.i2);
            if (intensity <= 0.0)
                throw DomainError("io_phases: symmetric phases need I > 0");
            phases.phi1_in = std::atan(1.0 / (2.0 * intensity));
            phases.phi2_in = -phases.phi1_in;
            break;
        }
    }
    phases.phi1_out = -phases.phi1_in;
    phases.phi2_out = -phases.phi2_in;
    return phases;
}

namespace {

SteadyState make_theta0_state(double i1, double i2, BranchLabel label,
                              const ModelParams& params) {
    SteadyState s;
    s.i1 = i1;
    s.i2 = i2;
    s.branch = label;
    const double scale = intensity_scale(params);
    s.x1 = Complex(std::sqrt(scale * i1), 0.0);
    s.x2 = Complex(std::sqrt(scale * i2), 0.0);
    const PhaseSet phases = io_phases(s);
    s.phi1_in = phases.phi1_in;
    s.phi2_in = phases.phi2_in;
    s.phi1_out = phases.phi1_out;
    s.phi2_out = phases.phi2_out;
    return s;
}

}  // namespace

std::vector<SteadyState> analytic_steady_theta0(double intensity_y,
                                                const ModelParams& params) {
    validate(params);
    if (!(intensity_y > 0.0))
        throw DomainError("analytic_steady_theta0: Y must be > 0");
    if (params.theta1 != 0.0 || params.theta2 != 0.0)
        throw DomainError("analytic_steady_theta0: requires theta1 = theta2 = 0");
    if (params.cooperativity <= 0.0)
        throw DomainError("analytic_steady_theta0: requires a coupled medium");

    std::vector<SteadyState> states;
    const double y = intensity_y;
    if (y > 1.0) {
        const double root = std::sqrt(1.0 - 1.0 / (y * y));
        const double i_plus = 0.5 * y * (1.0 + root);
        const double i_minus = 0.5 * y * (1.0 - root);
        states.push_back(
            make_theta0_state(i_plus, i_plus, BranchLabel::SymmetricPlus, params));
        states.push_back(
            make_theta0_state(i_minus, i_minus, BranchLabel::SymmetricMinus, params));
    } else if (y == 1.0) {
        SteadyState fold =
            make_theta0_state(0.5, 0.5, BranchLabel::SymmetricPlus, params);
        fold.stability = Stability::Marginal;
        states.push_back(fold);
    } else {
        if (y > 0.5) {
            SteadyState low = make_theta0_state(0.25 / y, 0.25 / y,
                                                BranchLabel::SymmetricLow, params);
            low.approximate = true;
            states.push_back(low);
        }
        const double eta = std::sqrt(1.0 - y * y);
        const double i_high = 0.5 * y * (1.0 + eta);
        const double i_low = 0.5 * y * (1.0 - eta);
        states.push_back(
            make_theta0_state(i_high, i_low, BranchLabel::AsymmetricA, params));
        states.push_back(
            make_theta0_state(i_low, i_high, BranchLabel::AsymmetricB, params));
    }
    return states;
}

}  // namespace eitcav
