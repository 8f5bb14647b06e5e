#pragma once

#include <utility>
#include <vector>

#include "eitcav/types.hpp"

namespace eitcav {

// Normalized units used throughout:
//   - atomic detunings in units of gamma_w (mean optical-coherence decay),
//   - cavity detunings and fluctuation frequencies in units of kappa,
//   - time in units of 1/kappa,
//   - field amplitudes x_j, y_j dimensionless; rescaled intensities
//     I_j = |x_j|^2 / (4 C epsilon) and Y = |y|^2 / (4 C epsilon).
// Intracavity amplitudes are kept in the gauge where x_j is real and
// nonnegative; input/output phases are stored relative to that gauge.

/// Dimensionless constants of one symmetric two-mode configuration.
struct ModelParams {
    double epsilon = 0.0625;       ///< common atomic detuning, > 0
    double cooperativity = 250.0;  ///< C, common to both transitions, > 0
    double theta1 = 0.0;           ///< cavity detuning of mode 1 (kappa units)
    double theta2 = 0.0;           ///< cavity detuning of mode 2 (kappa units)
    double gamma_over_kappa = 10.0;  ///< validity bookkeeping only
};

/// Throws DomainError unless epsilon > 0 and cooperativity >= 0 and all
/// entries are finite. cooperativity == 0 is the decoupled (empty cavity)
/// limit and is accepted.
void validate(const ModelParams& params);

/// Human-readable warnings when the adiabatic / weak-detuning assumptions
/// are strained (gamma/kappa < 5 or epsilon > 0.5). Empty when clean.
std::vector<std::string> validity_warnings(const ModelParams& params);

/// Laboratory-frame constants before normalization. Rates in rad/s.
struct PhysicalParams {
    double atom_number = 0.0;
    double g1 = 0.0, g2 = 0.0;            ///< coupling constants
    double gamma1 = 0.0, gamma2 = 0.0;    ///< upper-level decay, per branch
    double kappa1 = 0.0, kappa2 = 0.0;    ///< cavity decay rates
    double omega1 = 0.0, omega2 = 0.0;    ///< field frequencies
    double omega_a1 = 0.0, omega_a2 = 0.0;  ///< atomic transition frequencies
    double omega_c1 = 0.0, omega_c2 = 0.0;  ///< cavity resonance frequencies
    double transmissivity1 = 1.0, transmissivity2 = 1.0;
    double e_in1 = 0.0, e_in2 = 0.0;      ///< input field amplitudes
};

/// Common rescaled input intensity and the input phases arg(y_j).
struct DriveSpec {
    double intensity = 0.0;  ///< Y >= 0
    double phase1 = 0.0;     ///< arg(y_1), radians
    double phase2 = 0.0;     ///< arg(y_2), radians
};

void validate(const DriveSpec& drive);

/// Rescaling factor 4 C epsilon between |x|^2 and I. With the medium
/// decoupled (C = 0) the rescaling degenerates and bare units are used,
/// i.e. the factor is 1.
double intensity_scale(const ModelParams& params);

/// |y| such that Y = |y|^2 / (4 C epsilon).
double input_amplitude_modulus(const ModelParams& params, const DriveSpec& drive);

/// y_j as a complex number, field = 1 or 2.
Complex input_amplitude(const ModelParams& params, const DriveSpec& drive, int field);

enum class BranchLabel {
    SymmetricPlus,
    SymmetricMinus,
    SymmetricLow,
    AsymmetricA,
    AsymmetricB,
    Continued,
};

enum class Stability { Stable, Unstable, Marginal, Unknown };

std::string to_string(BranchLabel label);
std::string to_string(Stability stability);

/// One steady state of the two-mode system, in the real-amplitude gauge.
///
/// AsymmetricA carries I1 >= I2 at the zero-detuning seed (ties to A),
/// AsymmetricB the mirror image; labels are inherited unchanged along
/// continuation, where the ordering may reverse. `approximate` marks the
/// dominant-balance low-intensity branch, which is not an exact root of
/// the reduced equations (see analytic_steady_theta0).
struct SteadyState {
    Complex x1{0.0, 0.0};
    Complex x2{0.0, 0.0};
    double i1 = 0.0;  ///< I_1 = |x_1|^2 / (4 C epsilon)
    double i2 = 0.0;
    double phi1_in = 0.0;
    double phi2_in = 0.0;
    double phi1_out = 0.0;
    double phi2_out = 0.0;
    BranchLabel branch = BranchLabel::Continued;
    Stability stability = Stability::Unknown;
    int continuation_id = 0;
    bool approximate = false;
};

/// Normalized medium polarizations on the two optical transitions.
struct Polarizations {
    Complex v{0.0, 0.0};  ///< transition 1-3
    Complex w{0.0, 0.0};  ///< transition 2-3
};

struct PhaseSet {
    double phi1_in = 0.0;
    double phi2_in = 0.0;
    double phi1_out = 0.0;
    double phi2_out = 0.0;
};

/// Maps laboratory constants to the normalized model. Rejects
/// configurations that break the symmetric scheme (unequal decay rates,
/// couplings, detunings or drive moduli) with AsymmetryError, and
/// nonpositive rates / transmissivities outside (0, 1] with DomainError.
std::pair<ModelParams, DriveSpec> normalize_params(const PhysicalParams& p);

/// First order in epsilon expansion of the steady-state polarizations:
///   v =  i 4 eps x1 |x2|^2 / S^2,   w = -i 4 eps x2 |x1|^2 / S^2,
/// with S = |x1|^2 + |x2|^2. Throws SingularInput when S < 1e-30; the
/// expansion has no limit at zero total intensity.
Polarizations reduced_polarizations(Complex x1, Complex x2, double epsilon);

/// Steady-state residual of the intracavity field equations,
///   r_j = (1 + i theta_j) x_j + 2 C p_j - y_j,   p_1 = v, p_2 = w.
/// Zero residual iff steady state. With both amplitudes exactly zero the
/// polarization term is taken as zero (dark cavity), so r_j = -y_j; a
/// nonzero total intensity below the polarization floor propagates
/// SingularInput.
std::pair<Complex, Complex> steady_residual(const SteadyState& state,
                                            const ModelParams& params,
                                            const DriveSpec& drive);

/// Zero-detuning steady states at drive Y (coupled medium, C > 0), in
/// deterministic order SymmetricPlus, SymmetricMinus, SymmetricLow,
/// AsymmetricA, AsymmetricB.
///
///   Y > 1: I = (Y/2)(1 +- sqrt(1 - 1/Y^2)), both symmetric roots.
///   Y = 1: the single merged fold state I = 0.5, tagged Marginal.
///   Y < 1: the asymmetric pair I_{1,2} = (Y/2)(1 +- eta), eta = sqrt(1-Y^2),
///          plus the near-resonant low branch.
///
/// The low branch is the dominant balance 2 C p_j = y_j of the residual
/// (the bare cavity term dropped), giving I = 1/(4Y) with input phases
/// +-pi/2. It is not an exact root of the reduced equations and is
/// returned with `approximate` set, only on 1/2 < Y < 1 where the balance
/// is self-consistent. Stability tags are left Unknown except at Y = 1.
std::vector<SteadyState> analytic_steady_theta0(double intensity_y,
                                                const ModelParams& params);

/// Zero-detuning input/output phases from the rescaled intensities:
///   asymmetric:  phi1_in = atan(sqrt(I2/I1)), phi2_in = -atan(sqrt(I1/I2));
///   symmetric:   phi1_in = atan(1/(2I)) = -phi2_in;
///   low branch:  phi1_in = pi/2 = -phi2_in;
/// and phi_out = -phi_in for every field. DomainError when the asymmetric
/// formula divides by a zero intensity.
PhaseSet io_phases(const SteadyState& state);

}  // namespace eitcav
