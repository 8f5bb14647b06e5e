#pragma once

#include <array>
#include <vector>

#include "eitcav/continuation.hpp"
#include "eitcav/model.hpp"
#include "eitcav/types.hpp"

namespace eitcav {

// Linearized input-output treatment of the vacuum fluctuations, single
// ended lossless cavity:
//   d(dx)/dt = A dx + sqrt(2) dx_in,      dx_out = sqrt(2) dx - dx_in,
// in the doubled basis (da1, da1+, da2, da2+), time in 1/kappa, so that
//   dx_out(w) = Theta(w) dx_in(w),  Theta(w) = 2 (-i w I - A)^{-1} - I.
// Spectra are normalized to shot noise: a coherent (empty cavity) output
// gives S = 1 for every quadrature. Quadratures are the Hermitian
// combinations X^phi = a e^{-i phi} + a+ e^{i phi}; phases passed through
// the public interface are measured relative to the steady-state output
// (or input) phase of the addressed field, so phi = 0 is the amplitude
// quadrature and pi/2 the phase quadrature of that beam.

/// Quadrature of one output field; phase relative to that field's
/// steady-state output phase.
struct QuadratureSpec {
    int field = 1;  ///< 1 or 2
    double phase = 0.0;
};

/// Frequency-domain map from input to output fluctuations at ww = w/kappa.
struct ScatteringMatrix {
    Matrix4cd theta = Matrix4cd::Zero();
    double omega = 0.0;
};

/// Throws SingularMatrix when the resolvent does not exist (marginal
/// state at w = 0) and DomainError for an unstable source state.
ScatteringMatrix scattering_matrix(const DriftMatrix& drift, double omega);

/// Symmetrized spectral density of one output quadrature, shot noise = 1.
double squeezing_spectrum(const SteadyState& state, const DriftMatrix& drift,
                          const QuadratureSpec& quad, double omega);

struct BestSqueezing {
    double phase = 0.0;        ///< minimizing phase in [0, pi)
    double value = 1.0;        ///< spectrum at the minimizing phase
    double worst_phase = 0.0;  ///< orthogonal quadrature
    double worst_value = 1.0;
};

/// Phase-optimal squeezing from the eigendecomposition of the 2x2 output
/// quadrature spectral covariance (no phase grid search).
BestSqueezing best_squeezing(const SteadyState& state, const DriftMatrix& drift,
                             int field, double omega);

/// The 2x2 spectral covariance of (X^0, X^{pi/2}) of one output field,
/// phases relative to the output steady-state phase.
Matrix2d output_quadrature_covariance(const SteadyState& state,
                                      const DriftMatrix& drift, int field,
                                      double omega);

/// Meter/signal role assignment for the back-action-evading scheme: the
/// amplitude quadrature of the signal beam is read through the phase
/// quadrature of the meter beam.
struct QndRoles {
    int meter = 1;
    int signal = 2;
};

struct QndCoefficients {
    double cs = 0.0;   ///< non-destruction, C(X_in, X_out)
    double cm = 0.0;   ///< measurement accuracy, C(X_in, Y_out)
    double vsm = 0.0;  ///< conditional variance of the signal given the meter
};

/// Correlation coefficients among X_in = signal input amplitude
/// quadrature, X_out = signal output amplitude quadrature and
/// Y_out = meter output phase quadrature, from the symmetrized spectral
/// pairing <A,B>(w); C(A,B) = |<A,B>|^2 / (<A,A><B,B>). Throws
/// DegenerateSpectrum when a denominator falls below 1e-14.
QndCoefficients qnd_coefficients(const SteadyState& state, const DriftMatrix& drift,
                                 const QndRoles& roles, double omega);

/// Frequency-resolved fluctuation observables on a common grid.
struct SpectraResult {
    std::vector<double> omega;  ///< kappa units
    std::array<std::vector<double>, 2> s_best;
    std::array<std::vector<double>, 2> phi_best;
    std::array<std::vector<double>, 2> s_amp;  ///< amplitude quadrature
    std::vector<double> cs, cm, vsm;           ///< filled by QND scans
};

/// Gate for the adiabatic (good cavity) assumption: DomainError when
/// gamma/kappa < 5 unless explicitly overridden.
void require_adiabatic(const ModelParams& params, bool allow_bad_cavity);

/// Symmetrized spectral pairing <A,B>(w) of two fluctuation ports, each
/// given as its row-functional on the input noise vector at +-w.
Complex spectral_pairing(const RowVector4cd& port_a_plus,
                         const RowVector4cd& port_b_minus);

/// Row functional of the quadrature X_field^phi (absolute phase) on the
/// doubled fluctuation vector.
RowVector4cd quadrature_row(int field, double phase);

}  // namespace eitcav
