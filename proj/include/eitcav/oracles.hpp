#pragma once

#include <string>
#include <vector>

#include "eitcav/types.hpp"

// Closed-form reference results used to seed solvers and to cross-check the
// numeric pipeline. Everything here is implemented directly from the printed
// formulas, with no code shared with the numeric modules.

namespace eitcav::oracle {

struct SteadyOracle {
    double eta = 0.0;      ///< sqrt(1 - Y^2), zero for Y >= 1
    double i_high = 0.0;   ///< Y<1: larger asymmetric intensity; Y>1: plus root
    double i_low = 0.0;    ///< Y<1: smaller asymmetric intensity; Y>1: minus root
    bool symmetric = false;  ///< true when the two roots have I1 = I2
};

/// Universal rescaled steady-state intensities at zero cavity detuning.
/// DomainError for Y <= 0.
SteadyOracle oracle_steady(double intensity_y);

/// Best squeezing spectrum of one field on the symmetric branch:
///   S(w) = 1 - 4a / ((1+a)^2 + w^2),  a = 1/(2I).
double oracle_sbest(double intensity_i, double omega);

struct QndZeroFreqOracle {
    double s_intensity = 1.0;  ///< amplitude-quadrature output spectrum
    double s_phase = 0.0;      ///< phase-quadrature output spectrum
    double v_sm = 0.0;         ///< conditional variance
};

/// Zero-frequency output spectra and conditional variance on the
/// asymmetric branch (0 < Y < 1):
///   S_int = 1,  S_phase = -3 + 4/eta^2,  V = eta^2 / (4 - 3 eta^2).
QndZeroFreqOracle oracle_qnd_zero_freq(double intensity_y);

/// Single-field fluctuation drift block on the symmetric branch,
/// [[-1, i a], [-i a, -1]] with a = 1/(2I); the sign of a flips for
/// field 2. Eigenvalues -1 +- a.
Matrix2cd oracle_two_photon_drift(double intensity_i, int field = 1);

/// Characteristic roots of the coupled fluctuation drift on the
/// asymmetric branch (0 < Y < 1): lambda = -1 +- exp(+-i chi / 2) with
/// cos(chi) = (1 - 3 eta^2) / (1 - eta^2). Hand-derived from the coupled
/// quadrature equations; used only as a test reference.
std::vector<Complex> oracle_asymmetric_drift_eigenvalues(double intensity_y);

struct OracleReport {
    std::string quantity;
    double analytic = 0.0;
    double numeric = 0.0;
    double abs_deviation = 0.0;
    double rel_deviation = 0.0;
    std::string formula;  ///< which closed form produced the analytic value
};

OracleReport make_report(std::string quantity, double analytic, double numeric,
                         std::string formula);

}  // namespace eitcav::oracle
