#include "eitcav/oracles.hpp"

#include <cmath>

namespace eitcav::oracle {

SteadyOracle oracle_steady(double intensity_y) {
    if (!(intensity_y > 0.0))
        throw DomainError("oracle_steady: Y must be > 0");
    SteadyOracle out;
    const double y = intensity_y;
    if (y < 1.0) {
        out.eta = std::sqrt(1.0 - y * y);
        out.i_high = 0.5 * y * (1.0 + out.eta);
        out.i_low = 0.5 * y * (1.0 - out.eta);
        out.symmetric = false;
    } else {
        out.eta = 0.0;
        const double root = std::sqrt(1.0 - 1.0 / (y * y));
        out.i_high = 0.5 * y * (1.0 + root);
        out.i_low = 0.5 * y * (1.0 - root);
        out.symmetric = true;
    }
    return out;
}

double oracle_sbest(double intensity_i, double omega) {
    if (!(intensity_i > 0.0))
        throw DomainError("oracle_sbest: I must be > 0");
    const double a = 1.0 / (2.0 * intensity_i);
    const double denom = (1.0 + a) * (1.0 + a) + omega * omega;
    return 1.0 - 4.0 * a / denom;
}

QndZeroFreqOracle oracle_qnd_zero_freq(double intensity_y) {
    if (!(intensity_y > 0.0 && intensity_y < 1.0))
        throw DomainError("oracle_qnd_zero_freq: Y must lie in (0, 1)");
    const double eta2 = 1.0 - intensity_y * intensity_y;
    QndZeroFreqOracle out;
    out.s_intensity = 1.0;
    out.s_phase = -3.0 + 4.0 / eta2;
    out.v_sm = eta2 / (4.0 - 3.0 * eta2);
    return out;
}

Matrix2cd oracle_two_photon_drift(double intensity_i, int field) {
    if (!(intensity_i > 0.0))
        throw DomainError("oracle_two_photon_drift: I must be > 0");
    const double a = 1.0 / (2.0 * intensity_i);
    const Complex coupling = (field == 1 ? kImag : -kImag) * a;
    Matrix2cd block;
    block << Complex(-1.0, 0.0), coupling, std::conj(coupling), Complex(-1.0, 0.0);
    return block;
}

std::vector<Complex> oracle_asymmetric_drift_eigenvalues(double intensity_y) {
    if (!(intensity_y > 0.0 && intensity_y < 1.0))
        throw DomainError("oracle_asymmetric_drift_eigenvalues: Y in (0, 1)");
    const double eta2 = 1.0 - intensity_y * intensity_y;
    // lambda = -1 + mu with mu^2 = u, u^2 - 2 kappa_c u + 1 = 0
    const double kappa_c = (1.0 - 3.0 * eta2) / (1.0 - eta2);
    if (kappa_c > -1.0) {
        // eta^2 < 1/2: u on the unit circle, conjugate pair
        const double half_chi = 0.5 * std::acos(kappa_c);
        const Complex mu = std::polar(1.0, half_chi);
        return {-1.0 + mu, -1.0 + std::conj(mu), -1.0 - mu, -1.0 - std::conj(mu)};
    }
    // eta^2 >= 1/2: both u real and negative, all modes damped at rate 1
    const double root = std::sqrt(kappa_c * kappa_c - 1.0);
    const double s1 = std::sqrt(-(kappa_c + root));
    const double s2 = std::sqrt(-(kappa_c - root));
    return {Complex(-1.0, s1), Complex(-1.0, -s1), Complex(-1.0, s2),
            Complex(-1.0, -s2)};
}

OracleReport make_report(std::string quantity, double analytic, double numeric,
                         std::string formula) {
    OracleReport report;
    report.quantity = std::move(quantity);
    report.analytic = analytic;
    report.numeric = numeric;
    report.abs_deviation = std::abs(analytic - numeric);
    const double scale = std::max(std::abs(analytic), 1.0);
    report.rel_deviation = report.abs_deviation / scale;
    report.formula = std::move(formula);
    return report;
}

}  // namespace eitcav::oracle
