#pragma once

#include <optional>
#include <random>
#include <vector>

#include "eitcav/continuation.hpp"
#include "eitcav/model.hpp"

namespace eitcav::testing {

inline ModelParams reference_params() {
    ModelParams params;
    params.epsilon = 0.0625;
    params.cooperativity = 250.0;
    params.theta1 = 0.0;
    params.theta2 = 0.0;
    params.gamma_over_kappa = 10.0;
    return params;
}

inline DriveSpec drive_for(const SteadyState& state, double intensity_y) {
    return DriveSpec{intensity_y, state.phi1_in, state.phi2_in};
}

inline std::vector<double> linspace(double lo, double hi, int count) {
    std::vector<double> grid(count);
    for (int i = 0; i < count; ++i)
        grid[i] = lo + (hi - lo) * double(i) / double(count - 1);
    return grid;
}

/// Central-difference linearization of the field equations, assembled in
/// the doubled basis. Independent of the closed-form Jacobian path: it
/// only evaluates steady_residual.
inline Matrix4cd finite_difference_drift(const SteadyState& state,
                                         const ModelParams& params,
                                         double step = 1e-6) {
    const DriveSpec no_drive{0.0, 0.0, 0.0};  // constant term, cancels
    const auto residual_at = [&](Complex x1, Complex x2) {
        SteadyState probe = state;
        probe.x1 = x1;
        probe.x2 = x2;
        return steady_residual(probe, params, no_drive);
    };
    Matrix4cd w;
    const Complex x[2] = {state.x1, state.x2};
    const Complex zero(0.0, 0.0);
    for (int k = 0; k < 2; ++k) {
        const Complex re_step(step, 0.0);
        const Complex im_step(0.0, step);
        const auto [r1_re_p, r2_re_p] = residual_at(x[0] + (k == 0 ? re_step : zero),
                                                    x[1] + (k == 1 ? re_step : zero));
        const auto [r1_re_m, r2_re_m] = residual_at(x[0] - (k == 0 ? re_step : zero),
                                                    x[1] - (k == 1 ? re_step : zero));
        const auto [r1_im_p, r2_im_p] = residual_at(x[0] + (k == 0 ? im_step : zero),
                                                    x[1] + (k == 1 ? im_step : zero));
        const auto [r1_im_m, r2_im_m] = residual_at(x[0] - (k == 0 ? im_step : zero),
                                                    x[1] - (k == 1 ? im_step : zero));
        const Complex d_re[2] = {(r1_re_p - r1_re_m) / (2.0 * step),
                                 (r2_re_p - r2_re_m) / (2.0 * step)};
        const Complex d_im[2] = {(r1_im_p - r1_im_m) / (2.0 * step),
                                 (r2_im_p - r2_im_m) / (2.0 * step)};
        for (int j = 0; j < 2; ++j) {
            w(2 * j, 2 * k) = 0.5 * (d_re[j] - kImag * d_im[j]);
            w(2 * j, 2 * k + 1) = 0.5 * (d_re[j] + kImag * d_im[j]);
        }
    }
    // conjugate rows
    w(1, 0) = std::conj(w(0, 1));
    w(1, 1) = std::conj(w(0, 0));
    w(1, 2) = std::conj(w(0, 3));
    w(1, 3) = std::conj(w(0, 2));
    w(3, 0) = std::conj(w(2, 1));
    w(3, 1) = std::conj(w(2, 0));
    w(3, 2) = std::conj(w(2, 3));
    w(3, 3) = std::conj(w(2, 2));
    return -w;
}

struct RandomStateBundle {
    ModelParams params;
    DriveSpec drive;
    SteadyState state;
};

/// Draws a random valid configuration and solves one of its branches,
/// possibly at nonzero cavity detunings.
inline std::optional<RandomStateBundle> random_steady_state(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    RandomStateBundle bundle;
    bundle.params.epsilon = 0.01 + 0.39 * uniform(rng);
    bundle.params.cooperativity = std::pow(10.0, 0.0 + 2.7 * uniform(rng));
    bundle.params.gamma_over_kappa = 10.0;
    bundle.params.theta1 = 0.0;
    bundle.params.theta2 = 0.0;

    double y = 0.1 + 1.9 * uniform(rng);
    if (std::abs(y - 1.0) < 0.03) y += 0.06;  // keep away from the fold
    const double theta1 = -0.05 + 0.1 * uniform(rng);
    const double theta2 = -0.05 + 0.1 * uniform(rng);

    const auto seeds = analytic_steady_theta0(y, bundle.params);
    std::vector<SteadyState> exact;
    for (const SteadyState& s : seeds)
        if (!s.approximate) exact.push_back(s);
    const SteadyState& seed = exact[size_t(uniform(rng) * exact.size()) % exact.size()];
    bundle.drive = drive_for(seed, y);
    try {
        bundle.state = continue_to_detuning(bundle.params, bundle.drive, seed,
                                            theta1, theta2);
    } catch (const NoConvergence&) {
        return std::nullopt;
    }
    bundle.params.theta1 = theta1;
    bundle.params.theta2 = theta2;
    return bundle;
}

}  // namespace eitcav::testing
