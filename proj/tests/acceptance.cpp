// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances are fixed here, not configurable.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "eitcav/continuation.hpp"
#include "eitcav/fluctuations.hpp"
#include "eitcav/model.hpp"
#include "eitcav/oracles.hpp"
#include "eitcav/scenario.hpp"
#include "eitcav/sha256.hpp"
#include "support.hpp"

using namespace eitcav;
using eitcav::testing::drive_for;
using eitcav::testing::finite_difference_drift;
using eitcav::testing::linspace;
using eitcav::testing::random_steady_state;
using eitcav::testing::reference_params;

namespace {

struct Check {
    bool ok = true;
    std::string detail;

    void require(bool condition, const std::string& message) {
        if (!condition && ok) {
            ok = false;
            detail = message;
        }
    }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
}

std::string fmt(double value) {
    char buffer[48];
    std::snprintf(buffer, sizeof(buffer), "%.6g", value);
    return buffer;
}

// ---------------------------------------------------------------------------

Check criterion_fold_location() {
    Check check;
    const auto start = std::chrono::steady_clock::now();
    ModelParams strong = reference_params();
    ModelParams weak = reference_params();
    weak.cooperativity = 25.0;
    weak.epsilon = 0.25;
    for (const ModelParams& params : {strong, weak}) {
        const FoldPoint fold = find_turning_point(params);
        const double intensity = 0.5 * (fold.state.i1 + fold.state.i2);
        check.require(std::abs(fold.y_critical - 1.0) < 1e-6,
                      "Y* = " + fmt(fold.y_critical));
        check.require(std::abs(intensity - 0.5) < 1e-6,
                      "I(Y*) = " + fmt(intensity));
        check.require(fold.leading_eigenvalue < 1e-6,
                      "leading eigenvalue " + fmt(fold.leading_eigenvalue));
    }
    const double elapsed = seconds_since(start);
    check.require(elapsed < 1.0, "runtime " + fmt(elapsed) + " s >= 1 s");
    if (check.ok) check.detail = "Y*=1, I=0.5 for both parameter sets, " +
                                 fmt(elapsed) + " s";
    return check;
}

Check criterion_steady_oracle_equivalence() {
    Check check;
    const auto start = std::chrono::steady_clock::now();
    const ModelParams params = reference_params();
    double max_dev = 0.0;
    for (int k = 10; k <= 200; ++k) {
        if (k == 100) continue;
        const double y = k / 100.0;
        const auto oracle = oracle::oracle_steady(y);
        for (const SteadyState& seed : analytic_steady_theta0(y, params)) {
            if (seed.approximate) continue;
            const SteadyState solved =
                solve_steady(params, drive_for(seed, y), seed);
            double dev = 0.0;
            switch (seed.branch) {
                case BranchLabel::SymmetricPlus:
                    dev = std::max(std::abs(solved.i1 - oracle.i_high),
                                   std::abs(solved.i2 - oracle.i_high));
                    break;
                case BranchLabel::SymmetricMinus:
                    dev = std::max(std::abs(solved.i1 - oracle.i_low),
                                   std::abs(solved.i2 - oracle.i_low));
                    break;
                case BranchLabel::AsymmetricA:
                    dev = std::max(std::abs(solved.i1 - oracle.i_high),
                                   std::abs(solved.i2 - oracle.i_low));
                    break;
                case BranchLabel::AsymmetricB:
                    dev = std::max(std::abs(solved.i1 - oracle.i_low),
                                   std::abs(solved.i2 - oracle.i_high));
                    break;
                default: break;
            }
            max_dev = std::max(max_dev, dev);
        }
    }
    const double elapsed = seconds_since(start);
    check.require(max_dev < 1e-10, "max |dI| = " + fmt(max_dev));
    check.require(elapsed < 5.0, "runtime " + fmt(elapsed) + " s >= 5 s");
    if (check.ok)
        check.detail = "max |dI| = " + fmt(max_dev) + " over 190 drives, " +
                       fmt(elapsed) + " s";
    return check;
}

Check criterion_stability_census() {
    Check check;
    const ModelParams params = reference_params();

    // Y = 0.95: two stable swap-related asymmetric states, unstable low branch
    std::vector<SteadyState> stable;
    bool low_unstable = false;
    for (SteadyState s : analytic_steady_theta0(0.95, params)) {
        s.stability = classify_stability(drift_matrix(s, params));
        if (s.branch == BranchLabel::SymmetricLow)
            low_unstable = (s.stability == Stability::Unstable);
        else if (s.stability == Stability::Stable)
            stable.push_back(s);
    }
    check.require(stable.size() == 2,
                  "stable count at Y=0.95 is " + std::to_string(stable.size()));
    if (stable.size() == 2) {
        check.require(std::abs(stable[0].i1 - stable[1].i2) < 1e-10 &&
                          std::abs(stable[0].i2 - stable[1].i1) < 1e-10,
                      "stable states not swap-related");
        check.require(std::abs(stable[0].i1 - stable[0].i2) > 1e-3,
                      "stable states not asymmetric");
    }
    check.require(low_unstable, "low branch not classified unstable");

    // Y = 1.05: plus branch eigenvalues -1 +- a, minus branch unstable
    const auto oracle = oracle::oracle_steady(1.05);
    const auto above = analytic_steady_theta0(1.05, params);
    const DriftMatrix plus = drift_matrix(above[0], params);
    check.require(classify_stability(plus) == Stability::Stable,
                  "plus branch not stable");
    Eigen::Vector4d re = drift_eigenvalues(plus).real();
    std::sort(re.data(), re.data() + 4);
    const double a_plus = 0.5 / oracle.i_high;
    check.require(std::abs(re(3) - (-1.0 + a_plus)) < 1e-9 &&
                      std::abs(re(2) - (-1.0 + a_plus)) < 1e-9 &&
                      std::abs(re(1) - (-1.0 - a_plus)) < 1e-9 &&
                      std::abs(re(0) - (-1.0 - a_plus)) < 1e-9,
                  "plus-branch eigenvalues off the closed form");
    check.require(std::abs(re(3) + 0.270157) < 5e-6 &&
                      std::abs(re(0) + 1.729843) < 5e-6,
                  "plus-branch eigenvalues off the quoted values");

    const DriftMatrix minus = drift_matrix(above[1], params);
    check.require(classify_stability(minus) == Stability::Unstable,
                  "minus branch not unstable");
    const double a_minus = 0.5 / oracle.i_low;
    const double top = drift_eigenvalues(minus).real().maxCoeff();
    check.require(std::abs(top - (-1.0 + a_minus)) < 1e-9,
                  "minus-branch eigenvalue off the closed form");
    check.require(std::abs(top - 0.370154) < 5e-6,
                  "minus-branch eigenvalue off the quoted value");
    if (check.ok)
        check.detail = "census and eigenvalues match (lambda_max = " + fmt(top) +
                       " on the minus branch)";
    return check;
}

Check criterion_squeezing_spectra() {
    Check check;
    const ModelParams params = reference_params();
    SteadyState plus = analytic_steady_theta0(1.05, params)[0];
    DriftMatrix drift = drift_matrix(plus, params);
    plus.stability = classify_stability(drift);
    drift.state = plus;
    const double i_oracle = oracle::oracle_steady(1.05).i_high;

    double max_dev = 0.0;
    for (double omega : linspace(0.0, 5.0, 501)) {
        const BestSqueezing best = best_squeezing(plus, drift, 1, omega);
        max_dev = std::max(
            max_dev, std::abs(best.value - oracle::oracle_sbest(i_oracle, omega)));
    }
    check.require(max_dev < 1e-8, "max spectrum deviation " + fmt(max_dev));

    const BestSqueezing at_zero = best_squeezing(plus, drift, 1, 0.0);
    check.require(std::abs(at_zero.value - 0.024391) < 1e-6,
                  "S_best(0) = " + fmt(at_zero.value));
    const double product = at_zero.value * at_zero.worst_value;
    check.require(std::abs(product - 1.0) < 1e-9,
                  "uncertainty product " + fmt(product));
    if (check.ok)
        check.detail = "S_best(0) = " + fmt(at_zero.value) +
                       ", closed-form agreement " + fmt(max_dev);
    return check;
}

Check criterion_qnd_zero_frequency() {
    Check check;
    const ModelParams params = reference_params();

    SteadyState asym = analytic_steady_theta0(0.95, params)[1];
    DriftMatrix drift = drift_matrix(asym, params);
    asym.stability = classify_stability(drift);
    drift.state = asym;

    const QndCoefficients qnd = qnd_coefficients(asym, drift, QndRoles{1, 2}, 0.0);
    check.require(std::abs(qnd.vsm - 0.026298) < 1e-6, "V = " + fmt(qnd.vsm));
    const double s_phase =
        squeezing_spectrum(asym, drift, QuadratureSpec{1, M_PI / 2.0}, 0.0);
    check.require(std::abs(s_phase - 38.025641) < 1e-4,
                  "S_phase = " + fmt(s_phase));
    const double s_int =
        squeezing_spectrum(asym, drift, QuadratureSpec{1, 0.0}, 0.0);
    check.require(std::abs(s_int - 1.0) < 1e-8, "S_int = " + fmt(s_int));

    double previous = 1e9;
    for (double y : {0.8, 0.9, 0.95, 0.99}) {
        SteadyState state = analytic_steady_theta0(y, params)[1];
        DriftMatrix local = drift_matrix(state, params);
        state.stability = classify_stability(local);
        local.state = state;
        const QndCoefficients point =
            qnd_coefficients(state, local, QndRoles{1, 2}, 0.0);
        const double expected = oracle::oracle_qnd_zero_freq(y).v_sm;
        check.require(std::abs(point.vsm - expected) < 1e-3,
                      "V(" + fmt(y) + ") = " + fmt(point.vsm) + " vs " +
                          fmt(expected));
        check.require(point.vsm < previous, "V not decreasing toward the fold");
        previous = point.vsm;
    }
    if (check.ok)
        check.detail = "V = " + fmt(qnd.vsm) + ", S_phase = " + fmt(s_phase) +
                       ", S_int = " + fmt(s_int) +
                       ", V(Y) decreasing toward the fold";
    return check;
}

Check criterion_detuned_qnd_triple() {
    Check check;
    const auto start = std::chrono::steady_clock::now();
    const ModelParams params = reference_params();
    const SteadyState seed = analytic_steady_theta0(0.95, params)[1];
    const DriveSpec drive = drive_for(seed, 0.95);
    const SteadyState state =
        continue_to_detuning(params, drive, seed, 0.0018, 0.0018);
    ModelParams local = params;
    local.theta1 = local.theta2 = 0.0018;
    const DriftMatrix drift = drift_matrix(state, local);

    double best_merit = -1e9;
    QndCoefficients best{};
    double best_omega = 0.0;
    for (double omega : linspace(0.0, 5.0, 501)) {
        const QndCoefficients qnd =
            qnd_coefficients(state, drift, QndRoles{1, 2}, omega);
        const double merit = qnd.cs + qnd.cm - qnd.vsm;
        if (merit > best_merit) {
            best_merit = merit;
            best = qnd;
            best_omega = omega;
        }
    }
    check.require(best.cs >= 0.93, "Cs = " + fmt(best.cs));
    check.require(best.cm >= 0.90, "Cm = " + fmt(best.cm));
    check.require(best.vsm <= 0.10, "V = " + fmt(best.vsm));
    const double elapsed = seconds_since(start);
    check.require(elapsed < 10.0, "runtime " + fmt(elapsed) + " s >= 10 s");
    if (check.ok)
        check.detail = "at w = " + fmt(best_omega) + ": Cs = " + fmt(best.cs) +
                       ", Cm = " + fmt(best.cm) + ", V = " + fmt(best.vsm) +
                       ", " + fmt(elapsed) + " s";
    return check;
}

Check criterion_cavity_scan_switching() {
    Check check;
    const ModelParams params = reference_params();
    const auto grid = linspace(-1.0, 1.0, 2001);

    // Y = 0.95: stable points always asymmetric; reflection = field swap
    const auto below = sweep_cavity_scan(params, DriveSpec{0.95, 0.0, 0.0}, grid);
    long stable_points = 0;
    for (const Branch& branch : below) {
        if (branch.label == BranchLabel::SymmetricLow) continue;
        check.require(branch.parameters.size() == grid.size(),
                      "branch " + to_string(branch.label) + " truncated");
        for (const SteadyState& s : branch.states)
            if (s.stability == Stability::Stable) {
                ++stable_points;
                check.require(std::abs(s.i1 - s.i2) > 1e-9,
                              "stable point with I1 = I2 at Y = 0.95");
            }
    }
    check.require(stable_points > 0, "no stable points at Y = 0.95");
    const Branch& a = below[1];
    const Branch& b = below[2];
    double max_mirror_dev = 0.0;
    if (a.parameters.size() == grid.size() && b.parameters.size() == grid.size()) {
        for (size_t i = 0; i < grid.size(); ++i) {
            const size_t mirror = grid.size() - 1 - i;
            max_mirror_dev =
                std::max({max_mirror_dev, std::abs(a.states[i].i1 - b.states[mirror].i2),
                          std::abs(a.states[i].i2 - b.states[mirror].i1)});
        }
    }
    check.require(max_mirror_dev < 1e-8,
                  "reflection/swap mismatch " + fmt(max_mirror_dev));

    // Y = 1.05: unique stable state with I1 = I2 at resonance
    const auto above = sweep_cavity_scan(params, DriveSpec{1.05, 0.0, 0.0}, grid);
    int stable_at_zero = 0;
    double symmetric_gap = 1.0;
    for (const Branch& branch : above)
        for (size_t i = 0; i < branch.states.size(); ++i)
            if (branch.parameters[i] == 0.0 &&
                branch.states[i].stability == Stability::Stable) {
                ++stable_at_zero;
                symmetric_gap = std::abs(branch.states[i].i1 - branch.states[i].i2);
            }
    check.require(stable_at_zero == 1,
                  std::to_string(stable_at_zero) + " stable states at resonance");
    check.require(symmetric_gap < 1e-10, "|I1 - I2| = " + fmt(symmetric_gap));
    if (check.ok)
        check.detail = std::to_string(stable_points) +
                       " stable asymmetric points, mirror deviation " +
                       fmt(max_mirror_dev) + ", unique symmetric state at "
                       "resonance above the fold";
    return check;
}

Check criterion_property_suite() {
    Check check;

    // (a) closed-form vs finite-difference linearization, 100 random states
    std::mt19937_64 rng(2026);
    int tested = 0;
    double max_rel = 0.0;
    while (tested < 100) {
        const auto bundle = random_steady_state(rng);
        if (!bundle) continue;
        ++tested;
        const Matrix4cd analytic =
            drift_matrix(bundle->state, bundle->params).matrix;
        const Matrix4cd numeric =
            finite_difference_drift(bundle->state, bundle->params);
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) {
                const double rel = std::abs(analytic(r, c) - numeric(r, c)) /
                                   std::max(1.0, std::abs(analytic(r, c)));
                max_rel = std::max(max_rel, rel);
            }
    }
    check.require(max_rel < 1e-6,
                  "Jacobian finite-difference deviation " + fmt(max_rel));

    // (b) empty-cavity shot noise
    ModelParams empty = reference_params();
    empty.cooperativity = 0.0;
    SteadyState dark;
    DriftMatrix drift = drift_matrix(dark, empty);
    drift.state.stability = Stability::Stable;
    double max_shot_dev = 0.0;
    for (double omega : {0.0, 0.5, 2.0, 20.0})
        for (double phi : linspace(0.0, 3.0, 7))
            for (int field : {1, 2})
                max_shot_dev = std::max(
                    max_shot_dev,
                    std::abs(squeezing_spectrum(drift.state, drift,
                                                QuadratureSpec{field, phi}, omega) -
                             1.0));
    check.require(max_shot_dev < 1e-3,
                  "empty-cavity deviation " + fmt(max_shot_dev));

    // (c) high-frequency limit on a coupled stable state
    const ModelParams params = reference_params();
    SteadyState plus = analytic_steady_theta0(1.05, params)[0];
    DriftMatrix coupled = drift_matrix(plus, params);
    plus.stability = classify_stability(coupled);
    coupled.state = plus;
    double max_hf_dev = 0.0;
    for (int field : {1, 2})
        for (double phi : {0.0, 0.7, 1.4})
            max_hf_dev = std::max(
                max_hf_dev, std::abs(squeezing_spectrum(plus, coupled,
                                                        QuadratureSpec{field, phi},
                                                        1e3) -
                                     1.0));
    check.require(max_hf_dev < 1e-3, "high-frequency deviation " + fmt(max_hf_dev));

    // (d) coefficient bounds along the detuned frequency scan
    const SteadyState seed = analytic_steady_theta0(0.95, params)[1];
    const SteadyState detuned = continue_to_detuning(
        params, drive_for(seed, 0.95), seed, 0.0018, 0.0018);
    ModelParams local = params;
    local.theta1 = local.theta2 = 0.0018;
    const DriftMatrix detuned_drift = drift_matrix(detuned, local);
    for (double omega : linspace(0.0, 5.0, 501)) {
        const QndCoefficients qnd =
            qnd_coefficients(detuned, detuned_drift, QndRoles{1, 2}, omega);
        check.require(qnd.cs >= 0.0 && qnd.cs <= 1.0 + 1e-12 && qnd.cm >= 0.0 &&
                          qnd.cm <= 1.0 + 1e-12 && qnd.vsm >= -1e-12,
                      "coefficient bounds violated at w = " + fmt(omega));
        const BestSqueezing best = best_squeezing(detuned, detuned_drift, 1, omega);
        check.require(best.value >= -1e-12, "negative spectrum at w = " + fmt(omega));
    }

    // (e) byte-identical preset reruns, each run well inside the time budget
    namespace fs = std::filesystem;
    const auto preset_clock = std::chrono::steady_clock::now();
    const fs::path base = fs::temp_directory_path() / "eitcav_acceptance_presets";
    fs::remove_all(base);
    const char* names[] = {"fig2",     "fig3-top", "fig3-bottom",
                           "fig4",     "fig5-top", "fig5-bottom"};
    for (const char* name : names) {
        ScenarioConfig config = preset_config(name);
        config.out_dir = (base / "run").string();
        const ResultManifest first = run_scenario(config);
        const ResultManifest second = run_scenario(config);
        for (size_t i = 0; i < first.artifacts.size(); ++i)
            check.require(first.artifacts[i].sha256 == second.artifacts[i].sha256,
                          std::string("preset ") + name + " not deterministic");
        const fs::path manifest_path =
            base / "run" / (config.label + "_manifest.json");
        const std::string digest_a = sha256_file(manifest_path.string());
        run_scenario(config);
        check.require(digest_a == sha256_file(manifest_path.string()),
                      std::string("manifest for ") + name + " not deterministic");
    }
    fs::remove_all(base);
    const double preset_elapsed = seconds_since(preset_clock);
    check.require(preset_elapsed < 60.0,
                  "preset reruns took " + fmt(preset_elapsed) + " s");

    if (check.ok)
        check.detail = "Jacobian dev " + fmt(max_rel) + ", shot-noise dev " +
                       fmt(max_shot_dev) + ", high-frequency dev " +
                       fmt(max_hf_dev) + ", bounds and determinism hold";
    return check;
}

}  // namespace

int main() {
    struct Entry {
        const char* name;
        std::function<Check()> run;
    };
    const Entry criteria[] = {
        {"1 fold location", criterion_fold_location},
        {"2 steady-state oracle equivalence", criterion_steady_oracle_equivalence},
        {"3 stability census", criterion_stability_census},
        {"4 squeezing spectra", criterion_squeezing_spectra},
        {"5 QND zero-frequency values", criterion_qnd_zero_frequency},
        {"6 detuned QND triple", criterion_detuned_qnd_triple},
        {"7 cavity-scan switching", criterion_cavity_scan_switching},
        {"8 property suite", criterion_property_suite},
    };

    int failures = 0;
    for (const Entry& entry : criteria) {
        Check result;
        try {
            result = entry.run();
        } catch (const std::exception& error) {
            result.ok = false;
            result.detail = std::string("exception: ") + error.what();
        }
        std::printf("[%s] criterion %s: %s\n", result.ok ? "PASS" : "FAIL",
                    entry.name, result.detail.c_str());
        if (!result.ok) ++failures;
    }
    if (failures == 0)
        std::printf("acceptance: all %zu criteria passed\n", std::size(criteria));
    else
        std::printf("acceptance: %d criteria FAILED\n", failures);
    return failures;
}
