#include <cmath>

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "eitcav/oracles.hpp"
#include "support.hpp"

using namespace eitcav;
using namespace eitcav::oracle;

TEST_CASE("steady-state oracle reproduces the reference points") {
    const SteadyOracle below = oracle_steady(0.95);
    CHECK(below.eta == doctest::Approx(0.312250).epsilon(1e-5));
    CHECK(below.i_high == doctest::Approx(0.623319).epsilon(1e-5));
    CHECK(below.i_low == doctest::Approx(0.326681).epsilon(1e-5));
    CHECK_FALSE(below.symmetric);

    const SteadyOracle fold = oracle_steady(1.0);
    CHECK(fold.i_high == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(fold.i_low == doctest::Approx(0.5).epsilon(1e-12));

    const SteadyOracle strong = oracle_steady(2.0);
    CHECK(strong.i_high == doctest::Approx(1.866025).epsilon(1e-6));
    CHECK(strong.i_low == doctest::Approx(0.133975).epsilon(1e-5));
    CHECK(strong.symmetric);

    CHECK_THROWS_AS(oracle_steady(0.0), DomainError);
    CHECK_THROWS_AS(oracle_steady(-1.0), DomainError);
}

TEST_CASE("steady-state oracle satisfies the sum/product rules") {
    for (double y = 0.05; y < 1.0; y += 0.05) {
        const SteadyOracle o = oracle_steady(y);
        CHECK(o.i_high + o.i_low == doctest::Approx(y).epsilon(1e-12));
        CHECK(o.i_high * o.i_low ==
              doctest::Approx(0.25 * y * y * y * y).epsilon(1e-12));
    }
    for (double y = 1.05; y <= 2.0; y += 0.05) {
        const SteadyOracle o = oracle_steady(y);
        CHECK(o.i_high + 0.25 / o.i_high == doctest::Approx(y).epsilon(1e-12));
        CHECK(o.i_low + 0.25 / o.i_low == doctest::Approx(y).epsilon(1e-12));
    }
}

TEST_CASE("best-squeezing oracle values and bounds") {
    CHECK(oracle_sbest(0.5, 0.0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(oracle_sbest(0.685078, 0.0) == doctest::Approx(0.024391).epsilon(1e-4));
    CHECK(oracle_sbest(0.5, 2.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK_THROWS_AS(oracle_sbest(0.0, 1.0), DomainError);

    for (double i : {0.05, 0.2, 0.5, 0.8, 2.0, 10.0}) {
        for (double w : {0.0, 0.3, 1.0, 4.0, 25.0}) {
            const double s = oracle_sbest(i, w);
            CHECK(s >= 0.0);
            CHECK(s < 1.0);
            if (i != 0.5 || w != 0.0) CHECK(s > 0.0);
        }
    }
}

TEST_CASE("zero-frequency correlation oracle") {
    const QndZeroFreqOracle ref = oracle_qnd_zero_freq(0.95);
    CHECK(ref.s_intensity == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(ref.s_phase == doctest::Approx(38.025641).epsilon(1e-8));
    CHECK(ref.v_sm == doctest::Approx(0.026298).epsilon(1e-4));

    // weak-drive limit: both quadratures at shot noise, no correlations
    const QndZeroFreqOracle weak = oracle_qnd_zero_freq(1e-6);
    CHECK(weak.s_phase == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(weak.v_sm == doctest::Approx(1.0).epsilon(1e-9));

    CHECK_THROWS_AS(oracle_qnd_zero_freq(0.0), DomainError);
    CHECK_THROWS_AS(oracle_qnd_zero_freq(1.0), DomainError);

    // V grows with eta^2; the phase noise diverges toward the fold
    double v_prev = -1.0, s_prev = 1e9;
    for (double y = 0.99; y > 0.05; y -= 0.01) {
        const QndZeroFreqOracle o = oracle_qnd_zero_freq(y);
        CHECK(o.v_sm > v_prev);
        CHECK(o.s_phase < s_prev);
        v_prev = o.v_sm;
        s_prev = o.s_phase;
    }
}

TEST_CASE("two-photon drift oracle eigenvalues") {
    const auto eig_of = [](const Matrix2cd& m) {
        Eigen::ComplexEigenSolver<Matrix2cd> solver(m, false);
        Eigen::Vector2d re = solver.eigenvalues().real();
        if (re(0) > re(1)) std::swap(re(0), re(1));
        return re;
    };
    const Eigen::Vector2d at_fold = eig_of(oracle_two_photon_drift(0.5));
    CHECK(at_fold(1) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(at_fold(0) == doctest::Approx(-2.0).epsilon(1e-12));

    const Eigen::Vector2d stable = eig_of(oracle_two_photon_drift(0.685078));
    CHECK(stable(1) == doctest::Approx(-0.270157).epsilon(1e-5));
    CHECK(stable(0) == doctest::Approx(-1.729843).epsilon(1e-5));

    const Eigen::Vector2d unstable = eig_of(oracle_two_photon_drift(0.364922));
    CHECK(unstable(1) == doctest::Approx(0.370154).epsilon(1e-5));

    CHECK_THROWS_AS(oracle_two_photon_drift(-0.1), DomainError);
}

TEST_CASE("coupled drift root oracle degenerates to the fold values") {
    // As Y -> 1 the four roots pair up into {0, 0, -2, -2}.
    const auto roots = oracle_asymmetric_drift_eigenvalues(0.999999);
    double max_re = -1e9, min_re = 1e9;
    for (const Complex& r : roots) {
        max_re = std::max(max_re, r.real());
        min_re = std::min(min_re, r.real());
    }
    CHECK(max_re == doctest::Approx(0.0).epsilon(2e-3));
    CHECK(min_re == doctest::Approx(-2.0).epsilon(2e-3));
}
