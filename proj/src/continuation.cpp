#include "eitcav/continuation.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

namespace eitcav {

namespace {

constexpr double kPolarizationFloor = 1e-30;
constexpr double kMinContinuationStep = 1e-7;
constexpr double kStepJumpCap = 0.5;  // max |dI| accepted per sub-step

double wrap_angle(double phi) {
    while (phi > M_PI) phi -= 2.0 * M_PI;
    while (phi <= -M_PI) phi += 2.0 * M_PI;
    return phi;
}

/// Wirtinger Jacobian of (r1, r1*, r2, r2*) wrt (x1, x1*, x2, x2*).
Matrix4cd residual_wirtinger(Complex x1, Complex x2, const ModelParams& params) {
    Matrix4cd w = Matrix4cd::Zero();
    w(0, 0) = 1.0 + kImag * params.theta1;
    w(2, 2) = 1.0 + kImag * params.theta2;

    const double c2 = 2.0 * params.cooperativity;
    if (c2 > 0.0) {
        const double s = std::norm(x1) + std::norm(x2);
        if (s < kPolarizationFloor)
            throw SingularInput(
                "residual_wirtinger: total intensity below expansion floor");
        const double s3 = s * s * s;
        const double n1 = std::norm(x1);
        const double n2 = std::norm(x2);
        const Complex i4e = kImag * (4.0 * params.epsilon);

        // dv/d(x1, x1*, x2, x2*)
        w(0, 0) += c2 * i4e * n2 * (s - 2.0 * n1) / s3;
        w(0, 1) = c2 * (-2.0) * i4e * x1 * x1 * n2 / s3;
        w(0, 2) = c2 * i4e * x1 * std::conj(x2) * (s - 2.0 * n2) / s3;
        w(0, 3) = c2 * i4e * x1 * x2 * (s - 2.0 * n2) / s3;
        // dw/d(x1, x1*, x2, x2*)
        w(2, 0) = c2 * (-i4e) * x2 * std::conj(x1) * (s - 2.0 * n1) / s3;
        w(2, 1) = c2 * (-i4e) * x2 * x1 * (s - 2.0 * n1) / s3;
        w(2, 2) += c2 * (-i4e) * n1 * (s - 2.0 * n2) / s3;
        w(2, 3) = c2 * 2.0 * i4e * x2 * x2 * n1 / s3;
    }

    // Conjugate rows: d(r_j*)/du follows from d(r_j)/du by swapping each
    // (x_k, x_k*) column pair and conjugating.
    w(1, 0) = std::conj(w(0, 1));
    w(1, 1) = std::conj(w(0, 0));
    w(1, 2) = std::conj(w(0, 3));
    w(1, 3) = std::conj(w(0, 2));
    w(3, 0) = std::conj(w(2, 1));
    w(3, 1) = std::conj(w(2, 0));
    w(3, 2) = std::conj(w(2, 3));
    w(3, 3) = std::conj(w(2, 2));
    return w;
}

struct ComplexPair {
    Complex first, second;
};

ComplexPair raw_residual(Complex x1, Complex x2, const ModelParams& params,
                         Complex y1, Complex y2) {
    Complex p1{0.0, 0.0}, p2{0.0, 0.0};
    const double c2 = 2.0 * params.cooperativity;
    if (c2 > 0.0) {
        const double s = std::norm(x1) + std::norm(x2);
        if (s == 0.0) {
            // dark cavity: no polarization
        } else if (s < kPolarizationFloor) {
            throw SingularInput("steady residual: intensity below expansion floor");
        } else {
            const double s2 = s * s;
            p1 = kImag * (4.0 * params.epsilon) * x1 * std::norm(x2) / s2;
            p2 = -kImag * (4.0 * params.epsilon) * x2 * std::norm(x1) / s2;
        }
    }
    return {(1.0 + kImag * params.theta1) * x1 + c2 * p1 - y1,
            (1.0 + kImag * params.theta2) * x2 + c2 * p2 - y2};
}

double residual_norm(const ComplexPair& r) {
    return std::sqrt(std::norm(r.first) + std::norm(r.second));
}

/// Real 4x4 Jacobian in (Re x1, Im x1, Re x2, Im x2).
Matrix4d real_jacobian(Complex x1, Complex x2, const ModelParams& params) {
    const Matrix4cd w = residual_wirtinger(x1, x2, params);
    Matrix4d j;
    for (int block = 0; block < 2; ++block) {
        const int row = 2 * block;
        const int wrow = 2 * block;
        for (int col = 0; col < 2; ++col) {
            const Complex d_re = w(wrow, 2 * col) + w(wrow, 2 * col + 1);
            const Complex d_im = kImag * (w(wrow, 2 * col) - w(wrow, 2 * col + 1));
            j(row, 2 * col) = d_re.real();
            j(row + 1, 2 * col) = d_re.imag();
            j(row, 2 * col + 1) = d_im.real();
            j(row + 1, 2 * col + 1) = d_im.imag();
        }
    }
    return j;
}

SteadyState build_solution_state(Complex x1, Complex x2, const ModelParams& params,
                                 const DriveSpec& drive, const SteadyState& lineage) {
    SteadyState s;
    const double scale = intensity_scale(params);
    s.i1 = std::norm(x1) / scale;
    s.i2 = std::norm(x2) / scale;
    s.phi1_in = (std::abs(x1) > 0.0) ? wrap_angle(drive.phase1 - std::arg(x1)) : 0.0;
    s.phi2_in = (std::abs(x2) > 0.0) ? wrap_angle(drive.phase2 - std::arg(x2)) : 0.0;
    s.phi1_out = -s.phi1_in;
    s.phi2_out = -s.phi2_in;
    s.x1 = Complex(std::abs(x1), 0.0);
    s.x2 = Complex(std::abs(x2), 0.0);
    s.branch = lineage.branch;
    s.continuation_id = lineage.continuation_id;
    s.approximate = false;
    return s;
}

}  // namespace

SteadyState solve_steady(const ModelParams& params, const DriveSpec& drive,
                         const SteadyState& guess, const NewtonOptions& options,
                         NewtonStats* stats) {
    validate(params);
    validate(drive);
    const Complex y1 = input_amplitude(params, drive, 1);
    const Complex y2 = input_amplitude(params, drive, 2);

    // Rotate the guess into this drive's phase gauge.
    Complex x1 = std::polar(std::abs(guess.x1), drive.phase1 - guess.phi1_in);
    Complex x2 = std::polar(std::abs(guess.x2), drive.phase2 - guess.phi2_in);

    ComplexPair r = raw_residual(x1, x2, params, y1, y2);
    double rnorm = residual_norm(r);
    NewtonStats local;
    int iter = 0;
    for (; iter < options.max_iterations && rnorm >= options.tolerance; ++iter) {
        Matrix4d jac;
        try {
            jac = real_jacobian(x1, x2, params);
        } catch (const SingularInput&) {
            throw SingularJacobian(
                "solve_steady: linearization undefined at a dark iterate");
        }
        Eigen::FullPivLU<Matrix4d> lu(jac);
        if (!lu.isInvertible())
            throw SingularJacobian("solve_steady: Jacobian singular (fold?)");
        Vector4d rhs;
        rhs << -r.first.real(), -r.first.imag(), -r.second.real(), -r.second.imag();
        const Vector4d delta = lu.solve(rhs);

        double step = 1.0;
        bool accepted = false;
        for (int h = 0; h <= options.max_halvings; ++h) {
            const Complex x1_try = x1 + step * Complex(delta(0), delta(1));
            const Complex x2_try = x2 + step * Complex(delta(2), delta(3));
            try {
                const ComplexPair r_try = raw_residual(x1_try, x2_try, params, y1, y2);
                const double rnorm_try = residual_norm(r_try);
                if (rnorm_try < rnorm) {
                    x1 = x1_try;
                    x2 = x2_try;
                    r = r_try;
                    rnorm = rnorm_try;
                    accepted = true;
                    break;
                }
            } catch (const SingularInput&) {
                // step landed in the singular region; shorten it
            }
            step *= 0.5;
            ++local.halvings;
        }
        if (!accepted)
            throw NoConvergence("solve_steady: backtracking stalled at residual " +
                                std::to_string(rnorm));
    }
    local.iterations = iter;
    local.residual_norm = rnorm;
    if (stats) *stats = local;
    if (rnorm >= options.tolerance)
        throw NoConvergence("solve_steady: no convergence after " +
                            std::to_string(iter) + " iterations, residual " +
                            std::to_string(rnorm));

    SteadyState solution = build_solution_state(x1, x2, params, drive, guess);
    try {
        solution.stability = classify_stability(drift_matrix(solution, params));
    } catch (const SingularInput&) {
        solution.stability = Stability::Unknown;  // dark state, no linearization
    }
    return solution;
}

DriftMatrix drift_matrix(const SteadyState& state, const ModelParams& params) {
    validate(params);
    DriftMatrix drift;
    drift.state = state;
    drift.matrix = -residual_wirtinger(state.x1, state.x2, params);
    return drift;
}

Vector4cd drift_eigenvalues(const DriftMatrix& drift) {
    Eigen::ComplexEigenSolver<Matrix4cd> solver(drift.matrix, false);
    return solver.eigenvalues();
}

Stability classify_stability(const DriftMatrix& drift) {
    if (!drift.matrix.allFinite())
        throw DomainError("classify_stability: drift matrix not finite");
    const Vector4cd eig = drift_eigenvalues(drift);
    const double max_re = eig.real().maxCoeff();
    constexpr double kBand = 1e-8;
    if (max_re < -kBand) return Stability::Stable;
    if (max_re <= kBand) return Stability::Marginal;
    return Stability::Unstable;
}

namespace {

void require_monotone(const std::vector<double>& grid, const char* what) {
    if (grid.empty()) throw DomainError(std::string(what) + ": empty grid");
    if (grid.size() == 1) return;
    const bool increasing = grid.back() > grid.front();
    for (size_t i = 1; i < grid.size(); ++i) {
        const bool ok = increasing ? grid[i] > grid[i - 1] : grid[i] < grid[i - 1];
        if (!ok) throw DomainError(std::string(what) + ": grid not monotone");
    }
}

struct WalkResult {
    std::vector<std::optional<SteadyState>> states;
    int newton_iterations = 0;
    int retries = 0;
    bool truncated = false;
    std::string reason;
};

/// Continues `seed` (valid at theta = theta_start) through the detunings
/// `targets[order[...]]`, recording one state per visited index.
WalkResult walk_detunings(const ModelParams& base, const DriveSpec& drive,
                          const SteadyState& seed, double theta_start,
                          const std::vector<double>& targets,
                          const std::vector<size_t>& order) {
    WalkResult result;
    result.states.assign(targets.size(), std::nullopt);
    SteadyState current = seed;
    double theta = theta_start;
    {
        // refine and classify the seed itself before walking
        ModelParams local = base;
        local.theta1 = theta_start;
        local.theta2 = theta_start;
        try {
            NewtonStats stats;
            current = solve_steady(local, drive, seed, {}, &stats);
            result.newton_iterations += stats.iterations;
        } catch (const NoConvergence&) {
            result.truncated = true;
            result.reason = "seed state did not refine";
            return result;
        } catch (const SingularJacobian&) {
            current = seed;  // marginal seed (fold): keep as is
        }
    }
    for (size_t idx : order) {
        const double target = targets[idx];
        double step = target - theta;
        bool reached = (theta == target);
        while (!reached) {
            if (std::abs(step) > std::abs(target - theta)) step = target - theta;
            const double theta_try = theta + step;
            ModelParams local = base;
            local.theta1 = theta_try;
            local.theta2 = theta_try;
            bool ok = false;
            try {
                NewtonStats stats;
                SteadyState next = solve_steady(local, drive, current, {}, &stats);
                result.newton_iterations += stats.iterations;
                if (std::abs(next.i1 - current.i1) <= kStepJumpCap &&
                    std::abs(next.i2 - current.i2) <= kStepJumpCap) {
                    current = next;
                    theta = theta_try;
                    ok = true;
                }
            } catch (const NoConvergence&) {
            } catch (const SingularJacobian&) {
            }
            if (ok) {
                reached = (theta == target);
            } else {
                step *= 0.5;
                ++result.retries;
                if (std::abs(step) < kMinContinuationStep) {
                    result.truncated = true;
                    result.reason = "continuation stalled near theta = " +
                                    std::to_string(theta_try);
                    return result;
                }
            }
        }
        result.states[idx] = current;
    }
    return result;
}

}  // namespace

std::vector<Branch> sweep_cavity_scan(const ModelParams& params,
                                      const DriveSpec& drive,
                                      const std::vector<double>& theta_grid) {
    validate(params);
    validate(drive);
    require_monotone(theta_grid, "sweep_cavity_scan");

    // Work on an ascending copy; emit in the caller's order at the end.
    std::vector<double> grid = theta_grid;
    const bool reversed = grid.size() > 1 && grid.back() < grid.front();
    if (reversed) std::reverse(grid.begin(), grid.end());

    ModelParams base = params;
    base.theta1 = 0.0;
    base.theta2 = 0.0;
    const std::vector<SteadyState> seeds =
        analytic_steady_theta0(drive.intensity, base);

    // Indices walked rightward (theta >= 0, ascending) and leftward.
    std::vector<size_t> right_order, left_order;
    for (size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] >= 0.0) right_order.push_back(i);
    }
    for (size_t i = grid.size(); i-- > 0;) {
        if (grid[i] < 0.0) left_order.push_back(i);
    }

    std::vector<Branch> branches;
    int next_id = 0;
    for (const SteadyState& seed : seeds) {
        Branch branch;
        branch.label = seed.branch;
        branch.id = next_id++;

        std::vector<std::optional<SteadyState>> per_index(grid.size());
        if (seed.branch == BranchLabel::SymmetricLow) {
            // Approximate branch: the dominant balance is detuning-free.
            for (size_t i = 0; i < grid.size(); ++i) {
                SteadyState s = seed;
                ModelParams local = base;
                local.theta1 = grid[i];
                local.theta2 = grid[i];
                s.stability = classify_stability(drift_matrix(s, local));
                per_index[i] = s;
            }
        } else {
            WalkResult right =
                walk_detunings(base, drive, seed, 0.0, grid, right_order);
            WalkResult left =
                walk_detunings(base, drive, seed, 0.0, grid, left_order);
            for (size_t i = 0; i < grid.size(); ++i) {
                if (right.states[i]) per_index[i] = right.states[i];
                if (left.states[i]) per_index[i] = left.states[i];
            }
            branch.newton_iterations =
                right.newton_iterations + left.newton_iterations;
            branch.retries = right.retries + left.retries;
            branch.truncated_high = right.truncated;
            branch.truncated_low = left.truncated;
            if (right.truncated) branch.truncation_reason = right.reason;
            if (left.truncated)
                branch.truncation_reason += (branch.truncation_reason.empty()
                                                 ? left.reason
                                                 : "; " + left.reason);
        }

        for (size_t i = 0; i < grid.size(); ++i) {
            const size_t j = reversed ? grid.size() - 1 - i : i;
            if (per_index[j]) {
                branch.parameters.push_back(theta_grid[i]);
                branch.states.push_back(*per_index[j]);
            }
        }
        branches.push_back(std::move(branch));
    }
    return branches;
}

std::vector<Branch> sweep_input_intensity(const ModelParams& params,
                                          const std::vector<double>& y_grid) {
    validate(params);
    if (params.theta1 != 0.0 || params.theta2 != 0.0)
        throw DomainError("sweep_input_intensity: requires theta1 = theta2 = 0");
    require_monotone(y_grid, "sweep_input_intensity");

    std::vector<double> grid = y_grid;
    const bool reversed = grid.size() > 1 && grid.back() < grid.front();
    if (reversed) std::reverse(grid.begin(), grid.end());

    struct BranchDef {
        BranchLabel label;
        bool exact;
    };
    const BranchDef defs[] = {
        {BranchLabel::SymmetricPlus, true},  {BranchLabel::SymmetricMinus, true},
        {BranchLabel::SymmetricLow, false},  {BranchLabel::AsymmetricA, true},
        {BranchLabel::AsymmetricB, true},
    };

    std::vector<Branch> branches;
    int next_id = 0;
    for (const BranchDef& def : defs) {
        Branch branch;
        branch.label = def.label;
        branch.id = next_id++;
        std::optional<SteadyState> warm;
        for (size_t i = 0; i < grid.size(); ++i) {
            const double y = grid[i];
            std::optional<SteadyState> analytic;
            if (y > 0.0) {
                for (SteadyState& s : analytic_steady_theta0(y, params)) {
                    // The merged fold state is carried on the plus branch.
                    if (s.branch == def.label) analytic = s;
                }
            }
            if (!analytic) {
                warm.reset();
                continue;
            }
            SteadyState solved = *analytic;
            if (def.exact) {
                const DriveSpec drive{y, analytic->phi1_in, analytic->phi2_in};
                bool done = false;
                // warm seed first, analytic seed as the cold fallback (the
                // warm seed can sit exactly on the fold, where the Jacobian
                // is singular)
                for (const SteadyState* seed :
                     {warm ? &*warm : &*analytic, &*analytic}) {
                    try {
                        NewtonStats stats;
                        solved = solve_steady(params, drive, *seed, {}, &stats);
                        branch.newton_iterations += stats.iterations;
                        done = true;
                        break;
                    } catch (const NoConvergence&) {
                    } catch (const SingularJacobian&) {
                    }
                }
                if (!done) {
                    branch.truncated_high = true;
                    branch.truncation_reason =
                        "no convergence at Y = " + std::to_string(y);
                    warm.reset();
                    continue;
                }
                warm = solved;
            } else {
                solved.stability = classify_stability(drift_matrix(solved, params));
            }
            branch.parameters.push_back(y);
            branch.states.push_back(solved);
        }
        if (reversed) {
            std::reverse(branch.parameters.begin(), branch.parameters.end());
            std::reverse(branch.states.begin(), branch.states.end());
        }
        branches.push_back(std::move(branch));
    }
    return branches;
}

namespace {

bool symmetric_root_exists(const ModelParams& params, double y) {
    SteadyState seed;
    if (y > 1.0 + 1e-9) {
        seed = analytic_steady_theta0(y, params).front();
    } else {
        // slightly off I = 1/2, where the Jacobian is exactly singular
        seed.branch = BranchLabel::SymmetricPlus;
        seed.i1 = seed.i2 = 0.501;
        const double x = std::sqrt(intensity_scale(params) * seed.i1);
        seed.x1 = seed.x2 = Complex(x, 0.0);
        const PhaseSet phases = io_phases(seed);
        seed.phi1_in = phases.phi1_in;
        seed.phi2_in = phases.phi2_in;
        seed.phi1_out = phases.phi1_out;
        seed.phi2_out = phases.phi2_out;
    }
    NewtonOptions tight;
    tight.tolerance = 1e-13;
    try {
        const DriveSpec gauged{y, seed.phi1_in, seed.phi2_in};
        const SteadyState sol = solve_steady(params, gauged, seed, tight);
        return std::abs(sol.i1 - sol.i2) < 1e-8;
    } catch (const NoConvergence&) {
        return false;
    } catch (const SingularJacobian&) {
        return false;
    }
}

}  // namespace

FoldPoint find_turning_point(const ModelParams& params) {
    validate(params);
    if (params.theta1 != 0.0 || params.theta2 != 0.0)
        throw DomainError("find_turning_point: requires theta1 = theta2 = 0");
    double lo = 0.5;
    double hi = 2.0;
    if (symmetric_root_exists(params, lo) || !symmetric_root_exists(params, hi))
        throw NoConvergence("find_turning_point: no bracket in [0.5, 2]");
    for (int i = 0; i < 64 && hi - lo > 0.0; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (symmetric_root_exists(params, mid))
            hi = mid;
        else
            lo = mid;
    }

    FoldPoint fold;
    fold.y_critical = hi;
    SteadyState seed;
    seed.branch = BranchLabel::SymmetricPlus;
    seed.i1 = seed.i2 = 0.501;
    const double x = std::sqrt(intensity_scale(params) * seed.i1);
    seed.x1 = seed.x2 = Complex(x, 0.0);
    const PhaseSet phases = io_phases(seed);
    seed.phi1_in = phases.phi1_in;
    seed.phi2_in = phases.phi2_in;
    seed.phi1_out = phases.phi1_out;
    seed.phi2_out = phases.phi2_out;
    NewtonOptions tight;
    tight.tolerance = 1e-13;
    const DriveSpec drive{hi, seed.phi1_in, seed.phi2_in};
    fold.state = solve_steady(params, drive, seed, tight);
    const Vector4cd eig = drift_eigenvalues(drift_matrix(fold.state, params));
    fold.leading_eigenvalue = std::abs(eig.real().maxCoeff());
    return fold;
}

SteadyState continue_to_detuning(const ModelParams& params, const DriveSpec& drive,
                                 const SteadyState& seed, double theta1,
                                 double theta2, NewtonStats* stats) {
    validate(params);
    validate(drive);
    NewtonStats accumulated;
    SteadyState current = seed;
    if (theta1 == 0.0 && theta2 == 0.0) {
        ModelParams local = params;
        local.theta1 = 0.0;
        local.theta2 = 0.0;
        current = solve_steady(local, drive, seed, {}, stats);
        return current;
    }
    const double theta_span = std::max(std::abs(theta1), std::abs(theta2));
    double t = 0.0;
    double step = std::min(1.0, 0.002 / theta_span);
    while (t < 1.0) {
        if (t + step > 1.0) step = 1.0 - t;
        const double t_try = t + step;
        ModelParams local = params;
        local.theta1 = t_try * theta1;
        local.theta2 = t_try * theta2;
        bool ok = false;
        try {
            NewtonStats one;
            SteadyState next = solve_steady(local, drive, current, {}, &one);
            accumulated.iterations += one.iterations;
            accumulated.halvings += one.halvings;
            accumulated.residual_norm = one.residual_norm;
            if (std::abs(next.i1 - current.i1) <= kStepJumpCap &&
                std::abs(next.i2 - current.i2) <= kStepJumpCap) {
                current = next;
                t = t_try;
                ok = true;
            }
        } catch (const NoConvergence&) {
        } catch (const SingularJacobian&) {
        }
        if (!ok) {
            step *= 0.5;
            if (step * theta_span < kMinContinuationStep)
                throw NoConvergence(
                    "continue_to_detuning: continuation stalled at t = " +
                    std::to_string(t));
        }
    }
    if (stats) *stats = accumulated;
    return current;
}

}  // namespace eitcav
