#pragma once

#include <optional>
#include <string>
#include <vector>

#include "eitcav/model.hpp"
#include "eitcav/types.hpp"

namespace eitcav {

/// Linearization of the field equations around a steady state, in the
/// doubled basis (dx1, dx1*, dx2, dx2*), time in units of 1/kappa:
///   d(dx)/dt = A dx (+ input noise).
/// Rows for dx_j* are the conjugate-swapped rows for dx_j; at a symmetric
/// zero-detuning state the blocks coupling field 1 to field 2 vanish.
struct DriftMatrix {
    Matrix4cd matrix = Matrix4cd::Zero();
    SteadyState state;  ///< source steady state
};

struct NewtonOptions {
    double tolerance = 1e-11;  ///< absolute residual 2-norm target
    int max_iterations = 100;
    int max_halvings = 30;
};

struct NewtonStats {
    int iterations = 0;
    int halvings = 0;
    double residual_norm = 0.0;
};

/// Newton refinement of `guess` at the given drive. The guess is rotated
/// into the drive's phase gauge before iterating. Branch label and
/// continuation id are inherited from the guess; stability is classified
/// on the result. Throws NoConvergence / SingularJacobian.
SteadyState solve_steady(const ModelParams& params, const DriveSpec& drive,
                         const SteadyState& guess,
                         const NewtonOptions& options = {},
                         NewtonStats* stats = nullptr);

/// Closed-form linearization from the polarization derivatives.
/// Throws SingularInput at zero total intensity with the medium coupled.
DriftMatrix drift_matrix(const SteadyState& state, const ModelParams& params);

Vector4cd drift_eigenvalues(const DriftMatrix& drift);

/// Stable iff every eigenvalue real part < -1e-8; Marginal iff the
/// largest real part lies within +-1e-8 of zero; Unstable otherwise.
Stability classify_stability(const DriftMatrix& drift);

/// Solution curve along a scan parameter (theta or Y).
struct Branch {
    BranchLabel label = BranchLabel::Continued;
    int id = 0;
    std::vector<double> parameters;   ///< covered grid values, grid order
    std::vector<SteadyState> states;  ///< one state per covered value
    int newton_iterations = 0;
    int retries = 0;                  ///< continuation step halvings
    bool truncated_low = false;       ///< stopped before the grid start
    bool truncated_high = false;      ///< stopped before the grid end
    std::string truncation_reason;
};

/// Continuation of every zero-detuning branch across a common-detuning
/// scan (theta1 = theta2 = theta along the grid; the detunings stored in
/// `params` are ignored). Grid must be monotone. Failed grid points
/// truncate the affected branch and are flagged, never fatal.
std::vector<Branch> sweep_cavity_scan(const ModelParams& params,
                                      const DriveSpec& drive,
                                      const std::vector<double>& theta_grid);

/// Branch structure over an input-intensity grid at zero cavity detuning:
/// the symmetric S-curve (plus/minus for Y > 1, approximate low branch for
/// 1/2 < Y < 1) and the asymmetric pair for Y < 1.
std::vector<Branch> sweep_input_intensity(const ModelParams& params,
                                          const std::vector<double>& y_grid);

struct FoldPoint {
    double y_critical = 0.0;
    SteadyState state;
    double leading_eigenvalue = 0.0;  ///< |Re| of the least-damped eigenvalue
};

/// Locates the drive intensity where the symmetric branches merge, by
/// bisection on symmetric-root existence over Y in [1/2, 2]. Requires
/// zero cavity detunings. Throws NoConvergence if the bracket fails.
FoldPoint find_turning_point(const ModelParams& params);

/// Steady state at cavity detunings (theta1, theta2), reached by linear
/// homotopy from the zero-detuning state `seed` with adaptive stepping.
SteadyState continue_to_detuning(const ModelParams& params, const DriveSpec& drive,
                                 const SteadyState& seed, double theta1,
                                 double theta2, NewtonStats* stats = nullptr);

}  // namespace eitcav
