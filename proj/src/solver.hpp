#pragma once

#include <utility>

#include "collision_op.hpp"

namespace renskog {

struct SolverParams {
    double R = 0.0;       // ball radius for M_R
    double L_of_R = 0.0;  // Lipschitz constant of F± on the ball
    double K = 0.0;       // hypothesis constant (measured or supplied)
    int max_iter = 50;
    double tol = 1e-10;   // fixed-point residual tolerance in the weighted norm
    double f_plus_at_zero = 1.0;
    double f_minus_at_zero = 1.0;

    void validate() const;
    // L~(R) = L(R) R + |F+(0)| + |F-(0)|
    double l_tilde(double radius) const {
        return L_of_R * radius + std::abs(f_plus_at_zero) + std::abs(f_minus_at_zero);
    }
};

// C(R) = L~(R) a^2 K (lambda replaces a^2 in boltzmann mode).
double c_of_r(const SolverParams& params, const OperatorConfig& cfg, double radius);

// Largest R with R/2 + 2 C(R) R^2 <= R, i.e. 4 C(R) R <= 1, by bisection.
// Infinity when the operator prefactor or K vanishes.
double smallness_threshold(const SolverParams& params, const OperatorConfig& cfg);

struct IterationRecord {
    int iteration;
    double norm;
    double residual;
    double ratio; // residual / previous residual, 0 for the first iteration
    double min_value;
};

struct SolverDiagnostics {
    std::vector<IterationRecord> iterations;
    bool converged = false;
    double final_residual = 0.0;
    double threshold = 0.0;
    double positivity_min = 0.0;
    bool positivity_ok = true;
    std::vector<double> slice_mass; // of the final iterate
};

// J(f^#)(t_k) = f0 + cumulative trapezoid of Q(f)^# over the time grid.
Trajectory apply_j(const Trajectory& traj, const FieldLattice& f0, const OperatorConfig& cfg);
Trajectory apply_j(const Trajectory& traj, const FieldLattice& f0, const CollisionEngine& engine);

// Picard iteration f^{n+1} = J(f^n) from the constant-in-time trajectory f0.
// Throws SmallnessViolated when ||f0|| > R/2 or R > smallness_threshold;
// throws NoConvergence when max_iter is exhausted.
std::pair<Trajectory, SolverDiagnostics> picard_solve(const FieldLattice& f0, const SolverParams& params,
                                                      const OperatorConfig& cfg);

// |||J(f) - J(g)||| / |||f - g|||; 0 when the denominator vanishes.
// Both trajectories must lie in the R-ball of params.
double contraction_estimate(const Trajectory& f, const Trajectory& g, const OperatorConfig& cfg,
                            const SolverParams& params);

struct PositivityResult {
    double min_value;
    bool ok;
};

// ok iff the minimum node value >= -1e-10 * |||traj|||.
PositivityResult positivity_check(const Trajectory& traj, const KernelSpec& kernel);

} // namespace renskog
