#include "solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "errors.hpp"

namespace renskog {

void SolverParams::validate() const {
    if (!(R > 0.0)) throw InvalidInput("solver.R must be positive");
    if (!(L_of_R >= 0.0)) throw InvalidInput("solver.L_of_R must be nonnegative");
    if (!(K > 0.0)) throw InvalidInput("solver.K must be positive");
    if (max_iter < 1) throw InvalidInput("solver.max_iter must be >= 1");
    if (!(tol > 0.0)) throw InvalidInput("solver.tol must be positive");
}

double c_of_r(const SolverParams& params, const OperatorConfig& cfg, double radius) {
    return params.l_tilde(radius) * cfg.prefactor() * params.K;
}

double smallness_threshold(const SolverParams& params, const OperatorConfig& cfg) {
    const double scale = cfg.prefactor() * params.K;
    if (!(scale > 0.0)) return std::numeric_limits<double>::infinity();
    auto excess = [&](double r) { return 4.0 * c_of_r(params, cfg, r) * r - 1.0; };
    double hi = 1.0;
    while (excess(hi) < 0.0) {
        hi *= 2.0;
        if (hi > 1e18) return std::numeric_limits<double>::infinity();
    }
    double lo = 0.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (excess(mid) <= 0.0 ? lo : hi) = mid;
        if (hi - lo <= 1e-14 * hi) break;
    }
    return lo;
}

namespace {

double min_value(const Trajectory& traj) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& s : traj.slices)
        for (double v : s.values()) m = std::min(m, v);
    return m;
}

} // namespace

Trajectory apply_j(const Trajectory& traj, const FieldLattice& f0, const CollisionEngine& engine) {
    const GridSpec& grid = engine.grid();
    if (!(traj.spec == grid) || !(f0.spec() == grid))
        throw InvalidInput("apply_j: trajectory, initial datum and engine grids must match");
    if (traj.slices.size() != static_cast<size_t>(grid.n_t))
        throw InvalidInput("apply_j: trajectory must hold n_t slices");

    const size_t count = grid.node_count();
    std::vector<std::vector<double>> q(grid.n_t);
    std::vector<double> gain(count), loss(count);
    for (int k = 0; k < grid.n_t; ++k) {
        const auto bs = engine.bind(traj.slices[k], grid.time(k));
        engine.sweep(bs, gain, loss);
        q[k].resize(count);
        for (size_t i = 0; i < count; ++i) q[k][i] = gain[i] - loss[i];
    }

    Trajectory out;
    out.spec = grid;
    out.slices.reserve(grid.n_t);
    out.slices.push_back(f0);
    std::vector<double> integral(count, 0.0);
    const double dt = grid.dt();
    for (int k = 1; k < grid.n_t; ++k) {
        FieldLattice slice(grid);
        auto values = slice.values();
        const auto f0v = f0.values();
        for (size_t i = 0; i < count; ++i) {
            integral[i] += 0.5 * dt * (q[k - 1][i] + q[k][i]);
            values[i] = f0v[i] + integral[i];
        }
        out.slices.push_back(std::move(slice));
    }
    return out;
}

Trajectory apply_j(const Trajectory& traj, const FieldLattice& f0, const OperatorConfig& cfg) {
    return apply_j(traj, f0, CollisionEngine(traj.spec, cfg));
}

std::pair<Trajectory, SolverDiagnostics> picard_solve(const FieldLattice& f0, const SolverParams& params,
                                                      const OperatorConfig& cfg) {
    params.validate();
    cfg.validate();
    const GridSpec& grid = f0.spec();
    const WeightTable weights(grid, cfg.kernel);

    const double norm0 = weighted_norm(f0, weights);
    if (norm0 > params.R / 2.0) {
        std::ostringstream msg;
        msg << "initial datum too large: ||f0|| = " << norm0 << " exceeds R/2 = " << params.R / 2.0;
        throw SmallnessViolated(msg.str());
    }
    const double threshold = smallness_threshold(params, cfg);
    if (params.R > threshold) {
        std::ostringstream msg;
        msg << "R = " << params.R << " exceeds the smallness threshold " << threshold;
        throw SmallnessViolated(msg.str());
    }

    CollisionEngine engine(grid, cfg);
    SolverDiagnostics diag;
    diag.threshold = threshold;

    Trajectory current = Trajectory::constant(f0);
    double prev_residual = 0.0;
    for (int n = 1; n <= params.max_iter; ++n) {
        Trajectory next = apply_j(current, f0, engine);
        const double residual = weighted_norm_diff(next, current, weights);
        IterationRecord rec;
        rec.iteration = n;
        rec.norm = weighted_norm(next, weights);
        rec.residual = residual;
        rec.ratio = (n > 1 && prev_residual > 0.0) ? residual / prev_residual : 0.0;
        rec.min_value = min_value(next);
        diag.iterations.push_back(rec);
        current = std::move(next);
        prev_residual = residual;
        if (residual < params.tol) {
            diag.converged = true;
            diag.final_residual = residual;
            break;
        }
    }
    if (!diag.converged) {
        const double ratio = diag.iterations.back().ratio;
        std::ostringstream msg;
        msg << "no convergence after " << params.max_iter << " iterations; last residual "
            << diag.iterations.back().residual << ", contraction ratio " << ratio;
        throw NoConvergence(msg.str(), ratio);
    }

    const auto pos = positivity_check(current, cfg.kernel);
    diag.positivity_min = pos.min_value;
    diag.positivity_ok = pos.ok;
    diag.slice_mass.reserve(current.slices.size());
    for (const auto& s : current.slices) diag.slice_mass.push_back(slice_mass(s));
    return {std::move(current), std::move(diag)};
}

double contraction_estimate(const Trajectory& f, const Trajectory& g, const OperatorConfig& cfg,
                            const SolverParams& params) {
    if (!(f.spec == g.spec)) throw InvalidInput("contraction_estimate: grids must match");
    const WeightTable weights(f.spec, cfg.kernel);
    const double nf = weighted_norm(f, weights);
    const double ng = weighted_norm(g, weights);
    if (nf > params.R || ng > params.R)
        throw InvalidInput("contraction_estimate: both trajectories must lie in the R-ball");
    const double denom = weighted_norm_diff(f, g, weights);
    if (denom == 0.0) return 0.0;
    CollisionEngine engine(f.spec, cfg);
    const FieldLattice zero(f.spec);
    const Trajectory jf = apply_j(f, zero, engine);
    const Trajectory jg = apply_j(g, zero, engine);
    return weighted_norm_diff(jf, jg, weights) / denom;
}

PositivityResult positivity_check(const Trajectory& traj, const KernelSpec& kernel) {
    const double m = min_value(traj);
    const double scale = weighted_norm(traj, kernel);
    return {m, m >= -1e-10 * scale};
}

} // namespace renskog
