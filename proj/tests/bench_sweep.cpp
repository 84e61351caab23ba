// Timing probe for the operator sweep and a one-shot apply_j; not a ctest.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "solver.hpp"

using namespace renskog;

int main(int argc, char** argv) {
    GridSpec grid;
    grid.n_x = grid.n_p = (argc > 1) ? std::atoi(argv[1]) : 5;
    OperatorConfig cfg;
    cfg.y.kind = (argc > 2 && std::string(argv[2]) == "linear") ? YKind::linear : YKind::constant;
    cfg.y.y0 = 1.0;

    const FieldLattice f0 = FieldLattice::gaussian(grid, 0.05, 2.0, 2.0);
    const Trajectory traj = Trajectory::constant(f0);
    CollisionEngine engine(grid, cfg);

    auto t0 = std::chrono::steady_clock::now();
    auto bs = engine.bind(traj.slices[0], 1.0);
    std::vector<double> gain(grid.node_count()), loss(grid.node_count());
    engine.sweep(bs, gain, loss);
    auto t1 = std::chrono::steady_clock::now();
    std::printf("single sweep (%dx%d grid): %.3f s\n", grid.n_x, grid.n_p,
                std::chrono::duration<double>(t1 - t0).count());

    t0 = std::chrono::steady_clock::now();
    Trajectory next = apply_j(traj, f0, engine);
    t1 = std::chrono::steady_clock::now();
    std::printf("apply_j (%d slices): %.3f s\n", grid.n_t, std::chrono::duration<double>(t1 - t0).count());
    std::printf("sample gain %.6e loss %.6e next %.6e\n", gain[gain.size() / 2], loss[loss.size() / 2],
                next.slices[grid.n_t - 1].values()[gain.size() / 2]);
    return 0;
}
