// Acceptance suite: one check per criterion, each printing a PASS/FAIL line.
// Usage: acceptance [criterion ...] [--cli <path>]   (no criteria = run all)

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "field_io.hpp"
#include "hypotheses.hpp"
#include "oracles.hpp"
#include "rng.hpp"
#include "solver.hpp"

using namespace renskog;

namespace {

std::string g_cli_path;

struct Outcome {
    bool pass;
    std::string detail;
};

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

// -------------------------------------------------------------------------
// 1. kinematics conservation over 10^6 random triples with omega in S+2

Outcome criterion_1() {
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(1001);
    double max_dp = 0.0, max_de = 0.0;
    for (int i = 0; i < 1000000; ++i) {
        const Momentum3 p(rng.uniform_box(10.0));
        const Momentum3 p1(rng.uniform_box(10.0));
        Vec3 w = rng.unit_vector();
        if (dot(w, p1.velocity() - p.velocity()) < 0.0) w = -w;
        const auto pc = post_collision(p, p1, w);
        const Vec3 dp = pc.p_prime.p + pc.p1_prime.p - p.p - p1.p;
        max_dp = std::max({max_dp, std::abs(dp.x), std::abs(dp.y), std::abs(dp.z)});
        max_de = std::max(max_de, std::abs(pc.p_prime.p0 + pc.p1_prime.p0 - p.p0 - p1.p0));
    }
    const double elapsed = seconds_since(t0);
    const bool pass = max_dp < 1e-10 && max_de < 1e-10 && elapsed < 10.0;
    return {pass, "max |dP| = " + fmt(max_dp) + ", max |dE| = " + fmt(max_de) + ", runtime " + fmt(elapsed)
                      + " s (< 10 s)"};
}

// -------------------------------------------------------------------------
// 2. identity suite: s = 4+4g^2, Moller identity, head-on exchange

Outcome criterion_2() {
    Rng rng(1002);
    double max_id = 0.0, max_vm2 = 0.0;
    for (int i = 0; i < 1000000; ++i) {
        const Momentum3 p(rng.uniform_box(10.0));
        const Momentum3 p1(rng.uniform_box(10.0));
        const auto inv = collision_invariants(p, p1);
        max_id = std::max(max_id, std::abs(inv.s - 4.0 - 4.0 * inv.g * inv.g));
        const Vec3 dv = p.velocity() - p1.velocity();
        const Vec3 cr = cross(p.p, p1.p) / (p.p0 * p1.p0);
        max_vm2 = std::max(max_vm2, std::abs(inv.v_moller * inv.v_moller - (norm2(dv) - norm2(cr))));
    }
    const auto pc = post_collision(Momentum3({1, 0, 0}), Momentum3({0, 0, 0}), {-1, 0, 0});
    const double head_on_q = std::abs(pc.q - 1.0);
    const double head_on_swap = std::max(norm(pc.p_prime.p), norm(pc.p1_prime.p - Vec3{1, 0, 0}));
    const bool pass = max_id < 1e-10 && max_vm2 < 1e-10 && head_on_q < 1e-10 && head_on_swap < 1e-10;
    return {pass, "max |s-4-4g^2| = " + fmt(max_id) + ", max v_M^2 residual = " + fmt(max_vm2)
                      + ", head-on |q-1| = " + fmt(head_on_q) + ", exchange residual = " + fmt(head_on_swap)};
}

// -------------------------------------------------------------------------
// 3. gain/loss vs the 10^6-sample Monte Carlo estimator at 20 query points

Outcome criterion_3() {
    const auto t0 = std::chrono::steady_clock::now();
    GridSpec grid; // default 7^3 lattice
    grid.n_omega = 128;
    OperatorConfig cfg; // default enskog a = 0.1, linear Y
    const FieldLattice slice = FieldLattice::gaussian(grid, 0.5, 2.2, 2.2);
    CollisionEngine engine(grid, cfg);
    const auto bs = engine.bind(slice, 0.5);

    Rng rng(1003);
    double worst = 0.0;
    int checked = 0;
    std::vector<CollisionEngine::Entry> entries;
    for (int q = 0; q < 20; ++q) {
        const Vec3 x = rng.uniform_box(2.0);
        const Momentum3 p(rng.uniform_box(2.0));
        engine.build_entries(p, entries);
        const double gq = engine.gain_with(bs, x, p, entries);
        const double lq = engine.loss_with(bs, x, p, entries);
        const auto gm = testing::mc_gain(engine, bs, x, p, 1000000, 2000 + q);
        const auto lm = testing::mc_loss(engine, bs, x, p, 1000000, 3000 + q);
        const double zg = gm.se > 0.0 ? std::abs(gq - gm.value) / gm.se : 0.0;
        const double zl = lm.se > 0.0 ? std::abs(lq - lm.value) / lm.se : 0.0;
        worst = std::max({worst, zg, zl});
        checked += 2;
    }
    const double elapsed = seconds_since(t0);
    const bool pass = worst < 3.0 && elapsed < 300.0;
    return {pass, std::to_string(checked) + " comparisons, worst |quad-mc|/se = " + fmt(worst)
                      + " (< 3), runtime " + fmt(elapsed) + " s (< 300 s)"};
}

// -------------------------------------------------------------------------
// shared setup for 4 and 5: acceptance grid, constant Y, measured K

struct SmallnessSetup {
    GridSpec grid;
    OperatorConfig cfg;
    SolverParams params;
    double threshold;
};

SmallnessSetup smallness_setup(int n_axis, int n_t, std::uint64_t seed) {
    SmallnessSetup s;
    s.grid.n_x = s.grid.n_p = n_axis;
    s.grid.n_t = n_t;
    s.cfg.a = 0.1;
    s.cfg.y.kind = YKind::constant;
    s.cfg.y.y0 = 1.0;
    const auto report = estimate_k(s.cfg.kernel, s.grid, s.cfg.a, 300, seed);
    s.params.K = report.k;
    s.params.L_of_R = 0.0;
    s.params.f_plus_at_zero = 1.0;
    s.params.f_minus_at_zero = 1.0;
    s.params.R = 1.0;
    s.threshold = smallness_threshold(s.params, s.cfg);
    s.params.R = 0.5 * s.threshold;
    return s;
}

// 4. time-integrated |Q±| against C(R) m R^2 at random nodes

Outcome criterion_4() {
    auto setup = smallness_setup(5, 9, 1004);
    const GridSpec& grid = setup.grid;
    const double R = setup.params.R;
    const double c_r = c_of_r(setup.params, setup.cfg, R);
    const WeightTable weights(grid, setup.cfg.kernel);
    CollisionEngine engine(grid, setup.cfg);

    Rng rng(10040);
    int violations = 0;
    double worst_margin = 0.0; // largest integrated |Q| relative to its bound
    std::vector<CollisionEngine::Entry> entries;
    for (int trial = 0; trial < 5; ++trial) {
        const Trajectory traj = testing::random_trajectory(grid, weights, R, rng);
        std::vector<CollisionEngine::BoundSlice> bound;
        bound.reserve(grid.n_t);
        for (int k = 0; k < grid.n_t; ++k) bound.push_back(engine.bind(traj.slices[k], grid.time(k)));
        for (int node = 0; node < 100; ++node) {
            const int ix = rng.index(grid.x_count());
            const int ip = rng.index(grid.p_count());
            const Vec3 x = grid.x_node(ix);
            const Momentum3 p(grid.p_node(ip));
            engine.build_entries(p, entries);
            double cum_gain = 0.0, cum_loss = 0.0;
            double prev_gain = 0.0, prev_loss = 0.0;
            for (int k = 0; k < grid.n_t; ++k) {
                const double gk = std::abs(engine.gain_with(bound[k], x, p, entries));
                const double lk = std::abs(engine.loss_with(bound[k], x, p, entries));
                if (k > 0) {
                    cum_gain += 0.5 * grid.dt() * (prev_gain + gk);
                    cum_loss += 0.5 * grid.dt() * (prev_loss + lk);
                }
                prev_gain = gk;
                prev_loss = lk;
            }
            const double bound_value = c_r * weights.m(ix, ip) * R * R;
            const double tolerance = bound_value * (1.0 + 1e-9);
            if (cum_gain > tolerance || cum_loss > tolerance) ++violations;
            worst_margin = std::max(worst_margin, std::max(cum_gain, cum_loss) / bound_value);
        }
    }
    const bool pass = violations == 0;
    return {pass, "500 nodes x 5 trajectories, violations = " + std::to_string(violations)
                      + ", worst |int Q|/bound = " + fmt(worst_margin) + " (K = " + fmt(setup.params.K)
                      + ", R = " + fmt(R) + ")"};
}

// 5. contraction ratios < 1 and geometric Picard convergence

Outcome criterion_5() {
    const auto t0 = std::chrono::steady_clock::now();
    auto setup = smallness_setup(5, 9, 1005);
    const GridSpec& grid = setup.grid;
    const double R = setup.params.R;
    const WeightTable weights(grid, setup.cfg.kernel);
    CollisionEngine engine(grid, setup.cfg);

    // pool of random in-ball trajectories; J applied once to each
    Rng rng(10050);
    const int pool = 8;
    std::vector<Trajectory> trajs, j_trajs;
    const FieldLattice zero(grid);
    for (int i = 0; i < pool; ++i) {
        trajs.push_back(testing::random_trajectory(grid, weights, R, rng));
        j_trajs.push_back(apply_j(trajs.back(), zero, engine));
    }
    double worst_ratio = 0.0;
    int pairs = 0;
    std::vector<std::pair<int, int>> seen;
    while (pairs < 20) {
        const int i = rng.index(pool);
        const int j = rng.index(pool);
        if (i == j) continue;
        const std::pair<int, int> key{std::min(i, j), std::max(i, j)};
        bool dup = false;
        for (const auto& s : seen) dup = dup || s == key;
        if (dup) continue;
        seen.push_back(key);
        const double denom = weighted_norm_diff(trajs[i], trajs[j], weights);
        const double num = weighted_norm_diff(j_trajs[i], j_trajs[j], weights);
        worst_ratio = std::max(worst_ratio, denom > 0.0 ? num / denom : 0.0);
        ++pairs;
    }

    // Picard from a compliant gaussian
    FieldLattice f0 = FieldLattice::gaussian(grid, 1.0, 2.0, 2.0);
    const double n0 = weighted_norm(f0, weights);
    for (auto& v : f0.values()) v *= R / (2.0 * n0);
    SolverParams params = setup.params;
    params.tol = 1e-9;
    params.max_iter = 40;
    const auto [solution, diag] = picard_solve(f0, params, setup.cfg);
    bool geometric = diag.converged && diag.iterations.size() >= 3;
    for (size_t i = 1; i < diag.iterations.size(); ++i)
        geometric = geometric && diag.iterations[i].ratio < 1.0;
    const auto pos = positivity_check(solution, setup.cfg.kernel);

    const double elapsed = seconds_since(t0);
    const bool pass = worst_ratio < 1.0 && geometric && pos.ok && elapsed < 900.0;
    return {pass, "20 pair ratios, worst = " + fmt(worst_ratio) + " (< 1); picard iterations = "
                      + std::to_string(diag.iterations.size()) + ", geometric = "
                      + (geometric ? "yes" : "no") + ", positivity min = " + fmt(pos.min_value)
                      + ", runtime " + fmt(elapsed) + " s (< 900 s)"};
}

// -------------------------------------------------------------------------
// 6. smallness threshold: bisection vs the closed form 1/(8 a^2 K)

Outcome criterion_6() {
    double worst = 0.0;
    for (const auto& [a, k] : std::vector<std::pair<double, double>>{{0.1, 5.0}, {0.2, 5.0}, {0.05, 17.0}}) {
        OperatorConfig cfg;
        cfg.a = a;
        cfg.y.kind = YKind::constant;
        cfg.y.y0 = 1.0;
        SolverParams params;
        params.R = 1.0;
        params.K = k;
        params.L_of_R = 0.0;
        const double numeric = smallness_threshold(params, cfg);
        const double closed = 1.0 / (8.0 * a * a * k);
        worst = std::max(worst, std::abs(numeric - closed) / closed);
    }
    return {worst < 1e-6, "worst relative bisection error = " + fmt(worst) + " (< 1e-6)"};
}

// -------------------------------------------------------------------------
// 7. Galeano vacuity

Outcome criterion_7() {
    const GaleanoParams params{1.3, 0.7, 2.1, 0.4};
    const bool zero_exact = galeano_bound(params, {0, 0, 0}) == 0.0;

    Rng rng(1007);
    double worst_linearity = 0.0;
    for (int i = 0; i < 100; ++i) {
        const Vec3 v = rng.uniform_box(5.0);
        const double c = rng.uniform(0.1, 10.0);
        const double lhs = galeano_bound(params, c * v);
        const double rhs = c * galeano_bound(params, v);
        if (rhs != 0.0) worst_linearity = std::max(worst_linearity, std::abs(lhs - rhs) / rhs);
    }
    const double repaired = galeano_bound(params, {1.0, 0.0, 0.0}); // fixed v0 = 1
    const bool nonempty = std::sqrt(repaired) > 0.0;
    const bool pass = zero_exact && worst_linearity < 1e-12 && nonempty;
    return {pass, std::string("bound(v=0) == 0 exactly: ") + (zero_exact ? "yes" : "no")
                      + ", linearity residual = " + fmt(worst_linearity) + ", repaired R interval (0, "
                      + fmt(std::sqrt(repaired)) + ") nonempty"};
}

// -------------------------------------------------------------------------
// 8. Boltzmann limit: lambda = a^2 y0 fixed, a decreasing

Outcome criterion_8() {
    GridSpec grid;
    grid.n_x = grid.n_p = 5;
    grid.n_t = 5;
    const double lambda = 0.04;
    const std::vector<double> diameters{0.2, 0.1, 0.05};

    OperatorConfig bz;
    bz.mode = CollisionMode::boltzmann;
    bz.lambda = lambda;
    bz.a = 0.0;
    bz.y.kind = YKind::constant;
    bz.y.y0 = 1.0;

    std::vector<OperatorConfig> enskogs;
    for (double a : diameters) {
        OperatorConfig cfg;
        cfg.mode = CollisionMode::enskog;
        cfg.a = a;
        cfg.y.kind = YKind::constant;
        cfg.y.y0 = lambda / (a * a); // a^2 y0 = lambda across the sweep
        enskogs.push_back(cfg);
    }
    SolverParams params;
    params.L_of_R = 0.0;
    params.max_iter = 40;
    params.tol = 1e-8;
    double r_min = std::numeric_limits<double>::infinity();
    {
        double k_max = 0.0;
        for (double a : diameters) k_max = std::max(k_max, estimate_k(bz.kernel, grid, a, 200, 1008).k);
        params.K = k_max;
        for (const auto& cfg : enskogs) {
            params.f_plus_at_zero = params.f_minus_at_zero = cfg.f_at_zero();
            r_min = std::min(r_min, smallness_threshold(params, cfg));
        }
        params.f_plus_at_zero = params.f_minus_at_zero = 1.0;
        r_min = std::min(r_min, smallness_threshold(params, bz));
    }
    params.R = 0.5 * r_min;

    const KernelSpec kernel = bz.kernel;
    FieldLattice f0 = FieldLattice::gaussian(grid, 1.0, 2.0, 2.0);
    const double n0 = weighted_norm(f0, kernel);
    for (auto& v : f0.values()) v *= params.R / (2.0 * n0);

    params.f_plus_at_zero = params.f_minus_at_zero = 1.0;
    const auto [bz_traj, bz_diag] = picard_solve(f0, params, bz);
    const WeightTable weights(grid, kernel);
    std::vector<double> diffs;
    std::string table;
    for (size_t i = 0; i < enskogs.size(); ++i) {
        params.f_plus_at_zero = params.f_minus_at_zero = enskogs[i].f_at_zero();
        const auto [traj, diag] = picard_solve(f0, params, enskogs[i]);
        diffs.push_back(weighted_norm_diff(traj, bz_traj, weights));
        table += (i ? ", " : "") + std::string("a=") + fmt(diameters[i]) + ": " + fmt(diffs.back());
    }
    bool monotone = true;
    for (size_t i = 1; i < diffs.size(); ++i) monotone = monotone && diffs[i] < diffs[i - 1];
    return {monotone, "|enskog - boltzmann| norms: " + table + " (strictly decreasing: "
                          + (monotone ? "yes" : "no") + ")"};
}

// -------------------------------------------------------------------------
// 9. CLI determinism: byte-identical diagnostics.csv for identical runs

Outcome criterion_9() {
    if (g_cli_path.empty()) return {false, "no --cli path provided"};
    const auto dir = std::filesystem::temp_directory_path() / "renskog_acceptance_9";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    const std::string body = "grid.n_x = 5\ngrid.n_p = 5\ngrid.n_omega = 16\ngrid.n_t = 5\n"
                             "y.kind = constant\ny.y0 = 1.0\nhypotheses.n_samples = 100\n"
                             "initial.kind = gaussian\ninitial.amplitude = 1e-4\n"
                             "initial.x_width = 2.0\ninitial.p_width = 2.0\n";
    auto write_cfg = [&](const std::string& name, const std::string& outdir) {
        const auto p = dir / name;
        std::ofstream out(p);
        out << body << "output_dir = " << (dir / outdir).string() << "\n";
        return p;
    };
    const auto cfg_a = write_cfg("a.cfg", "out_a");
    const auto cfg_b = write_cfg("b.cfg", "out_b");
    auto run = [&](const std::filesystem::path& cfg) {
        const std::string cmd = g_cli_path + " solve " + cfg.string() + " --seed 17 > /dev/null 2>&1";
        return std::system(cmd.c_str());
    };
    if (run(cfg_a) != 0 || run(cfg_b) != 0) return {false, "solve run failed"};
    auto slurp = [](const std::filesystem::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    const std::string da = slurp(dir / "out_a" / "diagnostics.csv");
    const std::string db = slurp(dir / "out_b" / "diagnostics.csv");
    const bool csv_same = !da.empty() && da == db;
    const bool traj_same = slurp(dir / "out_a" / "trajectory.bin") == slurp(dir / "out_b" / "trajectory.bin");
    std::filesystem::remove_all(dir);
    const bool pass = csv_same && traj_same;
    return {pass, std::string("diagnostics.csv byte-identical: ") + (csv_same ? "yes" : "no")
                      + ", trajectory.bin byte-identical: " + (traj_same ? "yes" : "no")};
}

const char* kNames[] = {
    "kinematics conservation",    "collision identities",        "operator vs Monte Carlo oracle",
    "time-integrated Q bound",    "contraction and convergence", "smallness threshold formula",
    "vacuity of the prior bound", "Boltzmann limit",             "CLI determinism",
};

} // namespace

int main(int argc, char** argv) {
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--cli") == 0 && i + 1 < argc) {
            g_cli_path = argv[++i];
        } else {
            const int c = std::atoi(argv[i]);
            if (c < 1 || c > 9) {
                std::fprintf(stderr, "usage: acceptance [1..9 ...] [--cli <path>]\n");
                return 2;
            }
            selected.push_back(c);
        }
    }
    if (selected.empty()) selected = {1, 2, 3, 4, 5, 6, 7, 8, 9};

    const std::function<Outcome()> checks[] = {criterion_1, criterion_2, criterion_3,
                                               criterion_4, criterion_5, criterion_6,
                                               criterion_7, criterion_8, criterion_9};
    bool all_pass = true;
    for (int c : selected) {
        const Outcome out = checks[c - 1]();
        std::printf("[%s] criterion %d: %s — %s\n", out.pass ? "PASS" : "FAIL", c, kNames[c - 1],
                    out.detail.c_str());
        std::fflush(stdout);
        all_pass = all_pass && out.pass;
    }
    return all_pass ? 0 : 1;
}
