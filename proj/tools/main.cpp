#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>
#include <renskog/renskog.h>

#include "config.hpp"

using nlohmann::json;
using rencli::ConfigError;
using rencli::Scenario;

namespace {

struct CliFailure : std::runtime_error {
    CliFailure(int code, const std::string& msg) : std::runtime_error(msg), exit_code(code) {}
    int exit_code;
};

int code_for(rek_status st) {
    switch (st) {
        case REK_ERR_SMALLNESS: return 2;
        case REK_ERR_NO_CONVERGENCE: return 3;
        default: return 1;
    }
}

void check(rek_status st, const std::string& context) {
    if (st != REK_OK) throw CliFailure(code_for(st), context + ": " + rek_last_error());
}

struct FieldDeleter {
    void operator()(rek_field* f) const { rek_field_free(f); }
};
struct TrajDeleter {
    void operator()(rek_trajectory* t) const { rek_trajectory_free(t); }
};
struct DiagDeleter {
    void operator()(rek_diagnostics* d) const { rek_diagnostics_free(d); }
};
struct ReportDeleter {
    void operator()(rek_hypothesis_report* r) const { rek_report_free(r); }
};
using FieldPtr = std::unique_ptr<rek_field, FieldDeleter>;
using TrajPtr = std::unique_ptr<rek_trajectory, TrajDeleter>;
using DiagPtr = std::unique_ptr<rek_diagnostics, DiagDeleter>;
using ReportPtr = std::unique_ptr<rek_hypothesis_report, ReportDeleter>;

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_text(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CliFailure(1, "cannot write " + path.string());
    out << content;
}

// same bit-to-double mapping as the library's seeded generator
struct ToolRng {
    std::mt19937_64 eng;
    explicit ToolRng(std::uint64_t seed) : eng(seed) {}
    double uniform01() { return (eng() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
    void unit(double w[3]) {
        const double u = uniform(-1.0, 1.0);
        const double phi = uniform(0.0, 2.0 * M_PI);
        const double s = std::sqrt(std::max(0.0, 1.0 - u * u));
        w[0] = s * std::cos(phi);
        w[1] = s * std::sin(phi);
        w[2] = u;
    }
};

bool parse_number(const std::string& s, double& out) {
    try {
        size_t pos = 0;
        out = std::stod(s, &pos);
        return pos == s.size();
    } catch (const std::exception&) {
        return false;
    }
}

double resolve_k(const Scenario& sc, json& summary) {
    double num = 0.0;
    if (parse_number(sc.solver_k, num)) {
        if (!(num > 0.0)) throw ConfigError("solver.K", "must be positive");
        summary["K_source"] = "config";
        return num;
    }
    if (sc.solver_k == "auto") {
        const double shift_a = sc.op.mode == REK_MODE_ENSKOG ? sc.op.a : 0.0;
        rek_hypothesis_report* raw = nullptr;
        check(rek_estimate_k(&sc.op.kernel, &sc.grid, shift_a, sc.hypotheses_samples, sc.seed, &raw),
              "estimate_k");
        ReportPtr report(raw);
        double k1, k2, k;
        check(rek_report_k(report.get(), &k1, &k2, &k), "estimate_k");
        summary["K_source"] = "auto";
        return k;
    }
    // otherwise: path to a hypothesis report written by check-hypotheses
    std::ifstream in(sc.solver_k);
    if (!in) throw ConfigError("solver.K", "expected 'auto', a number, or a readable report path");
    std::stringstream ss;
    ss << in.rdbuf();
    json j;
    try {
        j = json::parse(ss.str());
    } catch (const json::exception& e) {
        throw ConfigError("solver.K", std::string("report parse failure: ") + e.what());
    }
    const json& hyp = j.contains("hypotheses") ? j.at("hypotheses") : j;
    rek_hypothesis_report* raw = nullptr;
    check(rek_report_from_json(hyp.dump().c_str(), &raw), "report load");
    ReportPtr report(raw);
    double k1, k2, k;
    check(rek_report_k(report.get(), &k1, &k2, &k), "report load");
    summary["K_source"] = sc.solver_k;
    return k;
}

double resolve_l(const Scenario& sc, json& summary) {
    double num = 0.0;
    if (parse_number(sc.solver_l, num)) {
        if (!(num >= 0.0)) throw ConfigError("solver.L", "must be nonnegative");
        summary["L_source"] = "config";
        return num;
    }
    if (sc.solver_l != "auto") throw ConfigError("solver.L", "expected 'auto' or a number");
    summary["L_source"] = "auto";
    if (sc.op.mode == REK_MODE_BOLTZMANN || sc.op.y.kind == REK_Y_CONSTANT) return 0.0;
    double l = 0.0;
    check(rek_y_lipschitz(&sc.op.y, &sc.grid, &sc.op.kernel, 1.0, 12, sc.seed, &l), "y_lipschitz");
    return l;
}

double resolve_r(const Scenario& sc, const rek_solver_params& params, json& summary) {
    double num = 0.0;
    if (parse_number(sc.solver_r, num)) {
        if (!(num > 0.0)) throw ConfigError("solver.R", "must be positive");
        summary["R_source"] = "config";
        return num;
    }
    if (sc.solver_r != "auto") throw ConfigError("solver.R", "expected 'auto' or a number");
    double threshold = 0.0;
    check(rek_smallness_threshold(&params, &sc.op, &threshold), "smallness_threshold");
    if (!std::isfinite(threshold))
        throw ConfigError("solver.R", "auto R undefined: the smallness threshold is unbounded");
    summary["R_source"] = "auto (0.5 x threshold)";
    return 0.5 * threshold;
}

FieldPtr build_initial(const Scenario& sc) {
    rek_field* raw = nullptr;
    if (sc.initial_kind == "zero") {
        check(rek_field_create_zero(&sc.grid, &raw), "initial data");
    } else if (sc.initial_kind == "gaussian") {
        check(rek_field_create_gaussian(&sc.grid, sc.amplitude, sc.x_width, sc.p_width, &raw),
              "initial data");
    } else {
        check(rek_field_load((sc.initial_path + ".json").c_str(), (sc.initial_path + ".bin").c_str(), &raw),
              "initial data");
    }
    return FieldPtr(raw);
}

json diagnostics_to_json(const rek_diagnostics* diag) {
    json j;
    int32_t n = 0;
    check(rek_diagnostics_iterations(diag, &n), "diagnostics");
    int conv = 0;
    check(rek_diagnostics_converged(diag, &conv), "diagnostics");
    double threshold = 0.0;
    check(rek_diagnostics_threshold(diag, &threshold), "diagnostics");
    double pmin = 0.0;
    int pok = 0;
    check(rek_diagnostics_positivity(diag, &pmin, &pok), "diagnostics");
    j["iterations"] = n;
    j["converged"] = conv != 0;
    j["threshold"] = threshold;
    j["positivity_min"] = pmin;
    j["positivity_ok"] = pok != 0;
    if (n > 0) {
        double norm, residual, ratio, minv;
        check(rek_diagnostics_row(diag, n - 1, &norm, &residual, &ratio, &minv), "diagnostics");
        j["final_residual"] = residual;
        j["final_norm"] = norm;
    }
    int32_t nm = 0;
    check(rek_diagnostics_num_masses(diag, &nm), "diagnostics");
    json masses = json::array();
    for (int32_t k = 0; k < nm; ++k) {
        double m = 0.0;
        check(rek_diagnostics_mass(diag, k, &m), "diagnostics");
        masses.push_back(m);
    }
    j["slice_mass"] = masses;
    return j;
}

std::string diagnostics_csv(const rek_diagnostics* diag) {
    std::string csv = "iteration,norm,residual,ratio,min_value\n";
    int32_t n = 0;
    check(rek_diagnostics_iterations(diag, &n), "diagnostics");
    for (int32_t i = 0; i < n; ++i) {
        double norm, residual, ratio, minv;
        check(rek_diagnostics_row(diag, i, &norm, &residual, &ratio, &minv), "diagnostics");
        csv += std::to_string(i + 1) + "," + g17(norm) + "," + g17(residual) + "," + g17(ratio) + ","
             + g17(minv) + "\n";
    }
    return csv;
}

int run_solve(const Scenario& sc) {
    std::filesystem::create_directories(sc.output_dir);
    json summary;
    summary["subcommand"] = "solve";
    summary["seed"] = sc.seed;

    rek_solver_params params = rek_solver_params_default();
    params.max_iter = sc.max_iter;
    params.tol = sc.tol;
    params.K = resolve_k(sc, summary);
    params.L_of_R = resolve_l(sc, summary);
    params.R = resolve_r(sc, params, summary);
    summary["K"] = params.K;
    summary["L_of_R"] = params.L_of_R;
    summary["R"] = params.R;

    FieldPtr f0 = build_initial(sc);
    rek_trajectory* traj_raw = nullptr;
    rek_diagnostics* diag_raw = nullptr;
    check(rek_picard_solve(f0.get(), &params, &sc.op, &traj_raw, &diag_raw), "picard_solve");
    TrajPtr traj(traj_raw);
    DiagPtr diag(diag_raw);

    const auto out = std::filesystem::path(sc.output_dir);
    write_text(out / "diagnostics.csv", diagnostics_csv(diag.get()));
    check(rek_trajectory_save(traj.get(), (out / "header.json").string().c_str(),
                              (out / "trajectory.bin").string().c_str()),
          "trajectory save");

    summary.update(diagnostics_to_json(diag.get()));
    double norm = 0.0;
    check(rek_trajectory_weighted_norm(traj.get(), &sc.op.kernel, &norm), "norm");
    summary["weighted_norm"] = norm;
    write_text(out / "summary.json", summary.dump(2) + "\n");

    std::printf("solve: converged in %d iterations, final residual %s, positivity min %s\n",
                summary["iterations"].get<int>(), g17(summary.value("final_residual", 0.0)).c_str(),
                g17(summary["positivity_min"].get<double>()).c_str());
    return 0;
}

int run_check_hypotheses(const Scenario& sc) {
    std::filesystem::create_directories(sc.output_dir);
    const double shift_a = sc.op.mode == REK_MODE_ENSKOG ? sc.op.a : 0.0;
    rek_hypothesis_report* raw = nullptr;
    check(rek_estimate_k(&sc.op.kernel, &sc.grid, shift_a, sc.hypotheses_samples, sc.seed, &raw),
          "estimate_k");
    ReportPtr report(raw);
    char* text = nullptr;
    check(rek_report_to_json(report.get(), &text), "report");
    json hyp = json::parse(text);
    rek_string_free(text);

    // vacuity sweep of the earlier smallness condition R^2 < beta^4 |v| / (16 pi^2 c L a)
    json galeano;
    galeano["params"] = {{"beta", 1.0}, {"c", 1.0}, {"L", 1.0}, {"a", 1.0}};
    json rows = json::array();
    for (double vmag : {0.0, 1e-6, 1e-3, 1e-1, 1.0, 10.0}) {
        const double v[3] = {vmag, 0.0, 0.0};
        double bound = 0.0;
        check(rek_galeano_bound(1.0, 1.0, 1.0, 1.0, v, &bound), "galeano_bound");
        rows.push_back({{"v", vmag}, {"bound", bound}});
    }
    galeano["bounds"] = rows;
    galeano["inf_over_v"] = 0.0;
    {
        const double v0[3] = {1.0, 0.0, 0.0};
        double bound = 0.0;
        check(rek_galeano_bound(1.0, 1.0, 1.0, 1.0, v0, &bound), "galeano_bound");
        galeano["repaired_v0"] = {{"v0", 1.0}, {"bound", bound}, {"admissible_r_max", std::sqrt(bound)}};
    }

    json out_json;
    out_json["hypotheses"] = hyp;
    out_json["galeano"] = galeano;
    write_text(std::filesystem::path(sc.output_dir) / "report.json", out_json.dump(2) + "\n");

    double k1, k2, k;
    check(rek_report_k(report.get(), &k1, &k2, &k), "report");
    std::printf("check-hypotheses: K1 = %s, K2 = %s, K = %s (empirical, truncated domain)\n",
                g17(k1).c_str(), g17(k2).c_str(), g17(k).c_str());
    return 0;
}

int run_kinematics_selftest(const Scenario& sc) {
    std::filesystem::create_directories(sc.output_dir);
    ToolRng rng(sc.seed);
    double max_dp = 0.0, max_de = 0.0, max_id = 0.0, max_vm2 = 0.0, min_q = 0.0, max_vmb = -1.0;
    const long n = sc.selftest_samples;
    for (long i = 0; i < n; ++i) {
        double p[3], p1[3], w[3];
        for (int k = 0; k < 3; ++k) {
            p[k] = rng.uniform(-10.0, 10.0);
            p1[k] = rng.uniform(-10.0, 10.0);
        }
        rng.unit(w);
        double e_p, e_p1;
        check(rek_energy(p, &e_p), "energy");
        check(rek_energy(p1, &e_p1), "energy");
        double dotwd = 0.0;
        for (int k = 0; k < 3; ++k) dotwd += w[k] * (p1[k] / e_p1 - p[k] / e_p);
        if (dotwd < 0.0)
            for (int k = 0; k < 3; ++k) w[k] = -w[k];

        double s, g, vm;
        check(rek_collision_invariants(p, p1, &s, &g, &vm), "invariants");
        max_id = std::max(max_id, std::abs(s - 4.0 - 4.0 * g * g));
        double dv2 = 0.0, cr2 = 0.0;
        const double cx = p[1] * p1[2] - p[2] * p1[1];
        const double cy = p[2] * p1[0] - p[0] * p1[2];
        const double cz = p[0] * p1[1] - p[1] * p1[0];
        for (int k = 0; k < 3; ++k) {
            const double d = p[k] / e_p - p1[k] / e_p1;
            dv2 += d * d;
        }
        cr2 = (cx * cx + cy * cy + cz * cz) / (e_p * e_p * e_p1 * e_p1);
        max_vm2 = std::max(max_vm2, std::abs(vm * vm - (dv2 - cr2)));
        max_vmb = std::max(max_vmb, vm - std::sqrt(dv2));

        double pp[3], p1p[3], q;
        check(rek_post_collision(p, p1, w, pp, p1p, &q), "post_collision");
        min_q = std::min(min_q, q);
        double e_pp, e_p1p;
        check(rek_energy(pp, &e_pp), "energy");
        check(rek_energy(p1p, &e_p1p), "energy");
        for (int k = 0; k < 3; ++k) max_dp = std::max(max_dp, std::abs(pp[k] + p1p[k] - p[k] - p1[k]));
        max_de = std::max(max_de, std::abs(e_pp + e_p1p - e_p - e_p1));
    }
    json j;
    j["subcommand"] = "kinematics-selftest";
    j["seed"] = sc.seed;
    j["samples"] = n;
    j["max_momentum_deviation"] = max_dp;
    j["max_energy_deviation"] = max_de;
    j["max_s_identity_deviation"] = max_id;
    j["max_moller_identity_deviation"] = max_vm2;
    j["max_moller_over_relative_velocity"] = max_vmb;
    j["min_q"] = min_q;
    write_text(std::filesystem::path(sc.output_dir) / "selftest.json", j.dump(2) + "\n");
    std::printf("kinematics-selftest over %ld samples:\n", n);
    std::printf("  max |p' + p1' - p - p1|      = %s\n", g17(max_dp).c_str());
    std::printf("  max |p0' + p10' - p0 - p10|  = %s\n", g17(max_de).c_str());
    std::printf("  max |s - 4 - 4 g^2|          = %s\n", g17(max_id).c_str());
    std::printf("  max |v_M^2 identity residual| = %s\n", g17(max_vm2).c_str());
    std::printf("  min q over S+2               = %s\n", g17(min_q).c_str());
    return 0;
}

int run_boltzmann_limit(const Scenario& sc) {
    std::filesystem::create_directories(sc.output_dir);
    const double lambda = sc.op.lambda;

    // Boltzmann reference and the enskog family share lambda = a^2 y0.
    rek_operator_config bz = sc.op;
    bz.mode = REK_MODE_BOLTZMANN;
    bz.lambda = lambda;
    bz.y.kind = REK_Y_CONSTANT;
    bz.y.y0 = 1.0;

    std::vector<rek_operator_config> enskogs;
    for (double a : sc.boltzmann_a_values) {
        if (!(a > 0.0)) throw ConfigError("boltzmann.a_values", "all diameters must be positive");
        rek_operator_config cfg = sc.op;
        cfg.mode = REK_MODE_ENSKOG;
        cfg.a = a;
        cfg.y.kind = REK_Y_CONSTANT;
        cfg.y.y0 = lambda / (a * a);
        enskogs.push_back(cfg);
    }

    // shared R: half the tightest threshold across the sweep
    rek_solver_params params = rek_solver_params_default();
    params.max_iter = sc.max_iter;
    params.tol = sc.tol;
    json summary;
    summary["subcommand"] = "boltzmann-limit";
    summary["seed"] = sc.seed;
    summary["lambda"] = lambda;
    params.K = resolve_k(sc, summary);
    params.L_of_R = 0.0;
    double r_min = std::numeric_limits<double>::infinity();
    for (const auto& cfg : enskogs) {
        double th = 0.0;
        check(rek_smallness_threshold(&params, &cfg, &th), "threshold");
        r_min = std::min(r_min, th);
    }
    {
        double th = 0.0;
        check(rek_smallness_threshold(&params, &bz, &th), "threshold");
        r_min = std::min(r_min, th);
    }
    params.R = 0.5 * r_min;
    summary["R"] = params.R;

    // initial gaussian scaled to norm R/2
    FieldPtr f0 = build_initial(sc);
    double n0 = 0.0;
    check(rek_field_weighted_norm(f0.get(), &sc.op.kernel, &n0), "norm");
    if (n0 > 0.0) check(rek_field_scale(f0.get(), params.R / (2.0 * n0)), "scale");

    rek_trajectory* bz_raw = nullptr;
    rek_diagnostics* bz_diag = nullptr;
    check(rek_picard_solve(f0.get(), &params, &bz, &bz_raw, &bz_diag), "boltzmann solve");
    TrajPtr bz_traj(bz_raw);
    DiagPtr bz_d(bz_diag);

    std::string csv = "a,y0,diff_norm\n";
    json rows = json::array();
    std::vector<double> diffs;
    for (size_t i = 0; i < enskogs.size(); ++i) {
        rek_trajectory* tr = nullptr;
        rek_diagnostics* dg = nullptr;
        check(rek_picard_solve(f0.get(), &params, &enskogs[i], &tr, &dg), "enskog solve");
        TrajPtr traj(tr);
        DiagPtr diag(dg);
        double diff = 0.0;
        check(rek_trajectory_diff_norm(traj.get(), bz_traj.get(), &sc.op.kernel, &diff), "diff norm");
        diffs.push_back(diff);
        csv += g17(sc.boltzmann_a_values[i]) + "," + g17(enskogs[i].y.y0) + "," + g17(diff) + "\n";
        rows.push_back({{"a", sc.boltzmann_a_values[i]}, {"y0", enskogs[i].y.y0}, {"diff_norm", diff}});
        std::printf("boltzmann-limit: a = %g, |enskog - boltzmann| = %s\n", sc.boltzmann_a_values[i],
                    g17(diff).c_str());
    }
    bool monotone = true;
    for (size_t i = 1; i < diffs.size(); ++i) monotone = monotone && diffs[i] < diffs[i - 1];
    summary["rows"] = rows;
    summary["monotone_decreasing"] = monotone;
    const auto out = std::filesystem::path(sc.output_dir);
    write_text(out / "boltzmann_limit.csv", csv);
    write_text(out / "summary.json", summary.dump(2) + "\n");
    std::printf("boltzmann-limit: monotone decreasing: %s\n", monotone ? "yes" : "no");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"relativistic Enskog operator and near-vacuum mild-solution solver"};
    app.require_subcommand(1);

    std::string config_path;
    long long seed_override = -1;
    int threads = 0;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("config", config_path, "scenario config file")->required();
        cmd->add_option("--seed", seed_override, "override the config seed");
        cmd->add_option("--threads", threads, "worker threads (0 = auto)");
    };
    auto* solve = app.add_subcommand("solve", "run the Picard fixed-point solver");
    auto* hyp = app.add_subcommand("check-hypotheses", "estimate K and sweep the vacuity bound");
    auto* kin = app.add_subcommand("kinematics-selftest", "collision kinematics invariant sweep");
    auto* bl = app.add_subcommand("boltzmann-limit", "enskog vs boltzmann a-sweep");
    for (auto* cmd : {solve, hyp, kin, bl}) add_common(cmd);

    CLI11_PARSE(app, argc, argv);

    try {
        Scenario sc = rencli::parse_scenario_file(config_path);
        if (seed_override >= 0) sc.seed = static_cast<std::uint64_t>(seed_override);
        rek_set_threads(threads);
        if (solve->parsed()) return run_solve(sc);
        if (hyp->parsed()) return run_check_hypotheses(sc);
        if (kin->parsed()) return run_kinematics_selftest(sc);
        return run_boltzmann_limit(sc);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const CliFailure& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return e.exit_code;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
