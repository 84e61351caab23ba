#include "renskog/renskog.h"

#include <cstring>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "errors.hpp"
#include "field_io.hpp"
#include "hypotheses.hpp"
#include "rng.hpp"
#include "solver.hpp"

using namespace renskog;

struct rek_field {
    FieldLattice f;
};
struct rek_trajectory {
    Trajectory t;
};
struct rek_diagnostics {
    SolverDiagnostics d;
};
struct rek_hypothesis_report {
    HypothesisReport r;
};

namespace {

thread_local std::string g_error;

rek_status map_code(ErrorCode code) {
    switch (code) {
        case ErrorCode::invalid_input: return REK_ERR_INVALID_INPUT;
        case ErrorCode::domain: return REK_ERR_DOMAIN;
        case ErrorCode::smallness_violated: return REK_ERR_SMALLNESS;
        case ErrorCode::no_convergence: return REK_ERR_NO_CONVERGENCE;
        case ErrorCode::io: return REK_ERR_IO;
        default: return REK_ERR_INTERNAL;
    }
}

template <typename F>
rek_status wrap(F&& fn) {
    try {
        fn();
        return REK_OK;
    } catch (const Error& e) {
        g_error = e.what();
        return map_code(e.code());
    } catch (const std::exception& e) {
        g_error = e.what();
        return REK_ERR_INTERNAL;
    }
}

void require(bool ok, const char* what) {
    if (!ok) throw InvalidInput(what);
}

Vec3 to_vec(const double v[3]) {
    require(v != nullptr, "null vector argument");
    return {v[0], v[1], v[2]};
}

GridSpec to_grid(const rek_grid_spec* g) {
    require(g != nullptr, "null grid spec");
    GridSpec out;
    out.x_max = g->x_max;
    out.p_max = g->p_max;
    out.n_x = g->n_x;
    out.n_p = g->n_p;
    out.n_omega = g->n_omega;
    out.t_max = g->t_max;
    out.n_t = g->n_t;
    out.validate();
    return out;
}

KernelSpec to_kernel(const rek_kernel_spec* k) {
    require(k != nullptr, "null kernel spec");
    KernelSpec out;
    out.delta = k->delta;
    out.sigma_tilde0 = k->sigma_tilde0;
    out.c0 = k->c0;
    out.validate();
    return out;
}

YFactorSpec to_y(const rek_y_spec* y) {
    require(y != nullptr, "null Y spec");
    require(y->kind == REK_Y_CONSTANT || y->kind == REK_Y_LINEAR, "y.kind must be constant or linear");
    YFactorSpec out;
    out.kind = y->kind == REK_Y_CONSTANT ? YKind::constant : YKind::linear;
    out.y0 = y->y0;
    out.b = y->b;
    out.validate();
    return out;
}

OperatorConfig to_cfg(const rek_operator_config* cfg) {
    require(cfg != nullptr, "null operator config");
    require(cfg->mode == REK_MODE_ENSKOG || cfg->mode == REK_MODE_BOLTZMANN,
            "operator.mode must be enskog or boltzmann");
    OperatorConfig out;
    out.a = cfg->a;
    out.mode = cfg->mode == REK_MODE_ENSKOG ? CollisionMode::enskog : CollisionMode::boltzmann;
    out.lambda = cfg->lambda;
    out.kernel = to_kernel(&cfg->kernel);
    out.y = to_y(&cfg->y);
    out.validate();
    return out;
}

SolverParams to_params(const rek_solver_params* p, const OperatorConfig& cfg) {
    require(p != nullptr, "null solver params");
    SolverParams out;
    out.R = p->R;
    out.L_of_R = p->L_of_R;
    out.K = p->K;
    out.max_iter = p->max_iter;
    out.tol = p->tol;
    out.f_plus_at_zero = cfg.f_at_zero();
    out.f_minus_at_zero = cfg.f_at_zero();
    return out;
}

} // namespace

extern "C" {

const char* rek_last_error(void) { return g_error.c_str(); }

void rek_set_threads(int n) {
#ifdef _OPENMP
    if (n > 0)
        omp_set_num_threads(n);
    else
        omp_set_num_threads(omp_get_num_procs());
#else
    (void)n;
#endif
}

rek_grid_spec rek_grid_spec_default(void) {
    const GridSpec g;
    return {g.x_max, g.p_max, g.n_x, g.n_p, g.n_omega, g.t_max, g.n_t};
}

rek_kernel_spec rek_kernel_spec_default(void) {
    const KernelSpec k;
    return {k.delta, k.sigma_tilde0, k.c0};
}

rek_y_spec rek_y_spec_default(void) {
    const YFactorSpec y;
    return {y.kind == YKind::constant ? REK_Y_CONSTANT : REK_Y_LINEAR, y.y0, y.b};
}

rek_operator_config rek_operator_config_default(void) {
    const OperatorConfig c;
    return {c.a, c.mode == CollisionMode::enskog ? REK_MODE_ENSKOG : REK_MODE_BOLTZMANN, c.lambda,
            rek_kernel_spec_default(), rek_y_spec_default()};
}

rek_solver_params rek_solver_params_default(void) {
    const SolverParams p;
    return {p.R, p.L_of_R, p.K, p.max_iter, p.tol};
}

rek_status rek_energy(const double p[3], double* out) {
    return wrap([&] {
        require(out != nullptr, "null output");
        *out = energy(to_vec(p));
    });
}

rek_status rek_collision_invariants(const double p[3], const double p1[3], double* s, double* g,
                                    double* v_moller) {
    return wrap([&] {
        require(s && g && v_moller, "null output");
        const auto inv = collision_invariants(Momentum3(to_vec(p)), Momentum3(to_vec(p1)));
        *s = inv.s;
        *g = inv.g;
        *v_moller = inv.v_moller;
    });
}

rek_status rek_in_s_plus(const double p[3], const double p1[3], const double omega[3], int* out) {
    return wrap([&] {
        require(out != nullptr, "null output");
        *out = in_s_plus(Momentum3(to_vec(p)), Momentum3(to_vec(p1)), to_vec(omega)) ? 1 : 0;
    });
}

rek_status rek_post_collision(const double p[3], const double p1[3], const double omega[3],
                              double p_prime[3], double p1_prime[3], double* q) {
    return wrap([&] {
        require(p_prime && p1_prime && q, "null output");
        const auto pc = post_collision(Momentum3(to_vec(p)), Momentum3(to_vec(p1)), to_vec(omega));
        for (int k = 0; k < 3; ++k) {
            p_prime[k] = pc.p_prime.p[k];
            p1_prime[k] = pc.p1_prime.p[k];
        }
        *q = pc.q;
    });
}

rek_status rek_omega_flux(const double p[3], const double p1[3], const double omega[3], double* out) {
    return wrap([&] {
        require(out != nullptr, "null output");
        *out = omega_flux(Momentum3(to_vec(p)), Momentum3(to_vec(p1)), to_vec(omega));
    });
}

rek_status rek_scattering_angle(const double p[3], const double p1[3], const double omega[3],
                                double* theta) {
    return wrap([&] {
        require(theta != nullptr, "null output");
        const auto geo = CollisionGeometry::compute(Momentum3(to_vec(p)), Momentum3(to_vec(p1)), to_vec(omega));
        *theta = scattering_angle(geo);
    });
}

rek_status rek_weight_m(const double x[3], const double p[3], const rek_kernel_spec* kernel, double* out) {
    return wrap([&] {
        require(out != nullptr, "null output");
        *out = weight_m(to_vec(x), Momentum3(to_vec(p)), to_kernel(kernel));
    });
}

rek_status rek_cross_section(const double p[3], const double p1[3], const double omega[3],
                             const rek_kernel_spec* kernel, double* out) {
    return wrap([&] {
        require(out != nullptr, "null output");
        *out = cross_section(Momentum3(to_vec(p)), Momentum3(to_vec(p1)), to_vec(omega), to_kernel(kernel));
    });
}

rek_status rek_kernel_b(const double p[3], const double p1[3], const double omega[3],
                        const rek_kernel_spec* kernel, double* out) {
    return wrap([&] {
        require(out != nullptr, "null output");
        *out = kernel_b(Momentum3(to_vec(p)), Momentum3(to_vec(p1)), to_vec(omega), to_kernel(kernel));
    });
}

rek_status rek_y_factor(double rho, const rek_y_spec* y, double* out) {
    return wrap([&] {
        require(out != nullptr, "null output");
        *out = y_factor(rho, to_y(y));
    });
}

rek_status rek_field_create_zero(const rek_grid_spec* grid, rek_field** out) {
    return wrap([&] {
        require(out != nullptr, "null output");
        *out = new rek_field{FieldLattice(to_grid(grid))};
    });
}

rek_status rek_field_create_gaussian(const rek_grid_spec* grid, double amplitude, double x_width,
                                     double p_width, rek_field** out) {
    return wrap([&] {
        require(out != nullptr, "null output");
        *out = new rek_field{FieldLattice::gaussian(to_grid(grid), amplitude, x_width, p_width)};
    });
}

void rek_field_free(rek_field* field) { delete field; }

rek_status rek_field_interpolate(const rek_field* field, const double x[3], const double p[3], double* out) {
    return wrap([&] {
        require(field && out, "null argument");
        *out = field->f.interpolate(to_vec(x), to_vec(p));
    });
}

rek_status rek_field_weighted_norm(const rek_field* field, const rek_kernel_spec* kernel, double* out) {
    return wrap([&] {
        require(field && out, "null argument");
        *out = weighted_norm(field->f, to_kernel(kernel));
    });
}

rek_status rek_field_scale(rek_field* field, double factor) {
    return wrap([&] {
        require(field != nullptr, "null field");
        for (auto& v : field->f.values()) v *= factor;
    });
}

rek_status rek_field_save(const rek_field* field, const char* header_path, const char* bin_path) {
    return wrap([&] {
        require(field && header_path && bin_path, "null argument");
        save_field(field->f, header_path, bin_path);
    });
}

rek_status rek_field_load(const char* header_path, const char* bin_path, rek_field** out) {
    return wrap([&] {
        require(header_path && bin_path && out, "null argument");
        *out = new rek_field{load_field(header_path, bin_path)};
    });
}

void rek_trajectory_free(rek_trajectory* traj) { delete traj; }

rek_status rek_trajectory_num_slices(const rek_trajectory* traj, int32_t* out) {
    return wrap([&] {
        require(traj && out, "null argument");
        *out = static_cast<int32_t>(traj->t.slices.size());
    });
}

rek_status rek_trajectory_slice(const rek_trajectory* traj, int32_t k, rek_field** out) {
    return wrap([&] {
        require(traj && out, "null argument");
        require(k >= 0 && k < static_cast<int32_t>(traj->t.slices.size()), "slice index out of range");
        *out = new rek_field{traj->t.slices[k]};
    });
}

rek_status rek_trajectory_weighted_norm(const rek_trajectory* traj, const rek_kernel_spec* kernel,
                                        double* out) {
    return wrap([&] {
        require(traj && out, "null argument");
        *out = weighted_norm(traj->t, to_kernel(kernel));
    });
}

rek_status rek_trajectory_save(const rek_trajectory* traj, const char* header_path, const char* bin_path) {
    return wrap([&] {
        require(traj && header_path && bin_path, "null argument");
        save_trajectory(traj->t, header_path, bin_path);
    });
}

rek_status rek_trajectory_load(const char* header_path, const char* bin_path, rek_trajectory** out) {
    return wrap([&] {
        require(header_path && bin_path && out, "null argument");
        *out = new rek_trajectory{load_trajectory(header_path, bin_path)};
    });
}

rek_status rek_trajectory_positivity(const rek_trajectory* traj, const rek_kernel_spec* kernel,
                                     double* min_value, int* ok) {
    return wrap([&] {
        require(traj && min_value && ok, "null argument");
        const auto res = positivity_check(traj->t, to_kernel(kernel));
        *min_value = res.min_value;
        *ok = res.ok ? 1 : 0;
    });
}

rek_status rek_trajectory_diff_norm(const rek_trajectory* a, const rek_trajectory* b,
                                    const rek_kernel_spec* kernel, double* out) {
    return wrap([&] {
        require(a && b && out, "null argument");
        const WeightTable weights(a->t.spec, to_kernel(kernel));
        *out = weighted_norm_diff(a->t, b->t, weights);
    });
}

rek_status rek_trajectory_slice_mass(const rek_trajectory* traj, int32_t k, double* out) {
    return wrap([&] {
        require(traj && out, "null argument");
        require(k >= 0 && k < static_cast<int32_t>(traj->t.slices.size()), "slice index out of range");
        *out = slice_mass(traj->t.slices[k]);
    });
}

rek_status rek_density(const rek_field* slice, double t, const double x[3], double* out) {
    return wrap([&] {
        require(slice && out, "null argument");
        *out = density(slice->f, t, to_vec(x));
    });
}

rek_status rek_f_plus(const rek_field* slice, double t, const double x[3], const double omega[3],
                      const rek_operator_config* cfg, double* out) {
    return wrap([&] {
        require(slice && out, "null argument");
        *out = f_plus(slice->f, t, to_vec(x), to_vec(omega), to_cfg(cfg));
    });
}

rek_status rek_f_minus(const rek_field* slice, double t, const double x[3], const double omega[3],
                       const rek_operator_config* cfg, double* out) {
    return wrap([&] {
        require(slice && out, "null argument");
        *out = f_minus(slice->f, t, to_vec(x), to_vec(omega), to_cfg(cfg));
    });
}

rek_status rek_gain_sharp(const rek_field* slice, double t, const double x[3], const double p[3],
                          const rek_operator_config* cfg, double* out) {
    return wrap([&] {
        require(slice && out, "null argument");
        *out = gain_sharp(slice->f, t, to_vec(x), Momentum3(to_vec(p)), to_cfg(cfg));
    });
}

rek_status rek_loss_sharp(const rek_field* slice, double t, const double x[3], const double p[3],
                          const rek_operator_config* cfg, double* out) {
    return wrap([&] {
        require(slice && out, "null argument");
        *out = loss_sharp(slice->f, t, to_vec(x), Momentum3(to_vec(p)), to_cfg(cfg));
    });
}

rek_status rek_collision_sharp(const rek_field* slice, double t, const double x[3], const double p[3],
                               const rek_operator_config* cfg, double* out) {
    return wrap([&] {
        require(slice && out, "null argument");
        *out = collision_sharp(slice->f, t, to_vec(x), Momentum3(to_vec(p)), to_cfg(cfg));
    });
}

rek_status rek_smallness_threshold(const rek_solver_params* params, const rek_operator_config* cfg,
                                   double* out) {
    return wrap([&] {
        require(out != nullptr, "null output");
        const auto c = to_cfg(cfg);
        *out = smallness_threshold(to_params(params, c), c);
    });
}

rek_status rek_apply_j(const rek_trajectory* traj, const rek_field* f0, const rek_operator_config* cfg,
                       rek_trajectory** out) {
    return wrap([&] {
        require(traj && f0 && out, "null argument");
        *out = new rek_trajectory{apply_j(traj->t, f0->f, to_cfg(cfg))};
    });
}

rek_status rek_picard_solve(const rek_field* f0, const rek_solver_params* params,
                            const rek_operator_config* cfg, rek_trajectory** out_traj,
                            rek_diagnostics** out_diag) {
    return wrap([&] {
        require(f0 && out_traj && out_diag, "null argument");
        const auto c = to_cfg(cfg);
        auto [traj, diag] = picard_solve(f0->f, to_params(params, c), c);
        *out_traj = new rek_trajectory{std::move(traj)};
        *out_diag = new rek_diagnostics{std::move(diag)};
    });
}

rek_status rek_contraction_estimate(const rek_trajectory* f, const rek_trajectory* g,
                                    const rek_operator_config* cfg, const rek_solver_params* params,
                                    double* out) {
    return wrap([&] {
        require(f && g && out, "null argument");
        const auto c = to_cfg(cfg);
        *out = contraction_estimate(f->t, g->t, c, to_params(params, c));
    });
}

void rek_diagnostics_free(rek_diagnostics* diag) { delete diag; }

rek_status rek_diagnostics_iterations(const rek_diagnostics* diag, int32_t* out) {
    return wrap([&] {
        require(diag && out, "null argument");
        *out = static_cast<int32_t>(diag->d.iterations.size());
    });
}

rek_status rek_diagnostics_row(const rek_diagnostics* diag, int32_t i, double* norm, double* residual,
                               double* ratio, double* min_value) {
    return wrap([&] {
        require(diag && norm && residual && ratio && min_value, "null argument");
        require(i >= 0 && i < static_cast<int32_t>(diag->d.iterations.size()), "row index out of range");
        const auto& r = diag->d.iterations[i];
        *norm = r.norm;
        *residual = r.residual;
        *ratio = r.ratio;
        *min_value = r.min_value;
    });
}

rek_status rek_diagnostics_converged(const rek_diagnostics* diag, int* out) {
    return wrap([&] {
        require(diag && out, "null argument");
        *out = diag->d.converged ? 1 : 0;
    });
}

rek_status rek_diagnostics_threshold(const rek_diagnostics* diag, double* out) {
    return wrap([&] {
        require(diag && out, "null argument");
        *out = diag->d.threshold;
    });
}

rek_status rek_diagnostics_positivity(const rek_diagnostics* diag, double* min_value, int* ok) {
    return wrap([&] {
        require(diag && min_value && ok, "null argument");
        *min_value = diag->d.positivity_min;
        *ok = diag->d.positivity_ok ? 1 : 0;
    });
}

rek_status rek_diagnostics_num_masses(const rek_diagnostics* diag, int32_t* out) {
    return wrap([&] {
        require(diag && out, "null argument");
        *out = static_cast<int32_t>(diag->d.slice_mass.size());
    });
}

rek_status rek_diagnostics_mass(const rek_diagnostics* diag, int32_t k, double* out) {
    return wrap([&] {
        require(diag && out, "null argument");
        require(k >= 0 && k < static_cast<int32_t>(diag->d.slice_mass.size()), "mass index out of range");
        *out = diag->d.slice_mass[k];
    });
}

rek_status rek_estimate_k(const rek_kernel_spec* kernel, const rek_grid_spec* grid, double a,
                          int32_t n_samples, uint64_t seed, rek_hypothesis_report** out) {
    return wrap([&] {
        require(out != nullptr, "null output");
        *out = new rek_hypothesis_report{estimate_k(to_kernel(kernel), to_grid(grid), a, n_samples, seed)};
    });
}

void rek_report_free(rek_hypothesis_report* report) { delete report; }

rek_status rek_report_k(const rek_hypothesis_report* report, double* k1, double* k2, double* k) {
    return wrap([&] {
        require(report && k1 && k2 && k, "null argument");
        *k1 = report->r.k1_estimate;
        *k2 = report->r.k2_estimate;
        *k = report->r.k;
    });
}

rek_status rek_report_sigma_ratio(const rek_hypothesis_report* report, double* out) {
    return wrap([&] {
        require(report && out, "null argument");
        *out = report->r.sigma_tilde_ratio_sup;
    });
}

rek_status rek_report_to_json(const rek_hypothesis_report* report, char** out) {
    return wrap([&] {
        require(report && out, "null argument");
        const std::string text = report->r.to_json();
        char* buf = new char[text.size() + 1];
        std::memcpy(buf, text.c_str(), text.size() + 1);
        *out = buf;
    });
}

rek_status rek_report_from_json(const char* text, rek_hypothesis_report** out) {
    return wrap([&] {
        require(text && out, "null argument");
        *out = new rek_hypothesis_report{HypothesisReport::from_json(text)};
    });
}

void rek_string_free(char* s) { delete[] s; }

rek_status rek_galeano_bound(double beta, double c, double L, double a, const double v[3], double* out) {
    return wrap([&] {
        require(out != nullptr, "null output");
        *out = galeano_bound(GaleanoParams{beta, c, L, a}, to_vec(v));
    });
}

rek_status rek_y_lipschitz(const rek_y_spec* y, const rek_grid_spec* grid, const rek_kernel_spec* kernel,
                           double R, int32_t n_pairs, uint64_t seed, double* out) {
    return wrap([&] {
        require(out != nullptr, "null output");
        *out = y_lipschitz_estimate(to_y(y), to_grid(grid), to_kernel(kernel), R, n_pairs, seed);
    });
}

rek_status rek_random_trajectory(const rek_grid_spec* grid, const rek_kernel_spec* kernel, double scale,
                                 uint64_t seed, rek_trajectory** out) {
    return wrap([&] {
        require(out != nullptr, "null output");
        const GridSpec g = to_grid(grid);
        const WeightTable weights(g, to_kernel(kernel));
        Rng rng(seed);
        Trajectory traj = Trajectory::constant(FieldLattice(g));
        for (auto& slice : traj.slices) {
            auto vals = slice.values();
            const auto m = weights.values();
            for (size_t i = 0; i < vals.size(); ++i) vals[i] = scale * rng.uniform(-1.0, 1.0) * m[i];
        }
        *out = new rek_trajectory{std::move(traj)};
    });
}

rek_status rek_trajectory_from_field(const rek_field* f0, rek_trajectory** out) {
    return wrap([&] {
        require(f0 && out, "null argument");
        *out = new rek_trajectory{Trajectory::constant(f0->f)};
    });
}

} // extern "C"
