/* renskog — relativistic Enskog collision operator and near-vacuum
 * mild-solution solver.
 *
 * C API of the shared library. All functions return rek_status; outputs are
 * written through pointers. Stateful objects are opaque handles freed with
 * their rek_*_free function. On any failure the thread-local message from
 * rek_last_error() describes the cause.
 */
#ifndef RENSKOG_H
#define RENSKOG_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rek_status {
    REK_OK = 0,
    REK_ERR_INVALID_INPUT = 1,
    REK_ERR_DOMAIN = 2,
    REK_ERR_SMALLNESS = 3,
    REK_ERR_NO_CONVERGENCE = 4,
    REK_ERR_IO = 5,
    REK_ERR_INTERNAL = 6
} rek_status;

const char* rek_last_error(void);

/* 0 = library default (all hardware threads) */
void rek_set_threads(int n);

/* ------------------------------------------------------------------ */
/* configuration                                                       */

typedef struct rek_grid_spec {
    double x_max;
    double p_max;
    int32_t n_x;
    int32_t n_p;
    int32_t n_omega;
    double t_max;
    int32_t n_t;
} rek_grid_spec;

typedef struct rek_kernel_spec {
    double delta;
    double sigma_tilde0;
    double c0;
} rek_kernel_spec;

typedef enum rek_y_kind { REK_Y_CONSTANT = 0, REK_Y_LINEAR = 1 } rek_y_kind;

typedef struct rek_y_spec {
    int32_t kind; /* rek_y_kind */
    double y0;    /* constant kind */
    double b;     /* linear kind: Y(rho) = 1 + b rho */
} rek_y_spec;

typedef enum rek_mode { REK_MODE_ENSKOG = 0, REK_MODE_BOLTZMANN = 1 } rek_mode;

typedef struct rek_operator_config {
    double a;
    int32_t mode; /* rek_mode */
    double lambda;
    rek_kernel_spec kernel;
    rek_y_spec y;
} rek_operator_config;

typedef struct rek_solver_params {
    double R;
    double L_of_R;
    double K;
    int32_t max_iter;
    double tol;
} rek_solver_params;

rek_grid_spec rek_grid_spec_default(void);
rek_kernel_spec rek_kernel_spec_default(void);
rek_y_spec rek_y_spec_default(void);
rek_operator_config rek_operator_config_default(void);
rek_solver_params rek_solver_params_default(void);

/* ------------------------------------------------------------------ */
/* kinematics                                                          */

rek_status rek_energy(const double p[3], double* out);
rek_status rek_collision_invariants(const double p[3], const double p1[3], double* s, double* g, double* v_moller);
rek_status rek_in_s_plus(const double p[3], const double p1[3], const double omega[3], int* out);
rek_status rek_post_collision(const double p[3], const double p1[3], const double omega[3], double p_prime[3],
                              double p1_prime[3], double* q);
rek_status rek_omega_flux(const double p[3], const double p1[3], const double omega[3], double* out);
rek_status rek_scattering_angle(const double p[3], const double p1[3], const double omega[3], double* theta);

/* ------------------------------------------------------------------ */
/* kernel                                                              */

rek_status rek_weight_m(const double x[3], const double p[3], const rek_kernel_spec* kernel, double* out);
rek_status rek_cross_section(const double p[3], const double p1[3], const double omega[3],
                             const rek_kernel_spec* kernel, double* out);
rek_status rek_kernel_b(const double p[3], const double p1[3], const double omega[3],
                        const rek_kernel_spec* kernel, double* out);
rek_status rek_y_factor(double rho, const rek_y_spec* y, double* out);

/* ------------------------------------------------------------------ */
/* fields and trajectories                                             */

typedef struct rek_field rek_field;
typedef struct rek_trajectory rek_trajectory;

rek_status rek_field_create_zero(const rek_grid_spec* grid, rek_field** out);
rek_status rek_field_create_gaussian(const rek_grid_spec* grid, double amplitude, double x_width,
                                     double p_width, rek_field** out);
void rek_field_free(rek_field* field);
rek_status rek_field_interpolate(const rek_field* field, const double x[3], const double p[3], double* out);
rek_status rek_field_weighted_norm(const rek_field* field, const rek_kernel_spec* kernel, double* out);
rek_status rek_field_scale(rek_field* field, double factor);
rek_status rek_field_save(const rek_field* field, const char* header_path, const char* bin_path);
rek_status rek_field_load(const char* header_path, const char* bin_path, rek_field** out);

void rek_trajectory_free(rek_trajectory* traj);
rek_status rek_trajectory_num_slices(const rek_trajectory* traj, int32_t* out);
rek_status rek_trajectory_slice(const rek_trajectory* traj, int32_t k, rek_field** out); /* copy */
rek_status rek_trajectory_weighted_norm(const rek_trajectory* traj, const rek_kernel_spec* kernel, double* out);
rek_status rek_trajectory_save(const rek_trajectory* traj, const char* header_path, const char* bin_path);
rek_status rek_trajectory_load(const char* header_path, const char* bin_path, rek_trajectory** out);
rek_status rek_trajectory_positivity(const rek_trajectory* traj, const rek_kernel_spec* kernel,
                                     double* min_value, int* ok);
rek_status rek_trajectory_diff_norm(const rek_trajectory* a, const rek_trajectory* b,
                                    const rek_kernel_spec* kernel, double* out);
rek_status rek_trajectory_slice_mass(const rek_trajectory* traj, int32_t k, double* out);

/* ------------------------------------------------------------------ */
/* collision operator                                                  */

rek_status rek_density(const rek_field* slice, double t, const double x[3], double* out);
rek_status rek_f_plus(const rek_field* slice, double t, const double x[3], const double omega[3],
                      const rek_operator_config* cfg, double* out);
rek_status rek_f_minus(const rek_field* slice, double t, const double x[3], const double omega[3],
                       const rek_operator_config* cfg, double* out);
rek_status rek_gain_sharp(const rek_field* slice, double t, const double x[3], const double p[3],
                          const rek_operator_config* cfg, double* out);
rek_status rek_loss_sharp(const rek_field* slice, double t, const double x[3], const double p[3],
                          const rek_operator_config* cfg, double* out);
rek_status rek_collision_sharp(const rek_field* slice, double t, const double x[3], const double p[3],
                               const rek_operator_config* cfg, double* out);

/* ------------------------------------------------------------------ */
/* solver                                                              */

typedef struct rek_diagnostics rek_diagnostics;

rek_status rek_smallness_threshold(const rek_solver_params* params, const rek_operator_config* cfg,
                                   double* out);
rek_status rek_apply_j(const rek_trajectory* traj, const rek_field* f0, const rek_operator_config* cfg,
                       rek_trajectory** out);
rek_status rek_picard_solve(const rek_field* f0, const rek_solver_params* params,
                            const rek_operator_config* cfg, rek_trajectory** out_traj,
                            rek_diagnostics** out_diag);
rek_status rek_contraction_estimate(const rek_trajectory* f, const rek_trajectory* g,
                                    const rek_operator_config* cfg, const rek_solver_params* params,
                                    double* out);

void rek_diagnostics_free(rek_diagnostics* diag);
rek_status rek_diagnostics_iterations(const rek_diagnostics* diag, int32_t* out);
rek_status rek_diagnostics_row(const rek_diagnostics* diag, int32_t i, double* norm, double* residual,
                               double* ratio, double* min_value);
rek_status rek_diagnostics_converged(const rek_diagnostics* diag, int* out);
rek_status rek_diagnostics_threshold(const rek_diagnostics* diag, double* out);
rek_status rek_diagnostics_positivity(const rek_diagnostics* diag, double* min_value, int* ok);
rek_status rek_diagnostics_num_masses(const rek_diagnostics* diag, int32_t* out);
rek_status rek_diagnostics_mass(const rek_diagnostics* diag, int32_t k, double* out);

/* ------------------------------------------------------------------ */
/* hypotheses                                                          */

typedef struct rek_hypothesis_report rek_hypothesis_report;

rek_status rek_estimate_k(const rek_kernel_spec* kernel, const rek_grid_spec* grid, double a,
                          int32_t n_samples, uint64_t seed, rek_hypothesis_report** out);
void rek_report_free(rek_hypothesis_report* report);
rek_status rek_report_k(const rek_hypothesis_report* report, double* k1, double* k2, double* k);
rek_status rek_report_sigma_ratio(const rek_hypothesis_report* report, double* out);
rek_status rek_report_to_json(const rek_hypothesis_report* report, char** out); /* free with rek_string_free */
rek_status rek_report_from_json(const char* text, rek_hypothesis_report** out);
void rek_string_free(char* s);

rek_status rek_galeano_bound(double beta, double c, double L, double a, const double v[3], double* out);
rek_status rek_y_lipschitz(const rek_y_spec* y, const rek_grid_spec* grid, const rek_kernel_spec* kernel,
                           double R, int32_t n_pairs, uint64_t seed, double* out);

/* random in-ball trajectory, |f^#| <= scale * m nodewise (scenario support) */
rek_status rek_random_trajectory(const rek_grid_spec* grid, const rek_kernel_spec* kernel, double scale,
                                 uint64_t seed, rek_trajectory** out);
rek_status rek_trajectory_from_field(const rek_field* f0, rek_trajectory** out);

#ifdef __cplusplus
}
#endif

#endif /* RENSKOG_H */
