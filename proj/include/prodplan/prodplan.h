/*
 * prodplan: discounted LQ production planning under a regime-switching
 * inventory diffusion.
 *
 * C interface over the C++ core. All objects are opaque handles created by a
 * pp_*_create/load/solve/simulate call and released with the matching
 * pp_*_destroy. Every fallible call returns a pp_status; on failure a
 * description is available from pp_last_error() on the calling thread.
 *
 * Regimes are labelled 1..m in every argument named `regime`. Arrays are
 * plain C arrays; `len` arguments give their element count and must match
 * what the call expects (PP_ERR_INVALID_ARGUMENT otherwise).
 */
#ifndef PRODPLAN_PRODPLAN_H
#define PRODPLAN_PRODPLAN_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(PRODPLAN_BUILDING)
#    define PRODPLAN_API __declspec(dllexport)
#  else
#    define PRODPLAN_API __declspec(dllimport)
#  endif
#else
#  define PRODPLAN_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pp_status {
    PP_OK = 0,
    PP_ERR_INVALID_ARGUMENT = 1,
    PP_ERR_INVALID_CONFIG = 2,
    PP_ERR_NONCONVERGENCE = 3,
    PP_ERR_BRACKET_FAILURE = 4,
    PP_ERR_IO = 5,
    PP_ERR_BUFFER_TOO_SMALL = 6,
    PP_ERR_INTERNAL = 100
} pp_status;

typedef struct pp_model pp_model;
typedef struct pp_solution pp_solution;
typedef struct pp_regime_path pp_regime_path;
typedef struct pp_path_set pp_path_set;

PRODPLAN_API const char* pp_version(void);
PRODPLAN_API const char* pp_status_name(pp_status status);
/* Message of the last failed call on this thread; "" if none. */
PRODPLAN_API const char* pp_last_error(void);

/* ---- model ------------------------------------------------------------- */

typedef enum pp_model_field {
    PP_FIELD_THETA = 0, /* demand rate */
    PP_FIELD_SIGMA = 1, /* volatility */
    PP_FIELD_C = 2,     /* factory-optimal inventory */
    PP_FIELD_H = 3,     /* factory-optimal production rate */
    PP_FIELD_N = 4,     /* inventory-cost weight */
    PP_FIELD_R = 5      /* production-cost weight */
} pp_model_field;

/* q is the row-major m*m generator. A diagonal that does not balance its row
 * is reported by pp_model_validate and rejected by pp_solve. */
PRODPLAN_API pp_status pp_model_create(int m, const double* q, double r, const double* theta,
                                       const double* sigma, const double* c, const double* h,
                                       const double* n_weight, const double* r_weight, pp_model** out);
/* JSON parameter file; PP_ERR_INVALID_CONFIG names the offending key. */
PRODPLAN_API pp_status pp_model_load_file(const char* path, pp_model** out);
PRODPLAN_API pp_status pp_model_load_string(const char* json_text, pp_model** out);
PRODPLAN_API pp_status pp_model_benchmark(pp_model** out);
PRODPLAN_API pp_status pp_model_clone(const pp_model* model, pp_model** out);
PRODPLAN_API void pp_model_destroy(pp_model* model);

PRODPLAN_API int pp_model_regimes(const pp_model* model);
PRODPLAN_API double pp_model_discount(const pp_model* model);
PRODPLAN_API pp_status pp_model_get_vector(const pp_model* model, pp_model_field field, double* out, size_t len);
PRODPLAN_API pp_status pp_model_set_vector(pp_model* model, pp_model_field field, const double* values, size_t len);
/* Row-major m*m. */
PRODPLAN_API pp_status pp_model_get_generator(const pp_model* model, double* out, size_t len);
PRODPLAN_API pp_status pp_model_set_generator(pp_model* model, const double* q, size_t len);
PRODPLAN_API pp_status pp_model_set_discount(pp_model* model, double r);

/* Text outputs follow the snprintf convention: *needed receives the length
 * without the terminator; buf == NULL with cap == 0 is a pure size query.
 * Otherwise the text is truncated if cap is too small and
 * PP_ERR_BUFFER_TOO_SMALL is returned. */
PRODPLAN_API pp_status pp_model_to_json(const pp_model* model, char* buf, size_t cap, size_t* needed);
/* Newline-separated list of violated invariants (empty when valid). */
PRODPLAN_API pp_status pp_model_validate(const pp_model* model, char* buf, size_t cap, size_t* needed,
                                         int* violations);
/* As pp_model_validate; PP_VALIDATE_ALLOW_ZERO_SIGMA accepts sigma(i) == 0,
 * the degenerate noise-free case that pp_solve and the simulator handle. */
#define PP_VALIDATE_ALLOW_ZERO_SIGMA 1u
PRODPLAN_API pp_status pp_model_validate_ex(const pp_model* model, unsigned flags, char* buf, size_t cap,
                                            size_t* needed, int* violations);

/* ---- admissibility ----------------------------------------------------- */

typedef struct pp_lipschitz {
    double kappa_b;
    double kappa_sigma;
    double kappa_1;
    double lambda_b;
    double kappa_B;
    double kappa_Sigma;
} pp_lipschitz;

PRODPLAN_API pp_status pp_discount_lower_bound(const pp_lipschitz* k, double* out);
PRODPLAN_API pp_status pp_lq_constants(const pp_model* model, const double* phi, size_t len, pp_lipschitz* out);

/* ---- Riccati system ---------------------------------------------------- */

typedef struct pp_solver_options {
    double tol;   /* default 1e-12 */
    int max_iter; /* default 200 */
} pp_solver_options;

PRODPLAN_API pp_solver_options pp_solver_options_default(void);

typedef enum pp_solution_field {
    PP_SOL_PHI = 0,
    PP_SOL_PSI = 1,
    PP_SOL_RESIDUAL_PHI = 2,
    PP_SOL_RESIDUAL_PSI = 3,
    PP_SOL_CONSTANT_TERM = 4,    /* resolvent part of the value function */
    PP_SOL_POLICY_SLOPE = 5,     /* -phi/R */
    PP_SOL_POLICY_INTERCEPT = 6, /* -psi/R + h */
    PP_SOL_DOMINANCE_MARGIN = 7  /* per-regime margin of A_phi(phi, phi) */
} pp_solution_field;

/* options may be NULL for the defaults. Parameters failing
 * pp_model_validate_ex(PP_VALIDATE_ALLOW_ZERO_SIGMA) give PP_ERR_INVALID_CONFIG.
 * The solution keeps a copy of the model parameters it was solved for. */
PRODPLAN_API pp_status pp_solve(const pp_model* model, const pp_solver_options* options, pp_solution** out);
PRODPLAN_API void pp_solution_destroy(pp_solution* solution);
PRODPLAN_API int pp_solution_regimes(const pp_solution* solution);
PRODPLAN_API int pp_solution_iterations(const pp_solution* solution);
PRODPLAN_API double pp_solution_min_dominance_margin(const pp_solution* solution);
PRODPLAN_API pp_status pp_solution_get(const pp_solution* solution, pp_solution_field field, double* out, size_t len);

PRODPLAN_API pp_status pp_are_residual(const pp_model* model, const double* phi, size_t len, double* out);
PRODPLAN_API pp_status pp_solve_psi(const pp_model* model, const double* phi, size_t len, double* psi_out);
/* max_regimes <= 0 selects the default limit of 4. */
PRODPLAN_API pp_status pp_elimination_solve(const pp_model* model, double tol, int max_regimes, double* phi_out,
                                            size_t len);
PRODPLAN_API pp_status pp_uniqueness_certificate(const pp_model* model, const double* phi_a, const double* phi_b,
                                                 size_t len, double* min_margin);

/* ---- policy and value function ----------------------------------------- */

PRODPLAN_API pp_status pp_hamiltonian(const pp_model* model, double x, int regime, double u, double y, double z,
                                      double* out);
PRODPLAN_API pp_status pp_convexity_check(const pp_model* model, int regime, double y, double z, int* convex);
PRODPLAN_API pp_status pp_feedback_control(const pp_solution* solution, double x, int regime, double* u);
PRODPLAN_API pp_status pp_value_function(const pp_solution* solution, double x, int regime, double* v);
/* out holds points*(m+1) values, row k = x_k, v(x_k,1), ..., v(x_k,m).
 * nonnegative (may be NULL) receives 1 iff every tabulated value is >= 0. */
PRODPLAN_API pp_status pp_value_table(const pp_solution* solution, double x_min, double x_max, size_t points,
                                      double* out, size_t len, int* nonnegative);

/* ---- regime chain ------------------------------------------------------ */

PRODPLAN_API pp_status pp_simulate_chain(const pp_model* model, int regime0, double horizon, uint64_t seed,
                                         pp_regime_path** out);
PRODPLAN_API void pp_regime_path_destroy(pp_regime_path* path);
/* Number of intervals (= number of jumps + 1). */
PRODPLAN_API size_t pp_regime_path_length(const pp_regime_path* path);
PRODPLAN_API double pp_regime_path_horizon(const pp_regime_path* path);
PRODPLAN_API pp_status pp_regime_path_get(const pp_regime_path* path, double* jump_times, int* regimes, size_t len);
/* Row-major m*m counts N_ij. */
PRODPLAN_API pp_status pp_regime_path_jump_counts(const pp_regime_path* path, long long* out, size_t len);

PRODPLAN_API pp_status pp_discounted_resolvent(const pp_model* model, const double* g, size_t len, double* w);

typedef struct pp_mc_estimate {
    double mean;
    double std_error;
    size_t n;
    double truncation_bound;
} pp_mc_estimate;

PRODPLAN_API pp_status pp_mc_regime_functional(const pp_model* model, const double* g, size_t len, int regime0,
                                               size_t n_paths, double horizon, uint64_t seed, pp_mc_estimate* out);

/* ---- controlled inventory simulation ----------------------------------- */

typedef struct pp_sim_config {
    double dt;        /* default 0.01 */
    double horizon;   /* default 200 */
    size_t n_paths;   /* default 1 */
    uint64_t seed;    /* default 0 */
    double x0;        /* default 0 */
    int regime0;      /* default 1 */
    int antithetic;   /* default 0 */
    unsigned threads; /* default 1; 0 = all hardware threads */
} pp_sim_config;

PRODPLAN_API pp_sim_config pp_sim_config_default(void);

/* User policy: production rate for inventory x in regime (1..m) at time t. */
typedef double (*pp_policy_fn)(double x, int regime, double t, void* user);

PRODPLAN_API pp_status pp_simulate_controlled(const pp_solution* solution, const pp_sim_config* cfg,
                                              pp_path_set** out);
PRODPLAN_API void pp_path_set_destroy(pp_path_set* set);
PRODPLAN_API size_t pp_path_set_count(const pp_path_set* set);
PRODPLAN_API size_t pp_path_set_points(const pp_path_set* set);

typedef enum pp_path_field {
    PP_PATH_T = 0,
    PP_PATH_X = 1,
    PP_PATH_U = 2,
    PP_PATH_DISC_COST = 3
} pp_path_field;

PRODPLAN_API pp_status pp_path_set_get(const pp_path_set* set, size_t path, pp_path_field field, double* out,
                                       size_t len);
PRODPLAN_API pp_status pp_path_set_regimes(const pp_path_set* set, size_t path, int* out, size_t len);

PRODPLAN_API pp_status pp_mc_cost(const pp_solution* solution, const pp_sim_config* cfg, pp_mc_estimate* out);
/* Costs of an arbitrary policy under the solution's model parameters. */
PRODPLAN_API pp_status pp_mc_cost_policy(const pp_solution* solution, const pp_sim_config* cfg, pp_policy_fn policy,
                                         void* user, pp_mc_estimate* out);
/* out[k] is the cost of u* + shifts[k], all on common random numbers. */
PRODPLAN_API pp_status pp_mc_cost_shifted(const pp_solution* solution, const pp_sim_config* cfg,
                                          const double* shifts, size_t n_shifts, pp_mc_estimate* out);
/* Optimal policy at dt and 2 dt on the same noise; *bias_allowance = |fine - coarse|. */
PRODPLAN_API pp_status pp_mc_cost_richardson(const pp_solution* solution, const pp_sim_config* cfg,
                                             pp_mc_estimate* fine, pp_mc_estimate* coarse, double* bias_allowance);

typedef struct pp_decay_point {
    double t;
    double x_moment; /* e^{-rt} E|X_t|^2 */
    double x_std_error;
    double y_moment; /* e^{-rt} E|Y_t|^2 */
    double y_std_error;
} pp_decay_point;

PRODPLAN_API pp_status pp_asymptotic_decay(const pp_solution* solution, const pp_sim_config* cfg,
                                           const double* checkpoints, size_t n, pp_decay_point* out);
PRODPLAN_API pp_status pp_adjoint_residual(const pp_solution* solution, const double* x, const int* regimes,
                                           size_t n, double* max_residual);

#ifdef __cplusplus
}
#endif

#endif /* PRODPLAN_PRODPLAN_H */
