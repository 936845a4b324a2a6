#include "prodplan/prodplan.h"

#include "../core/chain.hpp"
#include "../core/config.hpp"
#include "../core/errors.hpp"
#include "../core/model.hpp"
#include "../core/policy.hpp"
#include "../core/riccati.hpp"
#include "../core/sde.hpp"

#include <cstring>
#include <exception>
#include <new>
#include <stdexcept>
#include <string>
#include <vector>

#ifndef PRODPLAN_VERSION
#define PRODPLAN_VERSION "0.0.0"
#endif

struct pp_model {
    prodplan::ModelParams params;
};

struct pp_solution {
    prodplan::ModelParams params;
    prodplan::RiccatiSolution sol;
    prodplan::Vector constant_term;
};

struct pp_regime_path {
    prodplan::RegimePath path;
};

struct pp_path_set {
    std::vector<prodplan::ControlledPath> paths;
};

namespace {

using prodplan::Vector;

thread_local std::string g_last_error;

pp_status fail(pp_status status, const std::string& message) {
    g_last_error = message;
    return status;
}

// Maps exceptions from the core onto status codes.
template <typename Fn>
pp_status guarded(Fn&& fn) {
    try {
        g_last_error.clear();
        return fn();
    } catch (const prodplan::ConfigError& e) {
        return fail(PP_ERR_INVALID_CONFIG, e.what());
    } catch (const prodplan::NonConvergence& e) {
        return fail(PP_ERR_NONCONVERGENCE, e.what());
    } catch (const prodplan::BracketFailure& e) {
        return fail(PP_ERR_BRACKET_FAILURE, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(PP_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::bad_alloc&) {
        return fail(PP_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(PP_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(PP_ERR_INTERNAL, "unknown error");
    }
}

void require(bool condition, const char* message) {
    if (!condition) throw std::invalid_argument(message);
}

std::size_t regimes_of(const prodplan::ModelParams& p) {
    return static_cast<std::size_t>(p.regimes());
}

void require_len(std::size_t len, std::size_t expected, const char* what) {
    if (len != expected) {
        throw std::invalid_argument(std::string(what) + ": expected " + std::to_string(expected) + " values, got " +
                                    std::to_string(len));
    }
}

Vector to_vector(const double* values, std::size_t len) {
    require(values != nullptr, "null array");
    Vector v(static_cast<Eigen::Index>(len));
    for (std::size_t k = 0; k < len; ++k) v(static_cast<Eigen::Index>(k)) = values[k];
    return v;
}

void copy_out(const Vector& v, double* out, std::size_t len, const char* what) {
    require(out != nullptr, "null output array");
    require_len(len, static_cast<std::size_t>(v.size()), what);
    for (std::size_t k = 0; k < len; ++k) out[k] = v(static_cast<Eigen::Index>(k));
}

int to_index(const prodplan::ModelParams& p, int regime) {
    require(regime >= 1 && regime <= p.regimes(), "regime out of range");
    return regime - 1;
}

pp_status write_text(const std::string& text, char* buf, std::size_t cap, std::size_t* needed) {
    if (needed) *needed = text.size();
    if (!buf && cap == 0) return PP_OK;
    if (buf && cap > 0) {
        const std::size_t n = std::min(cap - 1, text.size());
        std::memcpy(buf, text.data(), n);
        buf[n] = '\0';
    }
    if (cap <= text.size()) return fail(PP_ERR_BUFFER_TOO_SMALL, "buffer too small");
    return PP_OK;
}

template <typename Params>
auto& field_ref(Params& p, pp_model_field field) {
    switch (field) {
    case PP_FIELD_THETA: return p.theta;
    case PP_FIELD_SIGMA: return p.sigma;
    case PP_FIELD_C: return p.c;
    case PP_FIELD_H: return p.h;
    case PP_FIELD_N: return p.N;
    case PP_FIELD_R: return p.R;
    }
    throw std::invalid_argument("unknown model field");
}

prodplan::SimConfig to_config(const pp_sim_config* cfg, const prodplan::ModelParams& p) {
    require(cfg != nullptr, "null simulation config");
    prodplan::SimConfig out;
    out.dt = cfg->dt;
    out.horizon = cfg->horizon;
    out.n_paths = cfg->n_paths;
    out.seed = cfg->seed;
    out.x0 = cfg->x0;
    out.i0 = to_index(p, cfg->regime0);
    out.antithetic = cfg->antithetic != 0;
    out.threads = cfg->threads;
    return out;
}

void copy_estimate(const prodplan::MCEstimate& in, pp_mc_estimate* out) {
    require(out != nullptr, "null estimate output");
    out->mean = in.mean;
    out->std_error = in.std_error;
    out->n = in.n;
    out->truncation_bound = in.truncation_bound;
}

} // namespace

extern "C" {

const char* pp_version(void) {
    return PRODPLAN_VERSION;
}

const char* pp_status_name(pp_status status) {
    switch (status) {
    case PP_OK: return "ok";
    case PP_ERR_INVALID_ARGUMENT: return "invalid argument";
    case PP_ERR_INVALID_CONFIG: return "invalid config";
    case PP_ERR_NONCONVERGENCE: return "non-convergence";
    case PP_ERR_BRACKET_FAILURE: return "bracket failure";
    case PP_ERR_IO: return "i/o error";
    case PP_ERR_BUFFER_TOO_SMALL: return "buffer too small";
    case PP_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* pp_last_error(void) {
    return g_last_error.c_str();
}

pp_status pp_model_create(int m, const double* q, double r, const double* theta, const double* sigma,
                          const double* c, const double* h, const double* n_weight, const double* r_weight,
                          pp_model** out) {
    return guarded([&] {
        require(out != nullptr, "null output handle");
        require(m >= 1, "m must be at least 1");
        const auto n = static_cast<std::size_t>(m);
        prodplan::ModelParams p;
        const Vector flat = to_vector(q, n * n);
        prodplan::Matrix qm(m, m);
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < m; ++j) qm(i, j) = flat(i * m + j);
        }
        p.gen = prodplan::Generator(std::move(qm));
        p.r = r;
        p.theta = to_vector(theta, n);
        p.sigma = to_vector(sigma, n);
        p.c = to_vector(c, n);
        p.h = to_vector(h, n);
        p.N = to_vector(n_weight, n);
        p.R = to_vector(r_weight, n);
        *out = new pp_model{std::move(p)};
        return PP_OK;
    });
}

pp_status pp_model_load_file(const char* path, pp_model** out) {
    return guarded([&] {
        require(out != nullptr && path != nullptr, "null argument");
        *out = new pp_model{prodplan::load_params(path)};
        return PP_OK;
    });
}

pp_status pp_model_load_string(const char* json_text, pp_model** out) {
    return guarded([&] {
        require(out != nullptr && json_text != nullptr, "null argument");
        *out = new pp_model{prodplan::parse_params(json_text)};
        return PP_OK;
    });
}

pp_status pp_model_benchmark(pp_model** out) {
    return guarded([&] {
        require(out != nullptr, "null output handle");
        *out = new pp_model{prodplan::ModelParams::benchmark()};
        return PP_OK;
    });
}

pp_status pp_model_clone(const pp_model* model, pp_model** out) {
    return guarded([&] {
        require(model != nullptr && out != nullptr, "null argument");
        *out = new pp_model{model->params};
        return PP_OK;
    });
}

void pp_model_destroy(pp_model* model) {
    delete model;
}

int pp_model_regimes(const pp_model* model) {
    return model ? model->params.regimes() : 0;
}

double pp_model_discount(const pp_model* model) {
    return model ? model->params.r : 0.0;
}

pp_status pp_model_get_vector(const pp_model* model, pp_model_field field, double* out, size_t len) {
    return guarded([&] {
        require(model != nullptr, "null model");
        copy_out(field_ref(model->params, field), out, len, "model field");
        return PP_OK;
    });
}

pp_status pp_model_set_vector(pp_model* model, pp_model_field field, const double* values, size_t len) {
    return guarded([&] {
        require(model != nullptr, "null model");
        require_len(len, regimes_of(model->params), "model field");
        field_ref(model->params, field) = to_vector(values, len);
        return PP_OK;
    });
}

pp_status pp_model_get_generator(const pp_model* model, double* out, size_t len) {
    return guarded([&] {
        require(model != nullptr && out != nullptr, "null argument");
        const int m = model->params.regimes();
        require_len(len, static_cast<std::size_t>(m * m), "generator");
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < m; ++j) out[i * m + j] = model->params.gen.rate(i, j);
        }
        return PP_OK;
    });
}

pp_status pp_model_set_generator(pp_model* model, const double* q, size_t len) {
    return guarded([&] {
        require(model != nullptr, "null model");
        const int m = model->params.regimes();
        require_len(len, static_cast<std::size_t>(m * m), "generator");
        const Vector flat = to_vector(q, len);
        prodplan::Matrix qm(m, m);
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < m; ++j) qm(i, j) = flat(i * m + j);
        }
        model->params.gen = prodplan::Generator(std::move(qm));
        return PP_OK;
    });
}

pp_status pp_model_set_discount(pp_model* model, double r) {
    return guarded([&] {
        require(model != nullptr, "null model");
        model->params.r = r;
        return PP_OK;
    });
}

pp_status pp_model_to_json(const pp_model* model, char* buf, size_t cap, size_t* needed) {
    return guarded([&] {
        require(model != nullptr, "null model");
        return write_text(prodplan::dump_params(model->params), buf, cap, needed);
    });
}

pp_status pp_model_validate(const pp_model* model, char* buf, size_t cap, size_t* needed, int* violations) {
    return pp_model_validate_ex(model, 0, buf, cap, needed, violations);
}

pp_status pp_model_validate_ex(const pp_model* model, unsigned flags, char* buf, size_t cap, size_t* needed,
                               int* violations) {
    return guarded([&] {
        require(model != nullptr, "null model");
        const auto vol = (flags & PP_VALIDATE_ALLOW_ZERO_SIGMA) ? prodplan::Volatility::AllowZero
                                                                : prodplan::Volatility::Positive;
        const auto report = prodplan::validate_params(model->params, vol);
        if (violations) *violations = static_cast<int>(report.violations.size());
        std::string text;
        for (const auto& v : report.violations) text += v + "\n";
        return write_text(text, buf, cap, needed);
    });
}

pp_status pp_discount_lower_bound(const pp_lipschitz* k, double* out) {
    return guarded([&] {
        require(k != nullptr && out != nullptr, "null argument");
        prodplan::LipschitzConstants c{k->kappa_b, k->kappa_sigma, k->kappa_1, k->lambda_b, k->kappa_B, k->kappa_Sigma};
        *out = prodplan::discount_lower_bound(c);
        return PP_OK;
    });
}

pp_status pp_lq_constants(const pp_model* model, const double* phi, size_t len, pp_lipschitz* out) {
    return guarded([&] {
        require(model != nullptr && out != nullptr, "null argument");
        require_len(len, regimes_of(model->params), "phi");
        const auto k = prodplan::lq_constants(model->params, to_vector(phi, len));
        *out = pp_lipschitz{k.kappa_b, k.kappa_sigma, k.kappa_1, k.lambda_b, k.kappa_B, k.kappa_Sigma};
        return PP_OK;
    });
}

pp_solver_options pp_solver_options_default(void) {
    const prodplan::SolverOptions d;
    return pp_solver_options{d.tol, d.max_iter};
}

pp_status pp_solve(const pp_model* model, const pp_solver_options* options, pp_solution** out) {
    return guarded([&] {
        require(model != nullptr && out != nullptr, "null argument");
        const auto report = prodplan::validate_params(model->params, prodplan::Volatility::AllowZero);
        if (!report.ok()) return fail(PP_ERR_INVALID_CONFIG, "invalid parameters: " + report.violations.front());
        prodplan::SolverOptions opts;
        if (options) {
            opts.tol = options->tol;
            opts.max_iter = options->max_iter;
        }
        auto sol = prodplan::solve(model->params, opts);
        auto w = prodplan::value_constant_term(sol, model->params);
        *out = new pp_solution{model->params, std::move(sol), std::move(w)};
        return PP_OK;
    });
}

void pp_solution_destroy(pp_solution* solution) {
    delete solution;
}

int pp_solution_regimes(const pp_solution* solution) {
    return solution ? solution->params.regimes() : 0;
}

int pp_solution_iterations(const pp_solution* solution) {
    return solution ? solution->sol.iterations : 0;
}

double pp_solution_min_dominance_margin(const pp_solution* solution) {
    return solution ? solution->sol.certificate.min_dominance_margin : 0.0;
}

pp_status pp_solution_get(const pp_solution* solution, pp_solution_field field, double* out, size_t len) {
    return guarded([&] {
        require(solution != nullptr, "null solution");
        const auto& s = solution->sol;
        switch (field) {
        case PP_SOL_PHI: copy_out(s.phi, out, len, "phi"); break;
        case PP_SOL_PSI: copy_out(s.psi, out, len, "psi"); break;
        case PP_SOL_RESIDUAL_PHI: copy_out(s.residual_phi, out, len, "residual_phi"); break;
        case PP_SOL_RESIDUAL_PSI: copy_out(s.residual_psi, out, len, "residual_psi"); break;
        case PP_SOL_CONSTANT_TERM: copy_out(solution->constant_term, out, len, "constant term"); break;
        case PP_SOL_POLICY_SLOPE:
            copy_out(prodplan::policy_coefficients(s, solution->params).slope, out, len, "slope");
            break;
        case PP_SOL_POLICY_INTERCEPT:
            copy_out(prodplan::policy_coefficients(s, solution->params).intercept, out, len, "intercept");
            break;
        case PP_SOL_DOMINANCE_MARGIN: copy_out(s.certificate.margins, out, len, "margins"); break;
        default: throw std::invalid_argument("unknown solution field");
        }
        return PP_OK;
    });
}

pp_status pp_are_residual(const pp_model* model, const double* phi, size_t len, double* out) {
    return guarded([&] {
        require(model != nullptr, "null model");
        require_len(len, regimes_of(model->params), "phi");
        copy_out(prodplan::are_residual(to_vector(phi, len), model->params), out, len, "residual");
        return PP_OK;
    });
}

pp_status pp_solve_psi(const pp_model* model, const double* phi, size_t len, double* psi_out) {
    return guarded([&] {
        require(model != nullptr, "null model");
        require_len(len, regimes_of(model->params), "phi");
        copy_out(prodplan::solve_psi(to_vector(phi, len), model->params), psi_out, len, "psi");
        return PP_OK;
    });
}

pp_status pp_elimination_solve(const pp_model* model, double tol, int max_regimes, double* phi_out, size_t len) {
    return guarded([&] {
        require(model != nullptr, "null model");
        require(tol > 0.0, "tolerance must be positive");
        prodplan::EliminationOptions opts;
        opts.tol = tol;
        if (max_regimes > 0) opts.max_regimes = max_regimes;
        copy_out(prodplan::elimination_solve(model->params, opts), phi_out, len, "phi");
        return PP_OK;
    });
}

pp_status pp_uniqueness_certificate(const pp_model* model, const double* phi_a, const double* phi_b, size_t len,
                                    double* min_margin) {
    return guarded([&] {
        require(model != nullptr && min_margin != nullptr, "null argument");
        require_len(len, regimes_of(model->params), "phi");
        *min_margin = prodplan::uniqueness_certificate(to_vector(phi_a, len), to_vector(phi_b, len), model->params)
                          .min_dominance_margin;
        return PP_OK;
    });
}

pp_status pp_hamiltonian(const pp_model* model, double x, int regime, double u, double y, double z, double* out) {
    return guarded([&] {
        require(model != nullptr && out != nullptr, "null argument");
        *out = prodplan::hamiltonian(x, to_index(model->params, regime), u, y, z, model->params);
        return PP_OK;
    });
}

pp_status pp_convexity_check(const pp_model* model, int regime, double y, double z, int* convex) {
    return guarded([&] {
        require(model != nullptr && convex != nullptr, "null argument");
        *convex = prodplan::convexity_check(to_index(model->params, regime), y, z, model->params) ? 1 : 0;
        return PP_OK;
    });
}

pp_status pp_feedback_control(const pp_solution* solution, double x, int regime, double* u) {
    return guarded([&] {
        require(solution != nullptr && u != nullptr, "null argument");
        *u = prodplan::feedback_control(x, to_index(solution->params, regime), solution->sol, solution->params);
        return PP_OK;
    });
}

pp_status pp_value_function(const pp_solution* solution, double x, int regime, double* v) {
    return guarded([&] {
        require(solution != nullptr && v != nullptr, "null argument");
        const int i = to_index(solution->params, regime);
        *v = 0.5 * solution->sol.phi(i) * x * x + solution->sol.psi(i) * x + solution->constant_term(i);
        return PP_OK;
    });
}

pp_status pp_value_table(const pp_solution* solution, double x_min, double x_max, size_t points, double* out,
                         size_t len, int* nonnegative) {
    return guarded([&] {
        require(solution != nullptr && out != nullptr, "null argument");
        require(points >= 2 && points < (1u << 30), "need at least two grid points");
        const auto m = regimes_of(solution->params);
        require_len(len, points * (m + 1), "value table");
        const auto report =
            prodplan::value_report(solution->sol, solution->params, {x_min, x_max, static_cast<int>(points)});
        for (std::size_t k = 0; k < points; ++k) {
            out[k * (m + 1)] = report.x[k];
            for (std::size_t i = 0; i < m; ++i) out[k * (m + 1) + 1 + i] = report.v[i][k];
        }
        if (nonnegative) *nonnegative = report.nonnegative() ? 1 : 0;
        return PP_OK;
    });
}

pp_status pp_simulate_chain(const pp_model* model, int regime0, double horizon, uint64_t seed,
                            pp_regime_path** out) {
    return guarded([&] {
        require(model != nullptr && out != nullptr, "null argument");
        const int i0 = to_index(model->params, regime0);
        *out = new pp_regime_path{prodplan::simulate_chain(model->params.gen, i0, horizon, seed)};
        return PP_OK;
    });
}

void pp_regime_path_destroy(pp_regime_path* path) {
    delete path;
}

size_t pp_regime_path_length(const pp_regime_path* path) {
    return path ? path->path.states.size() : 0;
}

double pp_regime_path_horizon(const pp_regime_path* path) {
    return path ? path->path.horizon : 0.0;
}

pp_status pp_regime_path_get(const pp_regime_path* path, double* jump_times, int* regimes, size_t len) {
    return guarded([&] {
        require(path != nullptr, "null path");
        require_len(len, path->path.states.size(), "regime path");
        for (std::size_t k = 0; k < len; ++k) {
            if (jump_times) jump_times[k] = path->path.jump_times[k];
            if (regimes) regimes[k] = path->path.states[k] + 1;
        }
        return PP_OK;
    });
}

pp_status pp_regime_path_jump_counts(const pp_regime_path* path, long long* out, size_t len) {
    return guarded([&] {
        require(path != nullptr && out != nullptr, "null argument");
        const auto m = static_cast<std::size_t>(path->path.jump_counts.rows());
        require_len(len, m * m, "jump counts");
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < m; ++j) {
                out[i * m + j] = path->path.jump_counts(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            }
        }
        return PP_OK;
    });
}

pp_status pp_discounted_resolvent(const pp_model* model, const double* g, size_t len, double* w) {
    return guarded([&] {
        require(model != nullptr, "null model");
        require_len(len, regimes_of(model->params), "g");
        copy_out(prodplan::discounted_resolvent(model->params.gen, model->params.r, to_vector(g, len)), w, len, "w");
        return PP_OK;
    });
}

pp_status pp_mc_regime_functional(const pp_model* model, const double* g, size_t len, int regime0, size_t n_paths,
                                  double horizon, uint64_t seed, pp_mc_estimate* out) {
    return guarded([&] {
        require(model != nullptr, "null model");
        require_len(len, regimes_of(model->params), "g");
        const auto est = prodplan::mc_regime_functional(model->params.gen, model->params.r, to_vector(g, len),
                                                        to_index(model->params, regime0), n_paths, horizon, seed);
        copy_estimate(est, out);
        return PP_OK;
    });
}

pp_sim_config pp_sim_config_default(void) {
    const prodplan::SimConfig d;
    return pp_sim_config{d.dt, d.horizon, d.n_paths, d.seed, d.x0, d.i0 + 1, d.antithetic ? 1 : 0, d.threads};
}

pp_status pp_simulate_controlled(const pp_solution* solution, const pp_sim_config* cfg, pp_path_set** out) {
    return guarded([&] {
        require(solution != nullptr && out != nullptr, "null argument");
        auto paths = prodplan::simulate_controlled(solution->params, solution->sol, to_config(cfg, solution->params));
        *out = new pp_path_set{std::move(paths)};
        return PP_OK;
    });
}

void pp_path_set_destroy(pp_path_set* set) {
    delete set;
}

size_t pp_path_set_count(const pp_path_set* set) {
    return set ? set->paths.size() : 0;
}

size_t pp_path_set_points(const pp_path_set* set) {
    return set && !set->paths.empty() ? set->paths.front().times.size() : 0;
}

pp_status pp_path_set_get(const pp_path_set* set, size_t path, pp_path_field field, double* out, size_t len) {
    return guarded([&] {
        require(set != nullptr && out != nullptr, "null argument");
        require(path < set->paths.size(), "path index out of range");
        const auto& p = set->paths[path];
        const std::vector<double>* source = nullptr;
        switch (field) {
        case PP_PATH_T: source = &p.times; break;
        case PP_PATH_X: source = &p.x; break;
        case PP_PATH_U: source = &p.u; break;
        case PP_PATH_DISC_COST: source = &p.disc_cost; break;
        default: throw std::invalid_argument("unknown path field");
        }
        require_len(len, source->size(), "path field");
        std::copy(source->begin(), source->end(), out);
        return PP_OK;
    });
}

pp_status pp_path_set_regimes(const pp_path_set* set, size_t path, int* out, size_t len) {
    return guarded([&] {
        require(set != nullptr && out != nullptr, "null argument");
        require(path < set->paths.size(), "path index out of range");
        const auto& regimes = set->paths[path].regime;
        require_len(len, regimes.size(), "regimes");
        for (std::size_t k = 0; k < len; ++k) out[k] = regimes[k] + 1;
        return PP_OK;
    });
}

pp_status pp_mc_cost(const pp_solution* solution, const pp_sim_config* cfg, pp_mc_estimate* out) {
    return guarded([&] {
        require(solution != nullptr, "null solution");
        copy_estimate(prodplan::mc_cost(solution->params, solution->sol, to_config(cfg, solution->params)), out);
        return PP_OK;
    });
}

pp_status pp_mc_cost_policy(const pp_solution* solution, const pp_sim_config* cfg, pp_policy_fn policy, void* user,
                            pp_mc_estimate* out) {
    return guarded([&] {
        require(solution != nullptr && policy != nullptr, "null argument");
        const prodplan::Policy wrapped = [policy, user](double x, int i, double t) { return policy(x, i + 1, t, user); };
        copy_estimate(prodplan::mc_cost(solution->params, wrapped, to_config(cfg, solution->params)), out);
        return PP_OK;
    });
}

pp_status pp_mc_cost_shifted(const pp_solution* solution, const pp_sim_config* cfg, const double* shifts,
                             size_t n_shifts, pp_mc_estimate* out) {
    return guarded([&] {
        require(solution != nullptr && shifts != nullptr && out != nullptr, "null argument");
        require(n_shifts >= 1, "need at least one shift");
        std::vector<prodplan::Policy> policies;
        for (std::size_t k = 0; k < n_shifts; ++k) {
            policies.push_back(prodplan::shifted_policy(solution->sol, solution->params, shifts[k]));
        }
        const auto est = prodplan::mc_cost_common(solution->params, policies, to_config(cfg, solution->params));
        for (std::size_t k = 0; k < n_shifts; ++k) copy_estimate(est[k], &out[k]);
        return PP_OK;
    });
}

pp_status pp_mc_cost_richardson(const pp_solution* solution, const pp_sim_config* cfg, pp_mc_estimate* fine,
                                pp_mc_estimate* coarse, double* bias_allowance) {
    return guarded([&] {
        require(solution != nullptr && bias_allowance != nullptr, "null argument");
        const auto policy = prodplan::optimal_policy(solution->sol, solution->params);
        const auto est = prodplan::mc_cost_richardson(solution->params, policy, to_config(cfg, solution->params));
        copy_estimate(est.fine, fine);
        copy_estimate(est.coarse, coarse);
        *bias_allowance = est.bias_allowance;
        return PP_OK;
    });
}

pp_status pp_asymptotic_decay(const pp_solution* solution, const pp_sim_config* cfg, const double* checkpoints,
                              size_t n, pp_decay_point* out) {
    return guarded([&] {
        require(solution != nullptr && checkpoints != nullptr && out != nullptr, "null argument");
        const std::vector<double> cps(checkpoints, checkpoints + n);
        const auto points =
            prodplan::asymptotic_decay(solution->params, solution->sol, to_config(cfg, solution->params), cps);
        for (std::size_t k = 0; k < n; ++k) {
            out[k] = pp_decay_point{points[k].t, points[k].x_moment, points[k].x_std_error, points[k].y_moment,
                                    points[k].y_std_error};
        }
        return PP_OK;
    });
}

pp_status pp_adjoint_residual(const pp_solution* solution, const double* x, const int* regimes, size_t n,
                              double* max_residual) {
    return guarded([&] {
        require(solution != nullptr && x != nullptr && regimes != nullptr && max_residual != nullptr,
                "null argument");
        std::vector<std::pair<double, int>> samples;
        samples.reserve(n);
        for (std::size_t k = 0; k < n; ++k) samples.emplace_back(x[k], to_index(solution->params, regimes[k]));
        *max_residual = prodplan::adjoint_residual(solution->params, solution->sol, samples);
        return PP_OK;
    });
}

} // extern "C"
