#include <prodplan/prodplan.h>

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

namespace {

const char* kBenchmarkJson = R"({
  "m": 2, "Q": [-1, 1, 1, -1], "r": 0.05,
  "theta": [4, 2.5], "sigma": [0.6, 0.8], "c": [3, 1.5], "h": [5, 4],
  "N": [0.4, 0.3], "R": [0.5, 0.4]
})";

struct Fixture {
    pp_model* model = nullptr;
    pp_solution* sol = nullptr;
    Fixture() {
        REQUIRE(pp_model_benchmark(&model) == PP_OK);
        REQUIRE(pp_solve(model, nullptr, &sol) == PP_OK);
    }
    ~Fixture() {
        pp_solution_destroy(sol);
        pp_model_destroy(model);
    }
};

std::vector<double> get(const pp_solution* s, pp_solution_field f) {
    std::vector<double> v(2);
    REQUIRE(pp_solution_get(s, f, v.data(), v.size()) == PP_OK);
    return v;
}

double shift_policy(double x, int regime, double, void* user) {
    const auto* sol = static_cast<const pp_solution*>(user);
    double u = 0.0;
    pp_feedback_control(sol, x, regime, &u);
    return u + 0.5;
}

} // namespace

TEST_CASE("version and status names") {
    CHECK(std::string(pp_version()) == PRODPLAN_EXPECTED_VERSION);
    CHECK(std::string(pp_status_name(PP_OK)) == "ok");
    CHECK(std::string(pp_status_name(PP_ERR_NONCONVERGENCE)) != "");
    CHECK(std::string(pp_status_name(static_cast<pp_status>(77))) != "");
}

TEST_CASE_FIXTURE(Fixture, "benchmark solution through the C API") {
    CHECK(pp_model_regimes(model) == 2);
    CHECK(pp_solution_regimes(sol) == 2);
    CHECK(pp_model_discount(model) == 0.05);
    const auto phi = get(sol, PP_SOL_PHI);
    const auto psi = get(sol, PP_SOL_PSI);
    CHECK(phi[0] == doctest::Approx(0.40833148442243866).epsilon(1e-12));
    CHECK(phi[1] == doctest::Approx(0.36221726098482512).epsilon(1e-12));
    CHECK(psi[0] == doctest::Approx(-0.54891676558189933).epsilon(1e-12));
    CHECK(psi[1] == doctest::Approx(-0.23297408371227443).epsilon(1e-12));
    CHECK(pp_solution_min_dominance_margin(sol) == doctest::Approx(1.6833259376897546));
    CHECK(pp_solution_iterations(sol) > 0);

    const auto slope = get(sol, PP_SOL_POLICY_SLOPE);
    const auto intercept = get(sol, PP_SOL_POLICY_INTERCEPT);
    double u = 0.0;
    REQUIRE(pp_feedback_control(sol, 1.5, 2, &u) == PP_OK);
    CHECK(u == doctest::Approx(slope[1] * 1.5 + intercept[1]));

    const auto w = get(sol, PP_SOL_CONSTANT_TERM);
    double v = 0.0;
    REQUIRE(pp_value_function(sol, 0.0, 1, &v) == PP_OK);
    CHECK(v == doctest::Approx(w[0]));
    CHECK(w[0] == doctest::Approx(10.834528719276812).epsilon(1e-12));

    std::vector<double> residual(2);
    REQUIRE(pp_are_residual(model, phi.data(), 2, residual.data()) == PP_OK);
    CHECK(std::abs(residual[0]) <= 1e-12);

    std::vector<double> psi2(2);
    REQUIRE(pp_solve_psi(model, phi.data(), 2, psi2.data()) == PP_OK);
    CHECK(psi2[0] == doctest::Approx(psi[0]));

    std::vector<double> elim(2);
    REQUIRE(pp_elimination_solve(model, 1e-10, 0, elim.data(), 2) == PP_OK);
    CHECK(std::abs(elim[0] - phi[0]) <= 1e-8);

    double margin = 0.0;
    REQUIRE(pp_uniqueness_certificate(model, phi.data(), phi.data(), 2, &margin) == PP_OK);
    CHECK(margin == doctest::Approx(1.6833259376897546));
}

TEST_CASE("model round trip through JSON text") {
    pp_model* a = nullptr;
    REQUIRE(pp_model_load_string(kBenchmarkJson, &a) == PP_OK);
    size_t needed = 0;
    REQUIRE(pp_model_to_json(a, nullptr, 0, &needed) == PP_OK);
    std::string text(needed + 1, '\0');
    REQUIRE(pp_model_to_json(a, text.data(), text.size(), &needed) == PP_OK);
    text.resize(needed);

    char tiny[8];
    CHECK(pp_model_to_json(a, tiny, sizeof tiny, &needed) == PP_ERR_BUFFER_TOO_SMALL);
    CHECK(std::strlen(tiny) == 7);

    pp_model* b = nullptr;
    REQUIRE(pp_model_load_string(text.c_str(), &b) == PP_OK);
    double ga[4], gb[4];
    REQUIRE(pp_model_get_generator(a, ga, 4) == PP_OK);
    REQUIRE(pp_model_get_generator(b, gb, 4) == PP_OK);
    for (int k = 0; k < 4; ++k) CHECK(ga[k] == gb[k]);
    double ra[2], rb[2];
    REQUIRE(pp_model_get_vector(b, PP_FIELD_R, rb, 2) == PP_OK);
    REQUIRE(pp_model_get_vector(a, PP_FIELD_R, ra, 2) == PP_OK);
    CHECK(ra[1] == rb[1]);
    pp_model_destroy(a);
    pp_model_destroy(b);
}

TEST_CASE("config errors name the key") {
    pp_model* m = nullptr;
    std::string text = kBenchmarkJson;
    text.replace(text.find(", \"R\": [0.5, 0.4]"), std::strlen(", \"R\": [0.5, 0.4]"), "");
    CHECK(pp_model_load_string(text.c_str(), &m) == PP_ERR_INVALID_CONFIG);
    CHECK(m == nullptr);
    CHECK(std::string(pp_last_error()).find("`R`") != std::string::npos);

    CHECK(pp_model_load_string("{not json", &m) == PP_ERR_INVALID_CONFIG);
    CHECK(pp_model_load_file("/nonexistent/params.json", &m) != PP_OK);

    // A successful call clears the message.
    pp_model* ok = nullptr;
    REQUIRE(pp_model_benchmark(&ok) == PP_OK);
    CHECK(std::string(pp_last_error()).empty());
    pp_model_destroy(ok);
}

TEST_CASE("validation and solver status codes") {
    pp_model* m = nullptr;
    REQUIRE(pp_model_benchmark(&m) == PP_OK);

    const double bad_n[2] = {-0.1, 0.3};
    REQUIRE(pp_model_set_vector(m, PP_FIELD_N, bad_n, 2) == PP_OK);
    size_t needed = 0;
    int count = 0;
    char buf[256];
    REQUIRE(pp_model_validate(m, buf, sizeof buf, &needed, &count) == PP_OK);
    CHECK(count == 1);
    CHECK(std::string(buf) == "N(1) not positive\n");
    int convex = 1;
    REQUIRE(pp_convexity_check(m, 1, 0.0, 0.0, &convex) == PP_OK);
    CHECK(convex == 0);

    pp_solution* s = nullptr;
    CHECK(pp_solve(m, nullptr, &s) == PP_ERR_INVALID_CONFIG);
    CHECK(s == nullptr);

    const double good_n[2] = {0.4, 0.3};
    REQUIRE(pp_model_set_vector(m, PP_FIELD_N, good_n, 2) == PP_OK);
    pp_solver_options opts = pp_solver_options_default();
    CHECK(opts.tol == 1e-12);
    CHECK(opts.max_iter == 200);
    opts.max_iter = 1;
    CHECK(pp_solve(m, &opts, &s) == PP_ERR_NONCONVERGENCE);
    opts.tol = 0.0;
    CHECK(pp_solve(m, &opts, &s) == PP_ERR_INVALID_ARGUMENT);

    const double quiet[2] = {0.0, 0.8};
    REQUIRE(pp_model_set_vector(m, PP_FIELD_SIGMA, quiet, 2) == PP_OK);
    REQUIRE(pp_model_validate(m, nullptr, 0, &needed, &count) == PP_OK);
    CHECK(count == 1);
    REQUIRE(pp_model_validate_ex(m, PP_VALIDATE_ALLOW_ZERO_SIGMA, nullptr, 0, &needed, &count) == PP_OK);
    CHECK(count == 0);
    REQUIRE(pp_solve(m, nullptr, &s) == PP_OK);
    pp_solution_destroy(s);

    CHECK(pp_model_set_discount(m, 0.0) == PP_OK);
    CHECK(pp_model_validate(m, nullptr, 0, &needed, &count) == PP_OK);
    CHECK(count == 2);
    pp_model_destroy(m);
}

TEST_CASE("argument checking") {
    pp_model* m = nullptr;
    REQUIRE(pp_model_benchmark(&m) == PP_OK);
    double out[3];
    CHECK(pp_model_get_vector(m, PP_FIELD_THETA, out, 3) == PP_ERR_INVALID_ARGUMENT);
    CHECK(pp_model_get_vector(nullptr, PP_FIELD_THETA, out, 2) == PP_ERR_INVALID_ARGUMENT);
    CHECK(pp_model_get_vector(m, static_cast<pp_model_field>(42), out, 2) == PP_ERR_INVALID_ARGUMENT);
    double h = 0.0;
    CHECK(pp_hamiltonian(m, 0, 0, 0, 0, 0, &h) == PP_ERR_INVALID_ARGUMENT);
    CHECK(pp_hamiltonian(m, 0, 3, 0, 0, 0, &h) == PP_ERR_INVALID_ARGUMENT);
    REQUIRE(pp_hamiltonian(m, 3.0, 1, 5.0, 0, 0, &h) == PP_OK);
    CHECK(h == 0.0);
    CHECK(pp_model_benchmark(nullptr) == PP_ERR_INVALID_ARGUMENT);
    CHECK(std::string(pp_last_error()) != "");

    const double q[4] = {-1, 1, 1, -1};
    const double two[2] = {1, 1};
    pp_model* created = nullptr;
    CHECK(pp_model_create(0, q, 0.05, two, two, two, two, two, two, &created) == PP_ERR_INVALID_ARGUMENT);
    REQUIRE(pp_model_create(2, q, 0.05, two, two, two, two, two, two, &created) == PP_OK);
    pp_model_destroy(created);

    pp_model_destroy(nullptr);
    pp_solution_destroy(nullptr);
    pp_path_set_destroy(nullptr);
    pp_regime_path_destroy(nullptr);
    pp_model_destroy(m);
}

TEST_CASE("elimination limit") {
    const int m = 5;
    std::vector<double> q(m * m, 1.0);
    for (int i = 0; i < m; ++i) q[static_cast<size_t>(i * m + i)] = -(m - 1);
    const std::vector<double> ones(m, 1.0);
    pp_model* model = nullptr;
    REQUIRE(pp_model_create(m, q.data(), 0.05, ones.data(), ones.data(), ones.data(), ones.data(), ones.data(),
                            ones.data(), &model) == PP_OK);
    std::vector<double> phi(m);
    CHECK(pp_elimination_solve(model, 1e-10, 0, phi.data(), phi.size()) == PP_ERR_INVALID_ARGUMENT);
    CHECK(pp_elimination_solve(model, 1e-10, 5, phi.data(), phi.size()) == PP_OK);
    pp_model_destroy(model);
}

TEST_CASE("admissibility constants") {
    pp_lipschitz k{};
    double bound = 1.0;
    REQUIRE(pp_discount_lower_bound(&k, &bound) == PP_OK);
    CHECK(bound == 0.0);
    k.kappa_sigma = 1.0;
    k.kappa_1 = 0.2;
    REQUIRE(pp_discount_lower_bound(&k, &bound) == PP_OK);
    CHECK(bound == doctest::Approx(0.6));

    pp_model* m = nullptr;
    REQUIRE(pp_model_benchmark(&m) == PP_OK);
    const double phi[2] = {0.4, 0.36};
    REQUIRE(pp_lq_constants(m, phi, 2, &k) == PP_OK);
    CHECK(k.kappa_1 == 0.36);
    const double neg[2] = {-0.4, 0.36};
    CHECK(pp_lq_constants(m, neg, 2, &k) == PP_ERR_INVALID_ARGUMENT);
    pp_model_destroy(m);
}

TEST_CASE_FIXTURE(Fixture, "value table layout") {
    std::vector<double> table(5 * 3);
    int nonneg = 0;
    REQUIRE(pp_value_table(sol, -2.0, 2.0, 5, table.data(), table.size(), &nonneg) == PP_OK);
    CHECK(nonneg == 1);
    CHECK(table[0] == -2.0);
    CHECK(table[3] == -1.0);
    double v = 0.0;
    REQUIRE(pp_value_function(sol, -1.0, 2, &v) == PP_OK);
    CHECK(table[5] == doctest::Approx(v));
    CHECK(pp_value_table(sol, -2.0, 2.0, 5, table.data(), 14, &nonneg) == PP_ERR_INVALID_ARGUMENT);
}

TEST_CASE_FIXTURE(Fixture, "regime chain") {
    pp_regime_path* path = nullptr;
    REQUIRE(pp_simulate_chain(model, 2, 50.0, 9, &path) == PP_OK);
    const size_t n = pp_regime_path_length(path);
    CHECK(n >= 1);
    CHECK(pp_regime_path_horizon(path) == 50.0);
    std::vector<double> times(n);
    std::vector<int> states(n);
    REQUIRE(pp_regime_path_get(path, times.data(), states.data(), n) == PP_OK);
    CHECK(times[0] == 0.0);
    CHECK(states[0] == 2);
    long long counts[4];
    REQUIRE(pp_regime_path_jump_counts(path, counts, 4) == PP_OK);
    CHECK(counts[1] + counts[2] == static_cast<long long>(n - 1));
    pp_regime_path_destroy(path);

    const double g[2] = {1.0, 1.0};
    double w[2];
    REQUIRE(pp_discounted_resolvent(model, g, 2, w) == PP_OK);
    CHECK(w[0] == doctest::Approx(20.0));
    pp_mc_estimate est{};
    REQUIRE(pp_mc_regime_functional(model, g, 2, 1, 200, 300.0, 4, &est) == PP_OK);
    CHECK(est.n == 200);
    CHECK(est.mean == doctest::Approx(20.0).epsilon(1e-5));
}

TEST_CASE_FIXTURE(Fixture, "controlled simulation") {
    pp_sim_config cfg = pp_sim_config_default();
    CHECK(cfg.dt == 0.01);
    CHECK(cfg.horizon == 200.0);
    CHECK(cfg.regime0 == 1);
    cfg.horizon = 5.0;
    cfg.n_paths = 3;
    cfg.seed = 12;
    cfg.x0 = 1.0;

    pp_path_set* set = nullptr;
    REQUIRE(pp_simulate_controlled(sol, &cfg, &set) == PP_OK);
    CHECK(pp_path_set_count(set) == 3);
    const size_t n = pp_path_set_points(set);
    CHECK(n == 501);
    std::vector<double> t(n), x(n), cost(n);
    std::vector<int> regime(n);
    REQUIRE(pp_path_set_get(set, 2, PP_PATH_T, t.data(), n) == PP_OK);
    REQUIRE(pp_path_set_get(set, 2, PP_PATH_X, x.data(), n) == PP_OK);
    REQUIRE(pp_path_set_get(set, 2, PP_PATH_DISC_COST, cost.data(), n) == PP_OK);
    REQUIRE(pp_path_set_regimes(set, 2, regime.data(), n) == PP_OK);
    CHECK(t.back() == doctest::Approx(5.0));
    CHECK(x.front() == 1.0);
    CHECK(regime.front() == 1);
    for (int r : regime) CHECK((r == 1 || r == 2));
    CHECK(pp_path_set_get(set, 3, PP_PATH_X, x.data(), n) == PP_ERR_INVALID_ARGUMENT);

    double total = 0.0;
    for (size_t k = 0; k < 3; ++k) {
        REQUIRE(pp_path_set_get(set, k, PP_PATH_DISC_COST, cost.data(), n) == PP_OK);
        total += cost.back();
    }
    pp_path_set_destroy(set);

    pp_mc_estimate est{};
    REQUIRE(pp_mc_cost(sol, &cfg, &est) == PP_OK);
    CHECK(est.mean == doctest::Approx(total / 3.0));

    // A C callback and the built-in shift follow the same noise.
    pp_mc_estimate via_callback{}, via_shift{};
    REQUIRE(pp_mc_cost_policy(sol, &cfg, shift_policy, sol, &via_callback) == PP_OK);
    const double shift = 0.5;
    REQUIRE(pp_mc_cost_shifted(sol, &cfg, &shift, 1, &via_shift) == PP_OK);
    CHECK(via_callback.mean == doctest::Approx(via_shift.mean).epsilon(1e-12));
    CHECK(pp_mc_cost_policy(sol, &cfg, nullptr, nullptr, &via_callback) == PP_ERR_INVALID_ARGUMENT);

    pp_mc_estimate fine{}, coarse{};
    double bias = -1.0;
    REQUIRE(pp_mc_cost_richardson(sol, &cfg, &fine, &coarse, &bias) == PP_OK);
    CHECK(fine.mean == doctest::Approx(est.mean));
    CHECK(bias == doctest::Approx(std::abs(fine.mean - coarse.mean)));

    cfg.regime0 = 0;
    CHECK(pp_mc_cost(sol, &cfg, &est) == PP_ERR_INVALID_ARGUMENT);
}

TEST_CASE_FIXTURE(Fixture, "decay and adjoint residual") {
    pp_sim_config cfg = pp_sim_config_default();
    cfg.n_paths = 20;
    const double checkpoints[2] = {1.0, 3.0};
    pp_decay_point pts[2];
    REQUIRE(pp_asymptotic_decay(sol, &cfg, checkpoints, 2, pts) == PP_OK);
    CHECK(pts[1].t == doctest::Approx(3.0));
    CHECK(pts[0].x_moment >= 0.0);

    const double xs[3] = {-20.0, 0.0, 20.0};
    const int is[3] = {1, 2, 1};
    double worst = 1.0;
    REQUIRE(pp_adjoint_residual(sol, xs, is, 3, &worst) == PP_OK);
    CHECK(worst <= 1e-9);
    const int bad[3] = {1, 2, 3};
    CHECK(pp_adjoint_residual(sol, xs, bad, 3, &worst) == PP_ERR_INVALID_ARGUMENT);
}
