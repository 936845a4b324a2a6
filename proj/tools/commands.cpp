#include "commands.hpp"

#include "report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

namespace cli {

namespace {

std::string regime_col(const char* prefix, std::size_t i) {
    return std::string(prefix) + "_" + std::to_string(i + 1);
}

double parse_number(const std::string& text) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    while (used < text.size() && std::isspace(static_cast<unsigned char>(text[used]))) ++used;
    if (text.empty() || used != text.size() || !std::isfinite(v)) {
        throw Failure(kInvalidInput, "invalid sweep value `" + text + "`");
    }
    return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, sep)) {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        parts.push_back(b == std::string::npos ? "" : item.substr(b, e - b + 1));
    }
    if (!text.empty() && text.back() == sep) parts.emplace_back();
    return parts;
}

std::string join(const std::vector<double>& values, char sep) {
    std::string out;
    for (std::size_t k = 0; k < values.size(); ++k) out += (k ? std::string(1, sep) : "") + fmt(values[k]);
    return out;
}

RunDir open_run(const Options& opt, const std::string& command) {
    return RunDir(opt.out, command, opt.label, opt.config, opt.seed);
}

pp_sim_config sim_config(const Options& opt) {
    pp_sim_config cfg = pp_sim_config_default();
    cfg.dt = opt.dt;
    cfg.horizon = opt.horizon;
    cfg.n_paths = opt.paths;
    cfg.seed = opt.seed;
    cfg.x0 = opt.x0;
    cfg.regime0 = opt.i0;
    cfg.threads = opt.threads;
    return cfg;
}

void write_path(const pp_path_set* set, std::size_t k, const std::filesystem::path& file, SvgPlot* plot) {
    const std::size_t n = pp_path_set_points(set);
    std::vector<double> t(n), x(n), u(n), cost(n);
    std::vector<int> regime(n);
    check(pp_path_set_get(set, k, PP_PATH_T, t.data(), n));
    check(pp_path_set_get(set, k, PP_PATH_X, x.data(), n));
    check(pp_path_set_get(set, k, PP_PATH_U, u.data(), n));
    check(pp_path_set_get(set, k, PP_PATH_DISC_COST, cost.data(), n));
    check(pp_path_set_regimes(set, k, regime.data(), n));

    CsvTable csv({"t", "x", "u", "regime", "disc_cost"});
    for (std::size_t j = 0; j < n; ++j) csv.row({fmt(t[j]), fmt(x[j]), fmt(u[j]), std::to_string(regime[j]), fmt(cost[j])});
    csv.write(file);

    if (!plot) return;
    plot->add({"inventory x", t, x});
    plot->add({"production u", t, u});
    int max_regime = 0;
    std::size_t start = 0;
    for (std::size_t j = 1; j <= n; ++j) {
        if (j == n || regime[j] != regime[start]) {
            const double end = j == n ? t[n - 1] : t[j];
            plot->band({t[start], end, regime[start] - 1});
            max_regime = std::max(max_regime, regime[start]);
            start = j;
        }
    }
    std::vector<std::string> names;
    for (int i = 1; i <= max_regime; ++i) names.push_back("regime " + std::to_string(i));
    plot->band_legend(std::move(names));
}

void print_solution(const pp_solution* sol) {
    const auto phi = field(sol, PP_SOL_PHI);
    const auto psi = field(sol, PP_SOL_PSI);
    const auto slope = field(sol, PP_SOL_POLICY_SLOPE);
    const auto intercept = field(sol, PP_SOL_POLICY_INTERCEPT);
    std::printf("regime        phi        psi   u = slope*x + intercept\n");
    for (std::size_t i = 0; i < phi.size(); ++i) {
        std::printf("%6zu %10.6f %10.6f   u = %.6f*x + %.6f\n", i + 1, phi[i], psi[i], slope[i], intercept[i]);
    }
    std::printf("newton iterations %d, min dominance margin %.6f\n", pp_solution_iterations(sol),
                pp_solution_min_dominance_margin(sol));
}

} // namespace

void require_valid(const pp_model* model, unsigned flags) {
    const auto problems = violations(model, flags);
    if (problems.empty()) return;
    std::string message = "invalid parameters:";
    for (const auto& p : problems) message += "\n  " + p;
    throw Failure(kInvalidInput, message);
}

std::vector<SweepPoint> parse_sweep(const std::string& param, const std::string& text) {
    const bool vector_param = param == "theta" || param == "sigma";
    if (!vector_param && param != "r" && param != "q") {
        throw Failure(kInvalidInput, "unknown sweep parameter `" + param + "` (expected r, q, theta or sigma)");
    }
    if (text.empty()) throw Failure(kInvalidInput, "--values is empty");
    std::vector<SweepPoint> points;
    if (vector_param) {
        for (const auto& group : split(text, ';')) {
            SweepPoint p;
            for (const auto& item : split(group, ',')) p.values.push_back(parse_number(item));
            p.label = join(p.values, ';');
            points.push_back(std::move(p));
        }
    } else {
        for (const auto& item : split(text, ',')) {
            SweepPoint p;
            p.values.push_back(parse_number(item));
            p.label = fmt(p.values.front());
            points.push_back(std::move(p));
        }
    }
    return points;
}

Model apply_sweep(const pp_model* base, const std::string& param, const SweepPoint& point) {
    Model model = clone(base);
    const auto m = static_cast<std::size_t>(pp_model_regimes(base));
    auto fail_context = [&](pp_status s) { check(s, param + "=" + point.label); };
    if (param == "r") {
        fail_context(pp_model_set_discount(model.get(), point.values.front()));
    } else if (param == "q") {
        std::vector<double> q(m * m, point.values.front());
        for (std::size_t i = 0; i < m; ++i) q[i * m + i] = -static_cast<double>(m - 1) * point.values.front();
        fail_context(pp_model_set_generator(model.get(), q.data(), q.size()));
    } else {
        if (point.values.size() != m) {
            throw Failure(kInvalidInput, param + "=" + point.label + " needs " + std::to_string(m) + " entries");
        }
        const auto f = param == "theta" ? PP_FIELD_THETA : PP_FIELD_SIGMA;
        fail_context(pp_model_set_vector(model.get(), f, point.values.data(), point.values.size()));
    }
    return model;
}

int cmd_solve(const Options& opt) {
    const Model model = load_model(opt.config);
    require_valid(model.get());
    const Solution sol = solve(model.get());
    const auto run = open_run(opt, "solve");

    const auto phi = field(sol.get(), PP_SOL_PHI);
    const auto psi = field(sol.get(), PP_SOL_PSI);
    const auto res_phi = field(sol.get(), PP_SOL_RESIDUAL_PHI);
    const auto res_psi = field(sol.get(), PP_SOL_RESIDUAL_PSI);
    const auto margin = field(sol.get(), PP_SOL_DOMINANCE_MARGIN);
    const auto slope = field(sol.get(), PP_SOL_POLICY_SLOPE);
    const auto intercept = field(sol.get(), PP_SOL_POLICY_INTERCEPT);
    const auto w = field(sol.get(), PP_SOL_CONSTANT_TERM);

    CsvTable solution({"regime", "phi", "psi", "residual_phi", "residual_psi"});
    CsvTable certificate({"regime", "dominance_margin", "strictly_dominant"});
    CsvTable feedback({"regime", "slope", "intercept", "value_constant"});
    for (std::size_t i = 0; i < phi.size(); ++i) {
        const auto r = std::to_string(i + 1);
        solution.row({r, fmt(phi[i]), fmt(psi[i]), fmt(res_phi[i]), fmt(res_psi[i])});
        certificate.row({r, fmt(margin[i]), margin[i] > 0.0 ? "1" : "0"});
        feedback.row({r, fmt(slope[i]), fmt(intercept[i]), fmt(w[i])});
    }
    solution.write(run / "solution.csv");
    certificate.write(run / "certificate.csv");
    feedback.write(run / "feedback.csv");

    print_solution(sol.get());
    std::printf("wrote %s\n", run.path().c_str());
    run.finish(kOk);
    return kOk;
}

int cmd_sweep(const Options& opt) {
    const auto points = parse_sweep(opt.param, opt.values);
    const Model base = load_model(opt.config);
    const auto m = static_cast<std::size_t>(pp_model_regimes(base.get()));

    std::vector<Model> models;
    for (const auto& p : points) {
        models.push_back(apply_sweep(base.get(), opt.param, p));
        try {
            require_valid(models.back().get());
        } catch (const Failure& e) {
            throw Failure(kInvalidInput, opt.param + "=" + p.label + ": " + e.what());
        }
    }

    const auto run = open_run(opt, "sweep");
    std::vector<std::string> header{"param", "value"};
    for (std::size_t i = 0; i < m; ++i) header.push_back(regime_col("phi", i));
    for (std::size_t i = 0; i < m; ++i) header.push_back(regime_col("psi", i));
    CsvTable table(header);

    std::vector<std::string> curve_header{"x"};
    std::vector<ValueTable> curves;
    SvgPlot plot("value function, " + opt.param + " sweep", "inventory x", "v(x, i)");
    for (std::size_t k = 0; k < points.size(); ++k) {
        const Solution sol = solve(models[k].get());
        const auto phi = field(sol.get(), PP_SOL_PHI);
        const auto psi = field(sol.get(), PP_SOL_PSI);
        std::vector<std::string> row{opt.param, points[k].label};
        for (double v : phi) row.push_back(fmt(v));
        for (double v : psi) row.push_back(fmt(v));
        table.row(row);
        std::printf("%s=%-12s phi=(%s) psi=(%s)\n", opt.param.c_str(), points[k].label.c_str(),
                    join(phi, ',').c_str(), join(psi, ',').c_str());

        curves.push_back(value_table(sol.get(), opt.x_min, opt.x_max, opt.points));
        for (std::size_t i = 0; i < m; ++i) {
            const std::string name = "v_regime_" + std::to_string(i + 1) + "@" + opt.param + "=" + points[k].label;
            curve_header.push_back(name);
            plot.add({name, curves.back().x, curves.back().v[i]});
        }
    }
    table.write(run / "sweep.csv");

    CsvTable values(curve_header);
    for (std::size_t j = 0; j < opt.points; ++j) {
        std::vector<std::string> row{fmt(curves.front().x[j])};
        for (const auto& c : curves) {
            for (const auto& v : c.v) row.push_back(fmt(v[j]));
        }
        values.row(row);
    }
    values.write(run / "value_curves.csv");
    plot.write(run / "value_curves.svg");
    std::printf("wrote %s\n", run.path().c_str());
    run.finish(kOk);
    return kOk;
}

int cmd_value(const Options& opt) {
    const Model model = load_model(opt.config);
    require_valid(model.get());
    const Solution sol = solve(model.get());
    const auto table = value_table(sol.get(), opt.x_min, opt.x_max, opt.points);
    const auto run = open_run(opt, "value");

    std::vector<std::string> header{"x"};
    SvgPlot plot("value function", "inventory x", "v(x, i)");
    for (std::size_t i = 0; i < table.v.size(); ++i) {
        header.push_back(regime_col("v_regime", i));
        plot.add({"regime " + std::to_string(i + 1), table.x, table.v[i]});
    }
    CsvTable csv(header);
    for (std::size_t k = 0; k < table.x.size(); ++k) {
        std::vector<std::string> row{fmt(table.x[k])};
        for (const auto& v : table.v) row.push_back(fmt(v[k]));
        csv.row(row);
    }
    csv.write(run / "value.csv");
    plot.write(run / "value.svg");

    const auto w = field(sol.get(), PP_SOL_CONSTANT_TERM);
    for (std::size_t i = 0; i < w.size(); ++i) std::printf("v(0, %zu) = %.6f\n", i + 1, w[i]);
    std::printf("nonnegative on grid: %s\nwrote %s\n", table.nonnegative ? "yes" : "no", run.path().c_str());
    run.finish(kOk);
    return kOk;
}

int cmd_simulate(const Options& opt) {
    const Model model = load_model(opt.config);
    require_valid(model.get(), PP_VALIDATE_ALLOW_ZERO_SIGMA);
    const auto sigma = field(model.get(), PP_FIELD_SIGMA);
    if (std::find(sigma.begin(), sigma.end(), 0.0) != sigma.end()) {
        std::printf("note: zero volatility in some regime; inventory is deterministic there\n");
    }
    const Solution sol = solve(model.get());
    const auto run = open_run(opt, "simulate");

    pp_sim_config cfg = sim_config(opt);
    pp_sim_config export_cfg = cfg;
    export_cfg.n_paths = std::min(opt.paths, opt.export_paths);
    if (export_cfg.n_paths > 0) {
        pp_path_set* raw = nullptr;
        check(pp_simulate_controlled(sol.get(), &export_cfg, &raw), "simulate");
        const PathSet set(raw);
        SvgPlot plot("closed-loop inventory and production", "time t", "level");
        for (std::size_t k = 0; k < export_cfg.n_paths; ++k) {
            char name[32];
            std::snprintf(name, sizeof name, "path_%04zu.csv", k + 1);
            write_path(set.get(), k, run / name, k == 0 ? &plot : nullptr);
        }
        plot.write(run / "path.svg");
    }

    pp_mc_estimate est{};
    check(pp_mc_cost(sol.get(), &cfg, &est), "simulate");
    double v = 0.0;
    check(pp_value_function(sol.get(), opt.x0, opt.i0, &v));
    CsvTable summary({"quantity", "mean", "std_error", "n", "truncation_bound"});
    summary.row({"discounted_cost", fmt(est.mean), fmt(est.std_error), std::to_string(est.n), fmt(est.truncation_bound)});
    summary.row({"value_function", fmt(v), "0", "0", "0"});
    summary.write(run / "mc_summary.csv");

    std::printf("mc cost %.6f (se %.6f, n %zu, truncation <= %.2e); analytic v(%g, %d) = %.6f; gap %.2f se\n", est.mean,
                est.std_error, est.n, est.truncation_bound, opt.x0, opt.i0, v,
                est.std_error > 0 ? std::abs(est.mean - v) / est.std_error : 0.0);
    std::printf("wrote %s\n", run.path().c_str());
    run.finish(kOk);
    return kOk;
}

int cmd_check(const Options& opt) {
    const Model model = load_model(opt.config);
    const pp_model* mp = model.get();
    const auto m = pp_model_regimes(mp);
    const auto run = open_run(opt, "check");

    CsvTable report({"item", "status", "detail"});
    bool all_pass = true;
    auto item = [&](const std::string& name, bool pass, const std::string& detail) {
        all_pass = all_pass && pass;
        std::printf("%-28s %s  %s\n", name.c_str(), pass ? "PASS" : "FAIL", detail.c_str());
        report.row({name, pass ? "PASS" : "FAIL", detail});
    };

    const auto problems = violations(mp);
    std::string joined;
    for (const auto& p : problems) joined += (joined.empty() ? "" : "; ") + p;
    item("parameters", problems.empty(), problems.empty() ? "all invariants hold" : joined);

    for (int i = 1; i <= m; ++i) {
        int convex = 0;
        check(pp_convexity_check(mp, i, 0.0, 0.0, &convex));
        const auto n = field(mp, PP_FIELD_N)[static_cast<std::size_t>(i - 1)];
        const auto r = field(mp, PP_FIELD_R)[static_cast<std::size_t>(i - 1)];
        item("convexity regime " + std::to_string(i), convex != 0, "Hessian diag(N, R) = (" + fmt(n) + ", " + fmt(r) + ")");
    }

    Solution sol;
    std::string solve_error;
    if (problems.empty()) {
        try {
            sol = solve(mp);
        } catch (const Failure& e) {
            solve_error = e.what();
        }
    } else {
        solve_error = "not attempted on invalid parameters";
    }

    pp_lipschitz k{};
    if (sol) {
        const auto phi = field(sol.get(), PP_SOL_PHI);
        check(pp_lq_constants(mp, phi.data(), phi.size(), &k));
    }
    double bound = 0.0;
    check(pp_discount_lower_bound(&k, &bound));
    const double r = pp_model_discount(mp);
    item("discount bound", r > bound && r > 0.0, "r = " + fmt(r) + ", required > " + fmt(bound));

    if (!sol) {
        item("riccati solve", false, solve_error);
        item("dominance certificate", false, "no solution");
        item("adjoint residual", false, "no solution");
    } else {
        const auto res = field(sol.get(), PP_SOL_RESIDUAL_PHI);
        double worst = 0.0;
        for (double v : res) worst = std::max(worst, std::abs(v));
        item("riccati solve", worst <= 1e-10,
             std::to_string(pp_solution_iterations(sol.get())) + " iterations, residual " + fmt(worst));

        const double margin = pp_solution_min_dominance_margin(sol.get());
        item("dominance certificate", margin > 0.0, "min margin " + fmt(margin));

        std::mt19937_64 rng(opt.seed);
        std::uniform_real_distribution<double> ux(-20.0, 20.0);
        std::vector<double> xs(1000);
        std::vector<int> is(1000);
        for (std::size_t j = 0; j < xs.size(); ++j) {
            xs[j] = ux(rng);
            is[j] = static_cast<int>(j % static_cast<std::size_t>(m)) + 1;
        }
        double adj = 0.0;
        check(pp_adjoint_residual(sol.get(), xs.data(), is.data(), xs.size(), &adj));
        const double limit = 10.0 * pp_solver_options_default().tol * 21.0;
        item("adjoint residual", adj <= limit, "max " + fmt(adj) + " over 1000 samples, limit " + fmt(limit));
    }

    // argmin_u H = h - y/R must beat nearby controls.
    const auto h = field(mp, PP_FIELD_H);
    const auto rw = field(mp, PP_FIELD_R);
    std::mt19937_64 rng(opt.seed + 1);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    int failures = 0;
    const int spots = 20;
    for (int s = 0; s < spots; ++s) {
        const int i = s % m;
        const double x = u(rng), y = u(rng), z = u(rng);
        if (!(rw[static_cast<std::size_t>(i)] > 0.0)) {
            ++failures;
            continue;
        }
        const double best = h[static_cast<std::size_t>(i)] - y / rw[static_cast<std::size_t>(i)];
        double h_best = 0.0;
        check(pp_hamiltonian(mp, x, i + 1, best, y, z, &h_best));
        for (double d : {-1.0, -0.1, 0.1, 1.0}) {
            double other = 0.0;
            check(pp_hamiltonian(mp, x, i + 1, best + d, y, z, &other));
            if (other < h_best) {
                ++failures;
                break;
            }
        }
    }
    item("hamiltonian minimizer", failures == 0,
         std::to_string(spots - failures) + "/" + std::to_string(spots) + " spot checks");

    report.write(run / "check.csv");
    const int code = all_pass ? kOk : kCheckFailed;
    run.finish(code);
    return code;
}

} // namespace cli
