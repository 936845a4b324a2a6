#include "commands.hpp"
#include "expected_values.hpp"
#include "report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace cli {

namespace {

// Expected values carry three decimals.
constexpr double kTolerance = 1e-3 + 1e-9;

struct Family {
    const char* param;
    const char* values;
};

constexpr Family kFamilies[] = {
    {"r", "0.03,0.05,0.08"},
    {"q", "1,2,5"},
    {"theta", "4,1.5;4,2.5;5,2.5"},
    {"sigma", "0.1,0.3;0.4,0.6;0.8,1.2"},
};

std::vector<std::pair<std::string, double>> parse_expected(const std::string& text, const std::string& source) {
    std::vector<std::pair<std::string, double>> cells;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || (lineno == 1 && line == "cell,expected")) continue;
        const auto comma = line.find(',');
        std::size_t used = 0;
        double v = 0.0;
        try {
            if (comma != std::string::npos) v = std::stod(line.substr(comma + 1), &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (comma == std::string::npos || used == 0 || comma + 1 + used != line.size()) {
            throw Failure(kInvalidInput, source + ":" + std::to_string(lineno) + ": expected `cell,value`");
        }
        cells.emplace_back(line.substr(0, comma), v);
    }
    if (cells.empty()) throw Failure(kInvalidInput, source + ": no expected values");
    return cells;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Failure(kInvalidInput, "cannot open " + path);
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

void put(std::map<std::string, double>& actual, const std::string& prefix, const char* name,
         const std::vector<double>& v) {
    for (std::size_t i = 0; i < v.size(); ++i) actual[prefix + name + "_" + std::to_string(i + 1)] = v[i];
}

void write_curves(const std::filesystem::path& dir, const std::string& stem, const std::string& title,
                  const std::vector<std::string>& labels, const std::vector<ValueTable>& curves) {
    std::vector<std::string> header{"x"};
    SvgPlot plot(title, "inventory x", "v(x, i)");
    for (std::size_t k = 0; k < curves.size(); ++k) {
        for (std::size_t i = 0; i < curves[k].v.size(); ++i) {
            const std::string name = "v_regime_" + std::to_string(i + 1) + (labels[k].empty() ? "" : "@" + labels[k]);
            header.push_back(name);
            plot.add({name, curves[k].x, curves[k].v[i]});
        }
    }
    CsvTable csv(header);
    for (std::size_t j = 0; j < curves.front().x.size(); ++j) {
        std::vector<std::string> row{fmt(curves.front().x[j])};
        for (const auto& c : curves) {
            for (const auto& v : c.v) row.push_back(fmt(v[j]));
        }
        csv.row(row);
    }
    csv.write(dir / (stem + ".csv"));
    plot.write(dir / (stem + ".svg"));
}

} // namespace

int cmd_reproduce(const Options& opt) {
    const auto expected = opt.expected.empty() ? parse_expected(kExpectedValues, "embedded expected values")
                                               : parse_expected(read_file(opt.expected), opt.expected);
    Options run_opt = opt;
    run_opt.config.clear();
    const RunDir run(opt.out, "reproduce", opt.label, "", opt.seed);

    const Model base = benchmark_model();
    const Solution sol = solve(base.get());
    std::map<std::string, double> actual;

    const auto phi = field(sol.get(), PP_SOL_PHI);
    const auto psi = field(sol.get(), PP_SOL_PSI);
    const auto slope = field(sol.get(), PP_SOL_POLICY_SLOPE);
    const auto intercept = field(sol.get(), PP_SOL_POLICY_INTERCEPT);
    put(actual, "benchmark/", "phi", phi);
    put(actual, "benchmark/", "psi", psi);
    put(actual, "feedback/", "slope", slope);
    put(actual, "feedback/", "intercept", intercept);

    CsvTable solution({"regime", "phi", "psi", "slope", "intercept"});
    for (std::size_t i = 0; i < phi.size(); ++i) {
        solution.row({std::to_string(i + 1), fmt(phi[i]), fmt(psi[i]), fmt(slope[i]), fmt(intercept[i])});
    }
    solution.write(run / "solution.csv");
    std::printf("benchmark: phi = (%.3f, %.3f), psi = (%.3f, %.3f)\n", phi[0], phi[1], psi[0], psi[1]);
    for (std::size_t i = 0; i < phi.size(); ++i) {
        std::printf("  regime %zu: u* = %.3f x + %.3f\n", i + 1, slope[i], intercept[i]);
    }

    // Value function of the benchmark.
    write_curves(run.path(), "value", "value function", {""}, {value_table(sol.get(), -10.0, 10.0, 401)});

    // Table rows and the sensitivity curves.
    CsvTable table({"row", "phi_1", "phi_2", "psi_1", "psi_2"});
    for (const auto& family : kFamilies) {
        std::vector<std::string> labels;
        std::vector<ValueTable> curves;
        for (const auto& point : parse_sweep(family.param, family.values)) {
            const Model model = apply_sweep(base.get(), family.param, point);
            const Solution s = solve(model.get());
            const std::string row = std::string(family.param) + "=" + point.label;
            const auto p = field(s.get(), PP_SOL_PHI);
            const auto q = field(s.get(), PP_SOL_PSI);
            put(actual, "table/" + row + "/", "phi", p);
            put(actual, "table/" + row + "/", "psi", q);
            table.row({row, fmt(p[0]), fmt(p[1]), fmt(q[0]), fmt(q[1])});
            labels.push_back(row);
            curves.push_back(value_table(s.get(), -10.0, 10.0, 401));
        }
        write_curves(run.path(), std::string("value_") + family.param,
                     std::string("value function, ") + family.param + " sensitivity", labels, curves);
    }
    table.write(run / "table.csv");

    // One seeded closed-loop trajectory.
    pp_sim_config path_cfg = pp_sim_config_default();
    path_cfg.horizon = 50.0;
    path_cfg.seed = opt.seed;
    path_cfg.x0 = 0.0;
    {
        pp_path_set* raw = nullptr;
        check(pp_simulate_controlled(sol.get(), &path_cfg, &raw));
        const PathSet set(raw);
        const std::size_t n = pp_path_set_points(set.get());
        std::vector<double> t(n), x(n), u(n), cost(n);
        std::vector<int> regime(n);
        check(pp_path_set_get(set.get(), 0, PP_PATH_T, t.data(), n));
        check(pp_path_set_get(set.get(), 0, PP_PATH_X, x.data(), n));
        check(pp_path_set_get(set.get(), 0, PP_PATH_U, u.data(), n));
        check(pp_path_set_get(set.get(), 0, PP_PATH_DISC_COST, cost.data(), n));
        check(pp_path_set_regimes(set.get(), 0, regime.data(), n));
        CsvTable csv({"t", "x", "u", "regime", "disc_cost"});
        SvgPlot plot("closed-loop inventory and production", "time t", "level");
        std::size_t start = 0;
        for (std::size_t j = 0; j < n; ++j) {
            csv.row({fmt(t[j]), fmt(x[j]), fmt(u[j]), std::to_string(regime[j]), fmt(cost[j])});
            if (j + 1 == n || regime[j + 1] != regime[start]) {
                plot.band({t[start], t[std::min(j + 1, n - 1)], regime[start] - 1});
                start = j + 1;
            }
        }
        plot.add({"inventory x", t, x});
        plot.add({"production u", t, u});
        plot.band_legend({"regime 1", "regime 2"});
        csv.write(run / "path.csv");
        plot.write(run / "path.svg");
    }

    // Monte Carlo cost against the analytic value at (0, regime 1).
    pp_sim_config mc_cfg = pp_sim_config_default();
    mc_cfg.n_paths = 400;
    mc_cfg.seed = opt.seed;
    mc_cfg.threads = 0;
    pp_mc_estimate fine{}, coarse{};
    double bias = 0.0;
    check(pp_mc_cost_richardson(sol.get(), &mc_cfg, &fine, &coarse, &bias));
    double v0 = 0.0;
    check(pp_value_function(sol.get(), 0.0, 1, &v0));
    const double allowance = 3.0 * fine.std_error + fine.truncation_bound + bias;
    const bool mc_ok = std::abs(fine.mean - v0) <= allowance;
    CsvTable verification({"quantity", "mean", "std_error", "n", "truncation_bound"});
    verification.row({"discounted_cost", fmt(fine.mean), fmt(fine.std_error), std::to_string(fine.n),
                      fmt(fine.truncation_bound)});
    verification.row({"discounted_cost_2dt", fmt(coarse.mean), fmt(coarse.std_error), std::to_string(coarse.n),
                      fmt(coarse.truncation_bound)});
    verification.row({"value_function", fmt(v0), "0", "0", "0"});
    verification.write(run / "verification.csv");
    std::printf("verification: mc cost %.4f (se %.4f, n %zu) vs v(0,1) = %.4f, allowance %.4f: %s\n", fine.mean,
                fine.std_error, fine.n, v0, allowance, mc_ok ? "ok" : "outside allowance");

    // Diff against the expected cells.
    CsvTable diff({"cell", "expected", "actual", "abs_diff", "status"});
    std::vector<std::string> mismatched;
    for (const auto& [cell, want] : expected) {
        const auto it = actual.find(cell);
        if (it == actual.end()) {
            diff.row({cell, fmt(want), "", "", "missing"});
            mismatched.push_back(cell + " (not produced)");
            continue;
        }
        const double gap = std::abs(it->second - want);
        const bool ok = gap <= kTolerance;
        diff.row({cell, fmt(want), fmt(it->second), fmt(gap), ok ? "match" : "mismatch"});
        if (!ok) {
            char buf[160];
            std::snprintf(buf, sizeof buf, " expected %.3f, got %.5f", want, it->second);
            mismatched.push_back(cell + buf);
        }
    }
    diff.write(run / "diff.csv");

    std::printf("%zu/%zu expected cells match\n", expected.size() - mismatched.size(), expected.size());
    for (const auto& m : mismatched) std::fprintf(stderr, "mismatch: %s\n", m.c_str());
    std::printf("wrote %s\n", run.path().c_str());
    const int code = mismatched.empty() ? kOk : kCheckFailed;
    run.finish(code);
    return code;
}

} // namespace cli
