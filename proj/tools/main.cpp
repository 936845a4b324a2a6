#include "commands.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <functional>

int main(int argc, char** argv) {
    CLI::App app{"Regime-switching production planning: solve, simulate, sweep, check, reproduce"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", pp_version());

    cli::Options opt;
    app.add_option("--config", opt.config, "JSON parameter file (default: built-in benchmark)");
    app.add_option("--seed", opt.seed, "random seed")->capture_default_str();
    app.add_option("--out", opt.out, "output root")->capture_default_str();
    app.add_option("--label", opt.label, "run directory name (default: UTC timestamp)");

    std::function<int(const cli::Options&)> command;
    auto sub = [&](const char* name, const char* help, int (*fn)(const cli::Options&)) {
        auto* s = app.add_subcommand(name, help);
        s->callback([&command, fn] { command = fn; });
        return s;
    };
    auto add_grid = [&](CLI::App* s) {
        s->add_option("--x-min", opt.x_min, "grid start")->capture_default_str();
        s->add_option("--x-max", opt.x_max, "grid end")->capture_default_str();
        s->add_option("--points", opt.points, "grid points")->capture_default_str()->check(CLI::Range(2, 1000000));
    };

    sub("solve", "solve the coupled Riccati system", cli::cmd_solve);

    auto* sweep = sub("sweep", "solve across values of one parameter", cli::cmd_sweep);
    sweep->add_option("--param", opt.param, "r, q, theta or sigma")->required();
    sweep->add_option("--values", opt.values, "e.g. 0.03,0.05 or 4,1.5;4,2.5")->required();
    add_grid(sweep);

    auto* simulate = sub("simulate", "simulate the closed loop and estimate the cost", cli::cmd_simulate);
    simulate->add_option("--paths", opt.paths, "Monte Carlo paths")->capture_default_str()->check(CLI::PositiveNumber);
    simulate->add_option("--export", opt.export_paths, "paths written as CSV")->capture_default_str();
    simulate->add_option("--dt", opt.dt, "time step")->capture_default_str();
    simulate->add_option("--horizon", opt.horizon, "horizon T")->capture_default_str();
    simulate->add_option("--x0", opt.x0, "initial inventory")->capture_default_str();
    simulate->add_option("--i0", opt.i0, "initial regime (1-based)")->capture_default_str();
    simulate->add_option("--threads", opt.threads, "worker threads, 0 = all")->capture_default_str();

    auto* value = sub("value", "tabulate the value function", cli::cmd_value);
    add_grid(value);

    sub("check", "check assumptions and optimality conditions", cli::cmd_check);

    auto* reproduce = sub("reproduce", "regenerate the benchmark study and diff it against expected values",
                          cli::cmd_reproduce);
    reproduce->add_option("--expected", opt.expected, "override expected-values CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return cli::kInvalidInput;
    }

    try {
        return command(opt);
    } catch (const cli::Failure& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return e.code;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return cli::kInternal;
    }
}
