#pragma once

#include "api.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace cli {

struct Options {
    std::string config;  // empty = built-in benchmark
    std::string out = "out";
    std::string label;
    std::uint64_t seed = 1;

    // sweep
    std::string param;
    std::string values;

    // simulate
    std::size_t paths = 1;
    std::size_t export_paths = 1;
    double dt = 0.01;
    double horizon = 200.0;
    double x0 = 0.0;
    int i0 = 1;
    unsigned threads = 0;

    // value grid
    double x_min = -10.0;
    double x_max = 10.0;
    std::size_t points = 401;

    // reproduce
    std::string expected;
};

int cmd_solve(const Options& opt);
int cmd_sweep(const Options& opt);
int cmd_simulate(const Options& opt);
int cmd_value(const Options& opt);
int cmd_check(const Options& opt);
int cmd_reproduce(const Options& opt);

// Shared by sweep and reproduce.

struct SweepPoint {
    std::string label;           // "0.03", "4;1.5"
    std::vector<double> values;  // one entry for r and q, m for theta and sigma
};

/// Splits "0.03,0.05" (scalar params) or "4,1.5;4,2.5" (vector params).
std::vector<SweepPoint> parse_sweep(const std::string& param, const std::string& text);

/// Copy of base with the swept parameter replaced. For q every off-diagonal
/// generator entry is set to the value.
Model apply_sweep(const pp_model* base, const std::string& param, const SweepPoint& point);

/// Throws Failure(kInvalidInput) listing every violated invariant.
void require_valid(const pp_model* model, unsigned flags = 0);

} // namespace cli
