#pragma once

#include "model.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace prodplan {

/// A realized trajectory of the regime chain on [0, horizon).
///
/// states[k] is the regime on [jump_times[k], jump_times[k+1]) (the last
/// interval ends at the horizon). jump_counts(i, j) is N_ij(horizon).
struct RegimePath {
    std::vector<double> jump_times;
    std::vector<int> states;
    Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic> jump_counts;
    double horizon = 0.0;

    /// Regime occupied at time t in [0, horizon].
    int state_at(double t) const;
    /// Total time spent in regime i before the horizon.
    double occupation_time(int i) const;
    /// Compensator q_ij * occupation_time(i) of N_ij, so that
    /// N_ij(horizon) - compensator(i, j) is a mean-zero martingale increment.
    double compensator(const Generator& gen, int i, int j) const;
    /// Exact integral of e^{-rt} g(alpha_t) over [0, horizon).
    double discounted_integral(double r, const Vector& g) const;
};

/// Simulates the chain with exponential holding times (rate -q_ii) and jump
/// destinations drawn with probability q_ij / (-q_ii). An absorbing regime
/// simply stops jumping. i0 is 0-based.
RegimePath simulate_chain(const Generator& gen, int i0, double horizon, std::mt19937_64& rng);

/// Same as above with the chain stream of path 0 for `seed`.
RegimePath simulate_chain(const Generator& gen, int i0, double horizon, std::uint64_t seed);

/// Solves (rI - Q) w = g, so that w(i) = E_i int_0^inf e^{-rt} g(alpha_t) dt.
/// Throws std::invalid_argument for r <= 0 or a size mismatch.
Vector discounted_resolvent(const Generator& gen, double r, const Vector& g);

struct MCEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t n = 0;
    double truncation_bound = 0.0;  // bound on the discarded tail beyond the horizon
};

/// Monte Carlo estimate of E_{i0} int_0^inf e^{-rt} g(alpha_t) dt from n_paths
/// exact chain paths truncated at `horizon`. Every path integral is exact, so
/// the only bias is the tail, bounded by e^{-r horizon} max|g| / r.
MCEstimate mc_regime_functional(const Generator& gen, double r, const Vector& g, int i0, std::size_t n_paths,
                                double horizon, std::uint64_t seed);

} // namespace prodplan
