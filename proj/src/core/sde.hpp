#pragma once

#include "chain.hpp"
#include "model.hpp"
#include "riccati.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace prodplan {

struct SimConfig {
    double dt = 0.01;
    double horizon = 200.0;
    std::size_t n_paths = 1;
    std::uint64_t seed = 0;
    double x0 = 0.0;
    int i0 = 0;               // 0-based
    bool antithetic = false;  // pair paths 2k, 2k+1 with negated Brownian increments
    unsigned threads = 1;     // 0 = hardware concurrency

    /// Number of Euler steps, round(horizon / dt).
    std::size_t steps() const;
};

/// Throws std::invalid_argument unless dt > 0, horizon >= dt, n_paths >= 1
/// (even when antithetic) and i0 is a regime of p.
void validate_config(const SimConfig& cfg, const ModelParams& p);

/// Production rate as a function of (inventory, 0-based regime, time).
using Policy = std::function<double(double x, int regime, double t)>;

/// The feedback law of the solved problem.
Policy optimal_policy(const RiccatiSolution& sol, const ModelParams& p);

/// Optimal feedback plus a constant shift.
Policy shifted_policy(const RiccatiSolution& sol, const ModelParams& p, double shift);

/// One Euler-Maruyama trajectory on the grid t_k = k dt. regime[k] and u[k]
/// are taken at t_k; disc_cost[k] is the trapezoidal running discounted cost
/// on [0, t_k].
struct ControlledPath {
    std::vector<double> times;
    std::vector<double> x;
    std::vector<double> u;
    std::vector<int> regime;
    std::vector<double> disc_cost;
    RegimePath chain;
};

/// Paths 0..cfg.n_paths-1. Path k is the same trajectory that mc_cost uses as
/// its k-th sample for the same config.
std::vector<ControlledPath> simulate_controlled(const ModelParams& p, const Policy& policy, const SimConfig& cfg);
std::vector<ControlledPath> simulate_controlled(const ModelParams& p, const RiccatiSolution& sol,
                                                const SimConfig& cfg);

// Monte Carlo estimates of the discounted cost truncated at cfg.horizon.
//
// truncation_bound = e^{-rT} C_tail / r where C_tail is twice the largest
// cross-path mean of the undiscounted running cost at eight checkpoints in
// [3T/4, T]. This presumes the closed loop has settled into its stationary
// regime by 3T/4; it is a pragmatic estimate, not a proven bound.

MCEstimate mc_cost(const ModelParams& p, const RiccatiSolution& sol, const SimConfig& cfg);
MCEstimate mc_cost(const ModelParams& p, const Policy& policy, const SimConfig& cfg);

/// Several policies driven by identical chain paths and Brownian increments.
std::vector<MCEstimate> mc_cost_common(const ModelParams& p, std::span<const Policy> policies, const SimConfig& cfg);

/// Cost at dt and at 2 dt on the same noise (coarse increments are sums of
/// consecutive fine ones). bias_allowance = |fine.mean - coarse.mean|, the
/// Richardson estimate of the O(dt) weak error of the fine estimate.
/// cfg.steps() must be even.
struct RichardsonCost {
    MCEstimate fine;
    MCEstimate coarse;
    double bias_allowance = 0.0;
};

RichardsonCost mc_cost_richardson(const ModelParams& p, const Policy& policy, const SimConfig& cfg);

struct DecayPoint {
    double t = 0.0;
    double x_moment = 0.0;  // e^{-rt} E|X_t|^2
    double x_std_error = 0.0;
    double y_moment = 0.0;  // e^{-rt} E|phi(alpha_t) X_t + psi(alpha_t)|^2
    double y_std_error = 0.0;
};

/// Checkpoints must be increasing and positive; each is rounded to the grid.
/// The simulation runs to the last checkpoint (cfg.horizon is ignored).
std::vector<DecayPoint> asymptotic_decay(const ModelParams& p, const RiccatiSolution& sol, const SimConfig& cfg,
                                         std::span<const double> checkpoints);

/// Difference between the Ito drift of Y = phi(alpha) X + psi(alpha) under the
/// closed loop and the drift -[N(x - c) - r Y] required by the adjoint equation.
double adjoint_drift_gap(double x, int i, const RiccatiSolution& sol, const ModelParams& p);

/// max |adjoint_drift_gap| over (x, 0-based regime) samples.
double adjoint_residual(const ModelParams& p, const RiccatiSolution& sol,
                        std::span<const std::pair<double, int>> samples);

} // namespace prodplan
