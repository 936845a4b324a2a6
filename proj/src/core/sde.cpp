#include "sde.hpp"

#include "rng.hpp"
#include "stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace prodplan {

namespace {

constexpr int kTailCheckpoints = 8;

// One policy integrated with Euler steps of stride * dt.
struct Lane {
    const Policy* policy;
    int stride;
};

struct PathOutput {
    std::vector<double> cost;  // per lane
    std::vector<double> tail;  // per lane, kTailCheckpoints undiscounted running costs
    std::vector<double> observed_x;
    std::vector<int> observed_regime;
};

class PathEngine {
public:
    PathEngine(const ModelParams& p, const SimConfig& cfg, std::vector<Lane> lanes, std::size_t steps,
               std::vector<std::size_t> observe = {})
        : p_(p), cfg_(cfg), lanes_(std::move(lanes)), steps_(steps), observe_(std::move(observe)) {
        std::size_t common = 1;
        for (const auto& lane : lanes_) common = std::lcm(common, static_cast<std::size_t>(lane.stride));
        if (steps_ % common != 0) throw std::invalid_argument("step count must be a multiple of every lane stride");
        for (int k = 0; k < kTailCheckpoints; ++k) {
            const std::size_t s = steps_ * 3 / 4 + (steps_ / 4) * static_cast<std::size_t>(k) / (kTailCheckpoints - 1);
            tail_steps_.push_back(k + 1 == kTailCheckpoints ? steps_ : s / common * common);
        }
    }

    std::size_t steps() const { return steps_; }
    std::size_t lanes() const { return lanes_.size(); }

    void run(std::size_t path, PathOutput& out, ControlledPath* record) const {
        const std::size_t lanes = lanes_.size();
        const bool negate = cfg_.antithetic && (path % 2 == 1);
        const std::size_t stream_path = cfg_.antithetic ? path / 2 : path;
        const double dt = cfg_.dt;
        const double sqrt_dt = std::sqrt(dt);
        const double step_discount = std::exp(-p_.r * dt);

        auto chain_rng = path_stream(cfg_.seed, stream_path, Stream::Chain);
        RegimePath chain = simulate_chain(p_.gen, cfg_.i0, dt * static_cast<double>(steps_), chain_rng);
        auto bm_rng = path_stream(cfg_.seed, stream_path, Stream::Brownian);
        std::normal_distribution<double> normal(0.0, 1.0);

        std::size_t next_jump = 1;
        auto regime_at = [&](double t) {
            while (next_jump < chain.jump_times.size() && chain.jump_times[next_jump] <= t) ++next_jump;
            return chain.states[next_jump - 1];
        };

        auto integrand = [&](double x, double u, int i) {
            const double dx = x - p_.c(i);
            const double du = u - p_.h(i);
            return 0.5 * (p_.N(i) * dx * dx + p_.R(i) * du * du);
        };

        out.cost.assign(lanes, 0.0);
        out.tail.assign(lanes * kTailCheckpoints, 0.0);
        out.observed_x.assign(observe_.size(), 0.0);
        out.observed_regime.assign(observe_.size(), 0);

        std::vector<double> x(lanes, cfg_.x0), u(lanes), f_disc(lanes), dw(lanes, 0.0);
        std::vector<int> block_regime(lanes);

        int regime = regime_at(0.0);
        for (std::size_t l = 0; l < lanes; ++l) {
            u[l] = (*lanes_[l].policy)(x[l], regime, 0.0);
            f_disc[l] = integrand(x[l], u[l], regime);
            block_regime[l] = regime;
            record_tail(out, l, 0, f_disc[l]);
        }
        observe(out, 0, x[0], regime);
        if (record) start_record(*record, regime, x[0], u[0]);

        double discount = 1.0;
        for (std::size_t j = 0; j < steps_; ++j) {
            const double z = negate ? -normal(bm_rng) : normal(bm_rng);
            const double increment = sqrt_dt * z;
            const std::size_t step = j + 1;
            const double t_next = dt * static_cast<double>(step);
            discount *= step_discount;
            regime = regime_at(t_next);

            for (std::size_t l = 0; l < lanes; ++l) {
                dw[l] += increment;
                const auto stride = static_cast<std::size_t>(lanes_[l].stride);
                if (step % stride != 0) continue;
                const double block = dt * static_cast<double>(stride);
                const int i = block_regime[l];
                x[l] += (u[l] - p_.theta(i)) * block + p_.sigma(i) * dw[l];
                dw[l] = 0.0;
                u[l] = (*lanes_[l].policy)(x[l], regime, t_next);
                const double f = integrand(x[l], u[l], regime);
                const double f_next = discount * f;
                out.cost[l] += 0.5 * block * (f_disc[l] + f_next);
                f_disc[l] = f_next;
                block_regime[l] = regime;
                record_tail(out, l, step, f);
            }
            observe(out, step, x[0], regime);
            if (record) {
                record->times.push_back(t_next);
                record->x.push_back(x[0]);
                record->u.push_back(u[0]);
                record->regime.push_back(regime);
                record->disc_cost.push_back(out.cost[0]);
            }
        }
        if (record) record->chain = std::move(chain);
    }

private:
    void record_tail(PathOutput& out, std::size_t lane, std::size_t step, double f) const {
        for (int k = 0; k < kTailCheckpoints; ++k) {
            if (tail_steps_[static_cast<std::size_t>(k)] == step) {
                out.tail[lane * kTailCheckpoints + static_cast<std::size_t>(k)] = f;
            }
        }
    }

    void observe(PathOutput& out, std::size_t step, double x, int regime) const {
        for (std::size_t k = 0; k < observe_.size(); ++k) {
            if (observe_[k] == step) {
                out.observed_x[k] = x;
                out.observed_regime[k] = regime;
            }
        }
    }

    void start_record(ControlledPath& rec, int regime, double x, double u) const {
        rec = ControlledPath{};
        rec.times.reserve(steps_ + 1);
        rec.x.reserve(steps_ + 1);
        rec.u.reserve(steps_ + 1);
        rec.regime.reserve(steps_ + 1);
        rec.disc_cost.reserve(steps_ + 1);
        rec.times.push_back(0.0);
        rec.x.push_back(x);
        rec.u.push_back(u);
        rec.regime.push_back(regime);
        rec.disc_cost.push_back(0.0);
    }

    const ModelParams& p_;
    const SimConfig& cfg_;
    std::vector<Lane> lanes_;
    std::size_t steps_;
    std::vector<std::size_t> observe_;
    std::vector<std::size_t> tail_steps_;
};

unsigned thread_count(const SimConfig& cfg, std::size_t work) {
    unsigned n = cfg.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : cfg.threads;
    return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(work, 1)));
}

// Runs fn(path) for every path; each path writes only its own slot, so the
// results do not depend on the number of threads.
template <typename Fn>
void for_each_path(const SimConfig& cfg, std::size_t n_paths, Fn&& fn) {
    const unsigned workers = thread_count(cfg, n_paths);
    if (workers <= 1) {
        for (std::size_t k = 0; k < n_paths; ++k) fn(k);
        return;
    }
    std::vector<std::thread> pool;
    const std::size_t chunk = (n_paths + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(n_paths, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&fn, begin, end] {
            for (std::size_t k = begin; k < end; ++k) fn(k);
        });
    }
    for (auto& t : pool) t.join();
}

std::vector<PathOutput> run_all(const PathEngine& engine, const SimConfig& cfg) {
    std::vector<PathOutput> outputs(cfg.n_paths);
    for_each_path(cfg, cfg.n_paths, [&](std::size_t k) { engine.run(k, outputs[k], nullptr); });
    return outputs;
}

// Antithetic pairs are averaged first so that the standard error is taken
// over independent samples.
SampleMoments moments(std::vector<double> values, bool antithetic) {
    if (antithetic) {
        std::vector<double> pairs(values.size() / 2);
        for (std::size_t k = 0; k < pairs.size(); ++k) pairs[k] = 0.5 * (values[2 * k] + values[2 * k + 1]);
        return sample_moments(pairs);
    }
    return sample_moments(values);
}

MCEstimate lane_estimate(const std::vector<PathOutput>& outputs, std::size_t lane, const ModelParams& p,
                         const SimConfig& cfg, double horizon) {
    std::vector<double> costs(outputs.size());
    for (std::size_t k = 0; k < outputs.size(); ++k) costs[k] = outputs[k].cost[lane];
    const auto m = moments(std::move(costs), cfg.antithetic);

    double c_tail = 0.0;
    std::vector<double> column(outputs.size());
    for (int c = 0; c < kTailCheckpoints; ++c) {
        for (std::size_t k = 0; k < outputs.size(); ++k) {
            column[k] = outputs[k].tail[lane * kTailCheckpoints + static_cast<std::size_t>(c)];
        }
        c_tail = std::max(c_tail, pairwise_sum(column) / static_cast<double>(column.size()));
    }
    c_tail *= 2.0;

    MCEstimate est;
    est.mean = m.mean;
    est.std_error = m.std_error;
    est.n = outputs.size();
    est.truncation_bound = std::exp(-p.r * horizon) * c_tail / p.r;
    return est;
}

} // namespace

std::size_t SimConfig::steps() const {
    return static_cast<std::size_t>(std::llround(horizon / dt));
}

void validate_config(const SimConfig& cfg, const ModelParams& p) {
    if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) throw std::invalid_argument("dt must be positive");
    if (!(cfg.horizon >= cfg.dt) || !std::isfinite(cfg.horizon)) {
        throw std::invalid_argument("horizon must be at least dt");
    }
    if (cfg.n_paths < 1) throw std::invalid_argument("need at least one path");
    if (cfg.antithetic && cfg.n_paths % 2 != 0) throw std::invalid_argument("antithetic sampling needs an even path count");
    if (cfg.i0 < 0 || cfg.i0 >= p.regimes()) throw std::invalid_argument("initial regime out of range");
    if (!std::isfinite(cfg.x0)) throw std::invalid_argument("initial inventory must be finite");
}

Policy optimal_policy(const RiccatiSolution& sol, const ModelParams& p) {
    return shifted_policy(sol, p, 0.0);
}

Policy shifted_policy(const RiccatiSolution& sol, const ModelParams& p, double shift) {
    Vector slope = -(sol.phi.array() / p.R.array()).matrix();
    Vector intercept = (p.h.array() - sol.psi.array() / p.R.array() + shift).matrix();
    return [slope = std::move(slope), intercept = std::move(intercept)](double x, int i, double) {
        return slope(i) * x + intercept(i);
    };
}

std::vector<ControlledPath> simulate_controlled(const ModelParams& p, const Policy& policy, const SimConfig& cfg) {
    validate_config(cfg, p);
    PathEngine engine(p, cfg, {{&policy, 1}}, cfg.steps());
    std::vector<ControlledPath> paths(cfg.n_paths);
    std::vector<PathOutput> scratch(cfg.n_paths);
    for_each_path(cfg, cfg.n_paths, [&](std::size_t k) { engine.run(k, scratch[k], &paths[k]); });
    return paths;
}

std::vector<ControlledPath> simulate_controlled(const ModelParams& p, const RiccatiSolution& sol,
                                                const SimConfig& cfg) {
    return simulate_controlled(p, optimal_policy(sol, p), cfg);
}

MCEstimate mc_cost(const ModelParams& p, const RiccatiSolution& sol, const SimConfig& cfg) {
    return mc_cost(p, optimal_policy(sol, p), cfg);
}

MCEstimate mc_cost(const ModelParams& p, const Policy& policy, const SimConfig& cfg) {
    return mc_cost_common(p, std::span<const Policy>(&policy, 1), cfg).front();
}

std::vector<MCEstimate> mc_cost_common(const ModelParams& p, std::span<const Policy> policies, const SimConfig& cfg) {
    validate_config(cfg, p);
    if (policies.empty()) throw std::invalid_argument("need at least one policy");
    std::vector<Lane> lanes;
    for (const auto& policy : policies) lanes.push_back({&policy, 1});
    PathEngine engine(p, cfg, std::move(lanes), cfg.steps());
    const auto outputs = run_all(engine, cfg);
    const double horizon = cfg.dt * static_cast<double>(engine.steps());
    std::vector<MCEstimate> out;
    for (std::size_t l = 0; l < policies.size(); ++l) out.push_back(lane_estimate(outputs, l, p, cfg, horizon));
    return out;
}

RichardsonCost mc_cost_richardson(const ModelParams& p, const Policy& policy, const SimConfig& cfg) {
    validate_config(cfg, p);
    if (cfg.steps() % 2 != 0) throw std::invalid_argument("Richardson check needs an even number of steps");
    PathEngine engine(p, cfg, {{&policy, 1}, {&policy, 2}}, cfg.steps());
    const auto outputs = run_all(engine, cfg);
    const double horizon = cfg.dt * static_cast<double>(engine.steps());
    RichardsonCost out;
    out.fine = lane_estimate(outputs, 0, p, cfg, horizon);
    out.coarse = lane_estimate(outputs, 1, p, cfg, horizon);
    out.bias_allowance = std::abs(out.fine.mean - out.coarse.mean);
    return out;
}

std::vector<DecayPoint> asymptotic_decay(const ModelParams& p, const RiccatiSolution& sol, const SimConfig& cfg,
                                         std::span<const double> checkpoints) {
    if (checkpoints.empty()) throw std::invalid_argument("need at least one checkpoint");
    SimConfig run = cfg;
    run.horizon = checkpoints.back();
    validate_config(run, p);
    std::vector<std::size_t> steps;
    double previous = 0.0;
    for (double t : checkpoints) {
        if (!(t > previous)) throw std::invalid_argument("checkpoints must be positive and increasing");
        previous = t;
        steps.push_back(static_cast<std::size_t>(std::llround(t / cfg.dt)));
    }

    const Policy policy = optimal_policy(sol, p);
    PathEngine engine(p, run, {{&policy, 1}}, steps.back(), steps);
    const auto outputs = run_all(engine, run);

    std::vector<DecayPoint> result;
    std::vector<double> xs(outputs.size()), ys(outputs.size());
    for (std::size_t c = 0; c < steps.size(); ++c) {
        for (std::size_t k = 0; k < outputs.size(); ++k) {
            const double x = outputs[k].observed_x[c];
            const int i = outputs[k].observed_regime[c];
            const double y = sol.phi(i) * x + sol.psi(i);
            xs[k] = x * x;
            ys[k] = y * y;
        }
        DecayPoint point;
        point.t = cfg.dt * static_cast<double>(steps[c]);
        const double discount = std::exp(-p.r * point.t);
        const auto mx = moments(xs, run.antithetic);
        const auto my = moments(ys, run.antithetic);
        point.x_moment = discount * mx.mean;
        point.x_std_error = discount * mx.std_error;
        point.y_moment = discount * my.mean;
        point.y_std_error = discount * my.std_error;
        result.push_back(point);
    }
    return result;
}

double adjoint_drift_gap(double x, int i, const RiccatiSolution& sol, const ModelParams& p) {
    const double u = -(sol.phi(i) * x + sol.psi(i)) / p.R(i) + p.h(i);
    double ito = sol.phi(i) * (u - p.theta(i));
    for (int j = 0; j < p.regimes(); ++j) ito += p.gen.rate(i, j) * (sol.phi(j) * x + sol.psi(j));
    const double adjoint = -(p.N(i) * (x - p.c(i)) - p.r * (sol.phi(i) * x + sol.psi(i)));
    return ito - adjoint;
}

double adjoint_residual(const ModelParams& p, const RiccatiSolution& sol,
                        std::span<const std::pair<double, int>> samples) {
    double worst = 0.0;
    for (const auto& [x, i] : samples) {
        if (i < 0 || i >= p.regimes()) throw std::invalid_argument("sample regime out of range");
        worst = std::max(worst, std::abs(adjoint_drift_gap(x, i, sol, p)));
    }
    return worst;
}

} // namespace prodplan
