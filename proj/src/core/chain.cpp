#include "chain.hpp"

#include "linalg.hpp"
#include "rng.hpp"
#include "stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace prodplan {

int RegimePath::state_at(double t) const {
    // Last jump time <= t.
    auto it = std::upper_bound(jump_times.begin(), jump_times.end(), t);
    const auto k = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, (it - jump_times.begin()) - 1));
    return states[k];
}

double RegimePath::occupation_time(int i) const {
    double total = 0.0;
    for (std::size_t k = 0; k < states.size(); ++k) {
        if (states[k] != i) continue;
        const double end = k + 1 < jump_times.size() ? jump_times[k + 1] : horizon;
        total += end - jump_times[k];
    }
    return total;
}

double RegimePath::compensator(const Generator& gen, int i, int j) const {
    return gen.rate(i, j) * occupation_time(i);
}

double RegimePath::discounted_integral(double r, const Vector& g) const {
    double total = 0.0;
    for (std::size_t k = 0; k < states.size(); ++k) {
        const double start = jump_times[k];
        const double end = k + 1 < jump_times.size() ? jump_times[k + 1] : horizon;
        const double weight = r > 0.0 ? (std::exp(-r * start) - std::exp(-r * end)) / r : end - start;
        total += g(states[k]) * weight;
    }
    return total;
}

RegimePath simulate_chain(const Generator& gen, int i0, double horizon, std::mt19937_64& rng) {
    const int m = gen.size();
    if (i0 < 0 || i0 >= m) throw std::invalid_argument("initial regime out of range");
    if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be positive");

    RegimePath path;
    path.horizon = horizon;
    path.jump_counts = decltype(path.jump_counts)::Zero(m, m);
    path.jump_times.push_back(0.0);
    path.states.push_back(i0);

    std::exponential_distribution<double> holding(1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double t = 0.0;
    int state = i0;
    while (true) {
        const double rate = gen.exit_rate(state);
        if (!(rate > 0.0)) break;  // absorbing
        t += holding(rng) / rate;
        if (t >= horizon) break;

        // Destination j != state with probability q_ij / rate.
        const double target = unit(rng) * rate;
        double acc = 0.0;
        int next = -1;
        for (int j = 0; j < m; ++j) {
            if (j == state || gen.rate(state, j) <= 0.0) continue;
            acc += gen.rate(state, j);
            next = j;
            if (target < acc) break;
        }
        path.jump_counts(state, next) += 1;
        path.jump_times.push_back(t);
        path.states.push_back(next);
        state = next;
    }
    return path;
}

RegimePath simulate_chain(const Generator& gen, int i0, double horizon, std::uint64_t seed) {
    auto rng = path_stream(seed, 0, Stream::Chain);
    return simulate_chain(gen, i0, horizon, rng);
}

Vector discounted_resolvent(const Generator& gen, double r, const Vector& g) {
    if (!(r > 0.0)) throw std::invalid_argument("discount rate must be positive");
    if (g.size() != gen.size()) throw std::invalid_argument("functional must have one entry per regime");
    const Matrix a = r * Matrix::Identity(gen.size(), gen.size()) - gen.matrix();
    return solve_dense(a, g);
}

MCEstimate mc_regime_functional(const Generator& gen, double r, const Vector& g, int i0, std::size_t n_paths,
                                double horizon, std::uint64_t seed) {
    if (!(r > 0.0)) throw std::invalid_argument("discount rate must be positive");
    if (n_paths == 0) throw std::invalid_argument("need at least one path");
    std::vector<double> samples(n_paths);
    for (std::size_t k = 0; k < n_paths; ++k) {
        auto rng = path_stream(seed, k, Stream::Chain);
        samples[k] = simulate_chain(gen, i0, horizon, rng).discounted_integral(r, g);
    }
    const auto moments = sample_moments(samples);
    MCEstimate est;
    est.mean = moments.mean;
    est.std_error = moments.std_error;
    est.n = n_paths;
    est.truncation_bound = std::exp(-r * horizon) * g.cwiseAbs().maxCoeff() / r;
    return est;
}

} // namespace prodplan
