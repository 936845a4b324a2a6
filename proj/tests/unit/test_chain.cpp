#include "chain.hpp"
#include "policy.hpp"
#include "riccati.hpp"
#include "rng.hpp"

#include "../support/instances.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace prodplan;

TEST_CASE("zero generator never jumps") {
    const Generator gen(Matrix::Zero(1, 1));
    const auto path = simulate_chain(gen, 0, 100.0, std::uint64_t{1});
    CHECK(path.states == std::vector<int>{0});
    CHECK(path.jump_times == std::vector<double>{0.0});
    CHECK(path.jump_counts(0, 0) == 0);
}

TEST_CASE("absorbing regime stops the path") {
    const Generator gen(Matrix{{-2.0, 2.0}, {0.0, 0.0}});
    const auto path = simulate_chain(gen, 0, 1e6, std::uint64_t{4});
    CHECK(path.states.size() == 2);
    CHECK(path.states.back() == 1);
}

TEST_CASE("path structure invariants") {
    std::mt19937_64 rng(21);
    const auto p = testing::random_instance(rng, 4);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto path = simulate_chain(p.gen, static_cast<int>(seed % 4), 25.0, seed);
        REQUIRE(path.jump_times.front() == 0.0);
        CHECK(path.jump_times.back() < path.horizon);
        CHECK(path.jump_times.size() == path.states.size());
        Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic> counts = decltype(counts)::Zero(4, 4);
        for (std::size_t k = 0; k + 1 < path.states.size(); ++k) {
            CHECK(path.jump_times[k] < path.jump_times[k + 1]);
            CHECK(path.states[k] != path.states[k + 1]);
            counts(path.states[k], path.states[k + 1]) += 1;
        }
        CHECK(counts == path.jump_counts);
        CHECK(path.jump_counts.sum() == static_cast<long long>(path.states.size()) - 1);
    }
}

TEST_CASE("same seed reproduces the path bit for bit") {
    const auto gen = ModelParams::benchmark().gen;
    const auto a = simulate_chain(gen, 0, 500.0, std::uint64_t{77});
    const auto b = simulate_chain(gen, 0, 500.0, std::uint64_t{77});
    const auto c = simulate_chain(gen, 0, 500.0, std::uint64_t{78});
    CHECK(a.jump_times == b.jump_times);
    CHECK(a.states == b.states);
    CHECK(a.jump_times != c.jump_times);
}

TEST_CASE("holding times of a symmetric unit-rate chain have mean 1") {
    const auto gen = Generator::uniform(2, 1.0);
    std::vector<double> holds;
    for (std::uint64_t k = 0; k < 10000; ++k) {
        auto rng = path_stream(5, k, Stream::Chain);
        const auto path = simulate_chain(gen, 0, 50.0, rng);
        // First holding time is complete whenever a jump happened.
        if (path.jump_times.size() > 1) holds.push_back(path.jump_times[1]);
    }
    double mean = 0.0;
    for (double h : holds) mean += h;
    mean /= static_cast<double>(holds.size());
    const double se = 1.0 / std::sqrt(static_cast<double>(holds.size()));  // Exp(1) has unit variance
    CHECK(std::abs(mean - 1.0) <= 3.0 * se);
}

TEST_CASE("long-run occupation of a symmetric chain is one half") {
    const auto gen = Generator::uniform(2, 1.0);
    std::vector<double> fractions;
    for (std::uint64_t k = 0; k < 2000; ++k) {
        auto rng = path_stream(6, k, Stream::Chain);
        fractions.push_back(simulate_chain(gen, 0, 100.0, rng).occupation_time(0) / 100.0);
    }
    double mean = 0.0;
    for (double f : fractions) mean += f;
    mean /= static_cast<double>(fractions.size());
    double var = 0.0;
    for (double f : fractions) var += (f - mean) * (f - mean);
    const double se = std::sqrt(var / static_cast<double>(fractions.size() - 1) / static_cast<double>(fractions.size()));
    // Starting in regime 1 adds (1 - e^{-2T}) / (4T) to the stationary 1/2.
    const double expected = 0.5 + (1.0 - std::exp(-200.0)) / 400.0;
    CHECK(std::abs(mean - expected) <= 3.0 * se);
}

TEST_CASE("jump counts minus compensator have mean zero") {
    const auto gen = Generator(Matrix{{-1.5, 1.0, 0.5}, {0.2, -0.2, 0.0}, {2.0, 1.0, -3.0}});
    const int n = 4000;
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(3, 3), sum_sq = Eigen::MatrixXd::Zero(3, 3);
    for (int k = 0; k < n; ++k) {
        auto rng = path_stream(9, static_cast<std::uint64_t>(k), Stream::Chain);
        const auto path = simulate_chain(gen, 0, 10.0, rng);
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                if (i == j) continue;
                const double m = static_cast<double>(path.jump_counts(i, j)) - path.compensator(gen, i, j);
                sum(i, j) += m;
                sum_sq(i, j) += m * m;
            }
        }
    }
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            if (i == j || gen.rate(i, j) == 0.0) continue;
            const double mean = sum(i, j) / n;
            const double se = std::sqrt((sum_sq(i, j) / n - mean * mean) / n);
            INFO("pair " << i << "," << j);
            CHECK(std::abs(mean) <= 3.5 * se);
        }
    }
}

TEST_CASE("resolvent of simple functionals") {
    const auto gen = ModelParams::benchmark().gen;
    const Vector w = discounted_resolvent(gen, 0.05, Vector::Constant(2, 3.0));
    CHECK(w(0) == doctest::Approx(60.0));
    CHECK(w(1) == doctest::Approx(60.0));

    const Generator frozen(Matrix::Zero(3, 3));
    const Vector g{{1.0, -2.0, 4.0}};
    const Vector wf = discounted_resolvent(frozen, 0.5, g);
    CHECK(wf(0) == doctest::Approx(2.0));
    CHECK(wf(1) == doctest::Approx(-4.0));
    CHECK(wf(2) == doctest::Approx(8.0));

    CHECK_THROWS_AS(discounted_resolvent(gen, 0.0, Vector::Ones(2)), std::invalid_argument);
}

TEST_CASE("resolvent residual and monotonicity on random instances") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(-5.0, 5.0), pos(0.0, 2.0);
    for (int trial = 0; trial < 200; ++trial) {
        const int m = 1 + trial % 5;
        const auto p = testing::random_instance(rng, m);
        Vector g(m), bump(m);
        for (int i = 0; i < m; ++i) {
            g(i) = u(rng);
            bump(i) = pos(rng);
        }
        const Vector w = discounted_resolvent(p.gen, p.r, g);
        const Matrix a = p.r * Matrix::Identity(m, m) - p.gen.matrix();
        CHECK((a * w - g).lpNorm<Eigen::Infinity>() <= 1e-10 * (1.0 + g.lpNorm<Eigen::Infinity>()));
        const Vector w_up = discounted_resolvent(p.gen, p.r, g + bump);
        CHECK(((w_up - w).array() >= -1e-12).all());
    }
}

TEST_CASE("resolvent matches a Monte Carlo estimate over chain paths") {
    const auto p = ModelParams::benchmark();
    const auto sol = solve(p);
    const Vector g = value_constant_integrand(sol, p);
    const Vector w = discounted_resolvent(p.gen, p.r, g);
    // e^{-rT} max|g| / r < 1e-6 * w requires T > 20 * ln(...); T = 400 gives ~4e-8.
    for (int i0 = 0; i0 < 2; ++i0) {
        const auto est = mc_regime_functional(p.gen, p.r, g, i0, 20000, 400.0, 31);
        CHECK(est.truncation_bound < 1e-6 * std::abs(w(i0)));
        CHECK(std::abs(est.mean - w(i0)) <= 3.0 * est.std_error + est.truncation_bound);
    }
}
