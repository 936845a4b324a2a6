#include "errors.hpp"
#include "riccati.hpp"

#include "../support/instances.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace prodplan;

namespace {

// Reference values for the benchmark from a 40-digit mpmath solve of the
// same equations (independent of this code base).
const Vector kPhi{{0.40833148442243866, 0.36221726098482512}};
const Vector kPsi{{-0.54891676558189933, -0.23297408371227443}};

double scalar_root(double r, double N, double R) {
    return R * (-r + std::sqrt(r * r + 4.0 * N / R)) / 2.0;
}

double inf_norm(const Vector& v) {
    return v.lpNorm<Eigen::Infinity>();
}

} // namespace

TEST_CASE("ARE residual") {
    const auto p = ModelParams::benchmark();
    CHECK(inf_norm(are_residual(Vector{{0.408, 0.362}}, p)) <= 2e-3);

    const auto unit = testing::scalar_instance(0.0, 1.0, 1.0);
    CHECK(are_residual(Vector::Ones(1), unit)(0) == 0.0);

    const Vector zero_res = are_residual(Vector::Zero(2), p);
    CHECK(zero_res(0) == doctest::Approx(-0.4));
    CHECK(zero_res(1) == doctest::Approx(-0.3));
}

TEST_CASE("Newton solve of the benchmark ARE") {
    const auto p = ModelParams::benchmark();
    const auto are = solve_are(p);
    CHECK(are.residual_norm <= 1e-12);
    CHECK(inf_norm(are.phi - kPhi) < 1e-12);
    CHECK(std::round(are.phi(0) * 1000) / 1000 == doctest::Approx(0.408));
    CHECK(std::round(are.phi(1) * 1000) / 1000 == doctest::Approx(0.362));
    CHECK(are.iterations > 0);
    CHECK(are.iterations < 30);
}

TEST_CASE("Newton solve with faster switching") {
    auto p = ModelParams::benchmark();
    p.gen = Generator::uniform(2, 5.0);
    const auto phi = solve_are(p).phi;
    CHECK(std::abs(phi(0) - 0.392) <= 0.0005 + 1e-12);
    CHECK(std::abs(phi(1) - 0.377) <= 0.0005 + 1e-12);
}

TEST_CASE("scalar ARE matches the closed form") {
    for (double r : {0.01, 0.05, 1.0}) {
        for (double N : {0.1, 1.0, 4.0}) {
            for (double R : {0.2, 1.0, 3.0}) {
                const auto p = testing::scalar_instance(r, N, R);
                const double expected = scalar_root(r, N, R);
                CHECK(solve_are(p).phi(0) == doctest::Approx(expected).epsilon(1e-12));
                CHECK(elimination_solve(p)(0) == doctest::Approx(expected).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("Newton reports non-convergence") {
    const auto p = ModelParams::benchmark();
    SolverOptions opts;
    opts.max_iter = 1;
    try {
        solve_are(p, opts);
        FAIL("expected NonConvergence");
    } catch (const NonConvergence& e) {
        CHECK(e.last_residual() > opts.tol);
    }
    opts.tol = 0.0;
    CHECK_THROWS_AS(solve_are(p, opts), std::invalid_argument);
}

TEST_CASE("psi solve") {
    const auto p = ModelParams::benchmark();
    const Vector psi = solve_psi(kPhi, p);
    CHECK(inf_norm(psi - kPsi) < 1e-12);
    const Vector b = (p.h - p.theta).cwiseProduct(kPhi) - p.N.cwiseProduct(p.c);
    CHECK(inf_norm(psi_residual(kPhi, psi, p)) <= 1e-12 * (1.0 + inf_norm(b)));

    auto flat = p;
    flat.h = flat.theta;
    flat.c = Vector::Zero(2);
    CHECK(inf_norm(solve_psi(kPhi, flat)) == 0.0);

    auto demand = p;
    demand.theta = Vector{{4.0, 1.5}};
    const Vector psi_demand = solve_psi(solve_are(demand).phi, demand);
    CHECK(std::abs(psi_demand(0) - (-0.412)) <= 0.0005 + 1e-12);
    CHECK(std::abs(psi_demand(1) - 0.022) <= 0.0005 + 1e-12);

    CHECK_THROWS_AS(solve_psi(Vector{{0.4, -0.1}}, p), std::invalid_argument);
}

TEST_CASE("full solve bundles diagnostics") {
    const auto p = ModelParams::benchmark();
    const auto sol = solve(p);
    CHECK(inf_norm(sol.phi - kPhi) < 1e-12);
    CHECK(inf_norm(sol.psi - kPsi) < 1e-12);
    CHECK(inf_norm(sol.residual_phi) <= 1e-12);
    CHECK(inf_norm(sol.residual_psi) <= 1e-12);
    CHECK(sol.certificate.min_dominance_margin >= p.r);
}

TEST_CASE("uniqueness certificate") {
    const auto p = ModelParams::benchmark();
    const auto cert = uniqueness_certificate(kPhi, kPhi, p);
    // Margins are 2 phi(i)/R(i) + r: 1.68333 in regime 1, 1.86109 in regime 2.
    CHECK(cert.margins(0) == doctest::Approx(2 * kPhi(0) / 0.5 + 0.05).epsilon(1e-14));
    CHECK(cert.margins(1) == doctest::Approx(2 * kPhi(1) / 0.4 + 0.05).epsilon(1e-14));
    CHECK(cert.min_dominance_margin == doctest::Approx(1.6833259376897546).epsilon(1e-14));
    CHECK(cert.a_phi(0, 1) == -1.0);
    CHECK(cert.a_phi(0, 0) == doctest::Approx(2 * kPhi(0) / 0.5 + 0.05 + 1.0));

    CHECK(uniqueness_certificate(Vector::Zero(2), Vector::Zero(2), p).min_dominance_margin ==
          doctest::Approx(p.r));
    CHECK_THROWS_AS(uniqueness_certificate(Vector{{-1.0, 0.0}}, kPhi, p), std::invalid_argument);

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 4.0);
    for (int trial = 0; trial < 100; ++trial) {
        const auto q = testing::random_instance(rng, 3);
        const Vector a{{u(rng), u(rng), u(rng)}};
        const Vector b{{u(rng), u(rng), u(rng)}};
        CHECK(uniqueness_certificate(a, b, q).min_dominance_margin >= q.r);
    }
}

TEST_CASE("elimination agrees with Newton on the benchmark") {
    const auto p = ModelParams::benchmark();
    const Vector newton = solve_are(p).phi;
    const Vector elim = elimination_solve(p);
    CHECK(inf_norm(newton - elim) <= 1e-9);
    CHECK(inf_norm(are_residual(elim, p)) <= 1e-10);
}

TEST_CASE("elimination agrees with Newton on random instances") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 100; ++trial) {
        const int m = 2 + trial % 2;
        const auto p = testing::random_instance(rng, m);
        const Vector newton = solve_are(p).phi;
        const Vector elim = elimination_solve(p);
        INFO("trial " << trial << " m " << m);
        CHECK(inf_norm(newton - elim) <= 1e-8);
        CHECK((newton.array() >= 0.0).all());
    }
}

TEST_CASE("elimination handles four regimes and enforces its limit") {
    std::mt19937_64 rng(99);
    const auto p = testing::random_instance(rng, 4);
    CHECK(inf_norm(solve_are(p).phi - elimination_solve(p)) <= 1e-8);

    const auto big = testing::random_instance(rng, 5);
    CHECK_THROWS_AS(elimination_solve(big), std::invalid_argument);
    EliminationOptions wide;
    wide.max_regimes = 5;
    CHECK(inf_norm(solve_are(big).phi - elimination_solve(big, wide)) <= 1e-8);
}

TEST_CASE("Newton solution is nonnegative with small residual on random instances") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        const int m = 1 + trial % 6;
        const auto p = testing::random_instance(rng, m);
        const auto are = solve_are(p);
        CHECK((are.phi.array() >= 0.0).all());
        CHECK(inf_norm(are_residual(are.phi, p)) <= 1e-12);
    }
}

TEST_CASE("increasing an inventory weight does not decrease any curvature") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        const int m = 2 + trial % 3;
        auto p = testing::random_instance(rng, m);
        const Vector base = solve_are(p).phi;
        p.N(trial % m) += 0.5;
        const Vector bumped = solve_are(p).phi;
        CHECK(((bumped - base).array() >= -1e-12).all());
    }
}

TEST_CASE("solver is deterministic") {
    std::mt19937_64 rng(8);
    const auto p = testing::random_instance(rng, 3);
    const auto a = solve(p);
    const auto b = solve(p);
    CHECK(a.phi == b.phi);
    CHECK(a.psi == b.psi);
    CHECK(elimination_solve(p) == elimination_solve(p));
}
