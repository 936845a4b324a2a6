#include "riccati.hpp"

#include "errors.hpp"
#include "linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace prodplan {

namespace {

void require_nonnegative(const Vector& phi, const ModelParams& p, const char* name) {
    if (phi.size() != p.regimes()) {
        throw std::invalid_argument(std::string(name) + " must have one entry per regime");
    }
    if ((phi.array() < 0.0).any() || !phi.allFinite()) {
        throw std::invalid_argument(std::string(name) + " must be nonnegative");
    }
}

// sum_{j != i} q_ij
double off_diagonal_sum(const ModelParams& p, int i) {
    return p.gen.exit_rate(i);
}

// Nonnegative root of x^2/R + b x - C = 0 for b >= 0, C >= 0, written without
// the cancellation in (-b + sqrt(b^2 + 4C/R)) R / 2.
double nonnegative_root(double R, double b, double C) {
    C = std::max(C, 0.0);
    return 2.0 * C / (b + std::sqrt(b * b + 4.0 * C / R));
}

class Eliminator {
public:
    explicit Eliminator(const ModelParams& p) : p_(p) {}

    // Solves equations 0..k for coordinates 0..k, holding phi(k+1..m-1) fixed.
    void solve_prefix(int k, Vector& phi) const {
        if (k == 0) {
            phi(0) = coordinate_root(0, phi);
            return;
        }

        auto g = [&](double t) {
            phi(k) = t;
            solve_prefix(k - 1, phi);
            return equation(k, phi);
        };

        // At t = 0 equation k equals -N(k) - sum_j q_kj phi(j) <= 0.
        double lo = 0.0;
        double hi = std::max(1.0, coordinate_root(k, phi));
        int grow = 0;
        while (g(hi) <= 0.0) {
            lo = hi;
            hi *= 2.0;
            if (++grow > 200 || !std::isfinite(hi)) {
                throw BracketFailure("elimination could not bracket coordinate " + std::to_string(k + 1));
            }
        }

        for (int it = 0; it < 400; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            if (g(mid) <= 0.0) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        const double g_lo = std::abs(g(lo));
        const double g_hi = std::abs(g(hi));
        g(g_lo <= g_hi ? lo : hi);
    }

private:
    // Equation i with coordinate i solved for; others read from phi.
    double coordinate_root(int i, const Vector& phi) const {
        double coupling = p_.N(i);
        for (int j = 0; j < p_.regimes(); ++j) {
            if (j != i) coupling += p_.gen.rate(i, j) * phi(j);
        }
        return nonnegative_root(p_.R(i), p_.r + off_diagonal_sum(p_, i), coupling);
    }

    double equation(int i, const Vector& phi) const {
        double value = phi(i) * phi(i) / p_.R(i) + (p_.r + off_diagonal_sum(p_, i)) * phi(i) - p_.N(i);
        for (int j = 0; j < p_.regimes(); ++j) {
            if (j != i) value -= p_.gen.rate(i, j) * phi(j);
        }
        return value;
    }

    const ModelParams& p_;
};

} // namespace

Vector are_residual(const Vector& phi, const ModelParams& p) {
    const Vector quad = phi.array().square() / p.R.array();
    return quad + p.r * phi - p.gen.matrix() * phi - p.N;
}

Vector psi_residual(const Vector& phi, const Vector& psi, const ModelParams& p) {
    const Vector diag = (p.r + phi.array() / p.R.array()).matrix();
    return diag.cwiseProduct(psi) - p.gen.matrix() * psi - (p.h - p.theta).cwiseProduct(phi) + p.N.cwiseProduct(p.c);
}

AreIterate solve_are(const ModelParams& p, const SolverOptions& opts) {
    if (!(opts.tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
    const int m = p.regimes();
    Vector phi = Vector::Zero(m);
    Vector residual = are_residual(phi, p);
    double norm = residual.lpNorm<Eigen::Infinity>();

    for (int it = 0; it < opts.max_iter; ++it) {
        if (norm <= opts.tol) return {phi, it, norm};

        Matrix jac = -p.gen.matrix();
        jac.diagonal() += (2.0 * phi.array() / p.R.array() + p.r).matrix();
        const Vector step = solve_dense(jac, -residual);

        double lambda = 1.0;
        bool accepted = false;
        for (int halving = 0; halving <= 60; ++halving) {
            Vector candidate = (phi + lambda * step).cwiseMax(0.0);
            Vector cand_residual = are_residual(candidate, p);
            const double cand_norm = cand_residual.lpNorm<Eigen::Infinity>();
            if (cand_norm < norm) {
                phi = std::move(candidate);
                residual = std::move(cand_residual);
                norm = cand_norm;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!accepted) {
            throw NonConvergence("Newton step failed to reduce the ARE residual (stagnated at " +
                                     std::to_string(norm) + ")",
                                 it, norm);
        }
    }
    if (norm <= opts.tol) return {phi, opts.max_iter, norm};
    throw NonConvergence("ARE solver exceeded " + std::to_string(opts.max_iter) + " iterations, residual " +
                             std::to_string(norm),
                         opts.max_iter, norm);
}

Matrix psi_matrix(const Vector& phi, const ModelParams& p) {
    // -q_ii = sum_{j != i} q_ij, so -Q already carries that part of the diagonal.
    Matrix b = -p.gen.matrix();
    b.diagonal() += (phi.array() / p.R.array() + p.r).matrix();
    return b;
}

Vector solve_psi(const Vector& phi, const ModelParams& p) {
    require_nonnegative(phi, p, "phi");
    const Vector rhs = (p.h - p.theta).cwiseProduct(phi) - p.N.cwiseProduct(p.c);
    return solve_dense(psi_matrix(phi, p), rhs);
}

DominanceCertificate uniqueness_certificate(const Vector& phi_a, const Vector& phi_b, const ModelParams& p) {
    require_nonnegative(phi_a, p, "phi_a");
    require_nonnegative(phi_b, p, "phi_b");
    DominanceCertificate cert;
    cert.a_phi = -p.gen.matrix();
    for (int i = 0; i < p.regimes(); ++i) {
        cert.a_phi(i, i) = (phi_a(i) + phi_b(i)) / p.R(i) + p.r + off_diagonal_sum(p, i);
    }
    cert.margins = dominance_margins(cert.a_phi);
    cert.min_dominance_margin = cert.margins.minCoeff();
    return cert;
}

RiccatiSolution solve(const ModelParams& p, const SolverOptions& opts) {
    auto are = solve_are(p, opts);
    RiccatiSolution sol;
    sol.phi = std::move(are.phi);
    sol.iterations = are.iterations;
    sol.psi = solve_psi(sol.phi, p);
    sol.residual_phi = are_residual(sol.phi, p);
    sol.residual_psi = psi_residual(sol.phi, sol.psi, p);
    sol.certificate = uniqueness_certificate(sol.phi, sol.phi, p);
    return sol;
}

Vector elimination_solve(const ModelParams& p, const EliminationOptions& opts) {
    const int m = p.regimes();
    if (m < 1) throw std::invalid_argument("need at least one regime");
    if (m > opts.max_regimes) {
        throw std::invalid_argument("elimination solver limited to " + std::to_string(opts.max_regimes) +
                                    " regimes");
    }
    Vector phi = Vector::Zero(m);
    Eliminator(p).solve_prefix(m - 1, phi);
    const double norm = are_residual(phi, p).lpNorm<Eigen::Infinity>();
    if (!(norm <= opts.tol)) {
        throw NonConvergence("elimination residual " + std::to_string(norm) + " above tolerance", 0, norm);
    }
    return phi;
}

} // namespace prodplan
