#pragma once

#include "model.hpp"

namespace prodplan {

struct SolverOptions {
    double tol = 1e-12;
    int max_iter = 200;
};

/// Strict diagonal dominance evidence for the matrix A_phi that appears when
/// two nonnegative ARE solutions are subtracted (or B_phi when both inputs
/// are the same phi scaled by one half).
struct DominanceCertificate {
    Matrix a_phi;
    Vector margins;
    double min_dominance_margin = 0.0;
};

struct RiccatiSolution {
    Vector phi;           // curvature of the value function per regime, >= 0
    Vector psi;           // slope of the value function per regime
    Vector residual_phi;  // are_residual(phi)
    Vector residual_psi;  // psi_residual(phi, psi)
    int iterations = 0;
    DominanceCertificate certificate;
};

/// Component i: phi(i)^2/R(i) + r phi(i) - sum_j q_ij phi(j) - N(i).
Vector are_residual(const Vector& phi, const ModelParams& p);

/// Component i: (r + phi(i)/R(i)) psi(i) - sum_j q_ij psi(j) - (h(i) - theta(i)) phi(i) + N(i) c(i).
Vector psi_residual(const Vector& phi, const Vector& psi, const ModelParams& p);

struct AreIterate {
    Vector phi;
    int iterations = 0;
    double residual_norm = 0.0;
};

/// Unique nonnegative solution of the coupled ARE by damped Newton from 0.
///
/// The Jacobian diag(2 phi/R + r) - Q is strictly diagonally dominant for
/// phi >= 0, so every step is well defined. Iterates are clamped at zero and
/// a step is halved (up to 60 times) until the residual norm decreases.
/// Throws NonConvergence when max_iter is exhausted before
/// ||are_residual||_inf <= tol.
AreIterate solve_are(const ModelParams& p, const SolverOptions& opts = {});

/// B_phi with B(i,i) = phi(i)/R(i) + r + sum_{j != i} q_ij and B(i,j) = -q_ij.
Matrix psi_matrix(const Vector& phi, const ModelParams& p);

/// Solves B_phi psi = (h - theta) phi - N c. Throws std::invalid_argument for
/// a negative phi.
Vector solve_psi(const Vector& phi, const ModelParams& p);

/// Builds A_phi with diagonal (phi_a(i) + phi_b(i))/R(i) + r + sum_{j != i} q_ij
/// and off-diagonal -q_ij. Its margins are (phi_a(i) + phi_b(i))/R(i) + r.
DominanceCertificate uniqueness_certificate(const Vector& phi_a, const Vector& phi_b, const ModelParams& p);

/// Newton for phi, then psi and the diagnostics.
RiccatiSolution solve(const ModelParams& p, const SolverOptions& opts = {});

struct EliminationOptions {
    double tol = 1e-10;
    int max_regimes = 4;
};

/// Coordinate-by-coordinate elimination solve of the same ARE, used as an
/// oracle for solve_are. It shares no linear algebra with the Newton path.
///
/// For fixed phi(2..m) the first equation is a scalar quadratic with a single
/// nonnegative root. Each further coordinate k is found by bisection on
/// [0, hi], re-solving coordinates 1..k-1 at every trial value, until the
/// last equation is satisfied. Throws BracketFailure if no sign change is
/// found while growing hi, NonConvergence if the final residual exceeds tol.
Vector elimination_solve(const ModelParams& p, const EliminationOptions& opts = {});

} // namespace prodplan
