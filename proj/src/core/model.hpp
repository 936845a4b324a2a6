#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace prodplan {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Transition-rate matrix of a finite-state continuous-time Markov chain.
///
/// The diagonal is recomputed on construction as q_ii = -sum_{j != i} q_ij.
/// How far the supplied diagonal was from that value is retained so that
/// validate_params() can flag a generator whose rows did not sum to zero.
class Generator {
public:
    Generator() = default;
    explicit Generator(Matrix rates);

    /// All off-diagonal rates equal to `rate` (m = 2 gives q_12 = q_21 = rate).
    static Generator uniform(int regimes, double rate);

    int size() const { return static_cast<int>(q_.rows()); }
    const Matrix& matrix() const { return q_; }
    double rate(int i, int j) const { return q_(i, j); }
    /// Total jump intensity out of regime i, i.e. -q_ii.
    double exit_rate(int i) const { return -q_(i, i); }
    /// |supplied q_ii - normalized q_ii| for regime i.
    double diagonal_mismatch(int i) const { return mismatch_(i); }

private:
    Matrix q_;
    Vector mismatch_;
};

/// Market and cost parameters of the regime-switching production planning
/// problem. Regimes are 0-based here; file formats and the C API use 1..m.
struct ModelParams {
    Generator gen;
    double r = 0.0;   // discount rate
    Vector theta;     // demand rate
    Vector sigma;     // inventory volatility
    Vector c;         // factory-optimal inventory level
    Vector h;         // factory-optimal production rate
    Vector N;         // inventory-cost weight
    Vector R;         // production-cost weight

    int regimes() const { return gen.size(); }

    /// Two-regime benchmark used throughout the numerical experiments.
    static ModelParams benchmark();
};

struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

/// Zero volatility is outside the model class but harmless to the Riccati
/// system (phi and psi do not depend on sigma) and to the simulator.
enum class Volatility { Positive, AllowZero };

/// Lists every violated parameter invariant; empty iff the parameters are
/// admissible. Pure.
ValidationReport validate_params(const ModelParams& p, Volatility vol = Volatility::Positive);

/// Constants of the Lipschitz/monotonicity assumptions on the forward and
/// backward coefficients.
struct LipschitzConstants {
    double kappa_b = 0.0;
    double kappa_sigma = 0.0;
    double kappa_1 = 0.0;
    double lambda_b = 0.0;
    double kappa_B = 0.0;
    double kappa_Sigma = 0.0;
};

/// Smallest admissible discount rate: (kappa_sigma^2 - 2 kappa_1) v (kappa_Sigma + 2 lambda_b).
/// The requirement is strict, r > discount_lower_bound(k).
double discount_lower_bound(const LipschitzConstants& k);

/// Constants for the closed-loop LQ system: kappa_sigma = 0, kappa_1 = min phi,
/// everything on the backward side zero. Throws std::invalid_argument on a
/// negative or wrongly sized phi.
LipschitzConstants lq_constants(const ModelParams& p, const Vector& phi);

} // namespace prodplan
