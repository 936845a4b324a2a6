#pragma once

#include "model.hpp"
#include "riccati.hpp"

#include <vector>

namespace prodplan {

/// Feedback law u = slope(i) x + intercept(i).
struct PolicyCoefficients {
    Vector slope;      // -phi(i)/R(i)
    Vector intercept;  // -psi(i)/R(i) + h(i)
};

PolicyCoefficients policy_coefficients(const RiccatiSolution& sol, const ModelParams& p);

/// H(x,i,u,y,z) = (u - theta(i)) y + sigma(i) z + [N(i)(x - c(i))^2 + R(i)(u - h(i))^2]/2 - r x y.
double hamiltonian(double x, int i, double u, double y, double z, const ModelParams& p);

struct HamiltonianGradient {
    double dx = 0.0;  // N(i)(x - c(i)) - r y
    double du = 0.0;  // y + R(i)(u - h(i))
};

HamiltonianGradient hamiltonian_gradient(double x, int i, double u, double y, const ModelParams& p);

/// argmin_u H(x,i,u,y,z) = h(i) - y/R(i).
double hamiltonian_minimizer(int i, double y, const ModelParams& p);

/// The Hessian of (x, u) -> H is diag(N(i), R(i)); convex iff both are >= 0.
bool convexity_check(int i, double y, double z, const ModelParams& p);

/// u*(x, i) = -(phi(i) x + psi(i))/R(i) + h(i). Negative values mean scrapping.
double feedback_control(double x, int i, const RiccatiSolution& sol, const ModelParams& p);

/// Per-regime integrand g(i) = [N c^2 + phi sigma^2 - psi^2/R + 2 psi (h - theta)](i) / 2
/// whose discounted expectation is the constant part of the value function.
Vector value_constant_integrand(const RiccatiSolution& sol, const ModelParams& p);

/// w = (rI - Q)^{-1} g, the constant part of v(x, i).
Vector value_constant_term(const RiccatiSolution& sol, const ModelParams& p);

/// v(x, i) = phi(i) x^2 / 2 + psi(i) x + w(i).
double value_function(double x, int i, const RiccatiSolution& sol, const ModelParams& p);

struct ValueGrid {
    double x_min = -10.0;
    double x_max = 10.0;
    int points = 401;
};

struct ValueReport {
    Vector quad;                        // phi/2
    Vector lin;                         // psi
    Vector constant;                    // w
    std::vector<double> x;              // grid
    std::vector<std::vector<double>> v; // v[i][k] = v(x[k], i)

    double operator()(double x_value, int i) const {
        return quad(i) * x_value * x_value + lin(i) * x_value + constant(i);
    }
    /// True when every tabulated value is >= 0.
    bool nonnegative() const;
};

ValueReport value_report(const RiccatiSolution& sol, const ModelParams& p, const ValueGrid& grid = {});

} // namespace prodplan
