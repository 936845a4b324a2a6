#include "policy.hpp"

#include "chain.hpp"

#include <stdexcept>

namespace prodplan {

PolicyCoefficients policy_coefficients(const RiccatiSolution& sol, const ModelParams& p) {
    PolicyCoefficients out;
    out.slope = -(sol.phi.array() / p.R.array()).matrix();
    out.intercept = (p.h.array() - sol.psi.array() / p.R.array()).matrix();
    return out;
}

double hamiltonian(double x, int i, double u, double y, double z, const ModelParams& p) {
    const double dx = x - p.c(i);
    const double du = u - p.h(i);
    return (u - p.theta(i)) * y + p.sigma(i) * z + 0.5 * (p.N(i) * dx * dx + p.R(i) * du * du) - p.r * x * y;
}

HamiltonianGradient hamiltonian_gradient(double x, int i, double u, double y, const ModelParams& p) {
    return {p.N(i) * (x - p.c(i)) - p.r * y, y + p.R(i) * (u - p.h(i))};
}

double hamiltonian_minimizer(int i, double y, const ModelParams& p) {
    return p.h(i) - y / p.R(i);
}

bool convexity_check(int i, double /*y*/, double /*z*/, const ModelParams& p) {
    return p.N(i) >= 0.0 && p.R(i) >= 0.0;
}

double feedback_control(double x, int i, const RiccatiSolution& sol, const ModelParams& p) {
    return -(sol.phi(i) * x + sol.psi(i)) / p.R(i) + p.h(i);
}

Vector value_constant_integrand(const RiccatiSolution& sol, const ModelParams& p) {
    const auto& phi = sol.phi.array();
    const auto& psi = sol.psi.array();
    return (0.5 * (p.N.array() * p.c.array().square() + phi * p.sigma.array().square() -
                   psi.square() / p.R.array() + 2.0 * psi * (p.h.array() - p.theta.array())))
        .matrix();
}

Vector value_constant_term(const RiccatiSolution& sol, const ModelParams& p) {
    return discounted_resolvent(p.gen, p.r, value_constant_integrand(sol, p));
}

double value_function(double x, int i, const RiccatiSolution& sol, const ModelParams& p) {
    const Vector w = value_constant_term(sol, p);
    return 0.5 * sol.phi(i) * x * x + sol.psi(i) * x + w(i);
}

bool ValueReport::nonnegative() const {
    for (const auto& row : v) {
        for (double value : row) {
            if (value < 0.0) return false;
        }
    }
    return true;
}

ValueReport value_report(const RiccatiSolution& sol, const ModelParams& p, const ValueGrid& grid) {
    if (grid.points < 2 || !(grid.x_max > grid.x_min)) throw std::invalid_argument("invalid value grid");
    ValueReport report;
    report.quad = 0.5 * sol.phi;
    report.lin = sol.psi;
    report.constant = value_constant_term(sol, p);
    report.x.resize(static_cast<std::size_t>(grid.points));
    const double step = (grid.x_max - grid.x_min) / (grid.points - 1);
    for (int k = 0; k < grid.points; ++k) report.x[static_cast<std::size_t>(k)] = grid.x_min + step * k;
    report.v.assign(static_cast<std::size_t>(p.regimes()), std::vector<double>(report.x.size()));
    for (int i = 0; i < p.regimes(); ++i) {
        for (std::size_t k = 0; k < report.x.size(); ++k) report.v[static_cast<std::size_t>(i)][k] = report(report.x[k], i);
    }
    return report;
}

} // namespace prodplan
