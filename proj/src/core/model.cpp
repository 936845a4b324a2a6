#include "model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace prodplan {

namespace {

constexpr double kDiagonalTolerance = 1e-12;

std::string label(const char* name, int i) {
    return std::string(name) + "(" + std::to_string(i + 1) + ")";
}

} // namespace

Generator::Generator(Matrix rates) : q_(std::move(rates)) {
    if (q_.rows() != q_.cols()) {
        throw std::invalid_argument("generator must be square");
    }
    const auto m = q_.rows();
    mismatch_ = Vector::Zero(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        double off = 0.0;
        for (Eigen::Index j = 0; j < m; ++j) {
            if (j != i) off += q_(i, j);
        }
        // Compare against the row-sum so that NaN input is reported too.
        const double row_sum = q_(i, i) + off;
        mismatch_(i) = std::isfinite(row_sum) ? std::abs(row_sum) : HUGE_VAL;
        q_(i, i) = -off;
    }
}

Generator Generator::uniform(int regimes, double rate) {
    Matrix q = Matrix::Constant(regimes, regimes, rate);
    for (int i = 0; i < regimes; ++i) q(i, i) = -rate * (regimes - 1);
    return Generator(std::move(q));
}

ModelParams ModelParams::benchmark() {
    ModelParams p;
    p.gen = Generator::uniform(2, 1.0);
    p.r = 0.05;
    p.theta = Vector{{4.0, 2.5}};
    p.sigma = Vector{{0.6, 0.8}};
    p.c = Vector{{3.0, 1.5}};
    p.h = Vector{{5.0, 4.0}};
    p.N = Vector{{0.4, 0.3}};
    p.R = Vector{{0.5, 0.4}};
    return p;
}

ValidationReport validate_params(const ModelParams& p, Volatility vol) {
    ValidationReport report;
    auto& v = report.violations;
    const int m = p.regimes();
    if (m < 1) {
        v.emplace_back("m must be at least 1");
        return report;
    }

    const Matrix& q = p.gen.matrix();
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            if (i == j) continue;
            if (!std::isfinite(q(i, j))) {
                v.push_back("generator entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                            ") not finite");
            } else if (q(i, j) < 0.0) {
                v.push_back("generator entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                            ") negative");
            }
        }
        if (p.gen.diagonal_mismatch(i) > kDiagonalTolerance) {
            v.push_back("generator row " + std::to_string(i + 1) + " sum nonzero");
        }
    }

    if (!(p.r > 0.0) || !std::isfinite(p.r)) v.emplace_back("r not positive");

    struct Field {
        const char* name;
        const Vector* values;
        bool positive;
    };
    const Field fields[] = {
        {"theta", &p.theta, false}, {"sigma", &p.sigma, true}, {"c", &p.c, true}, {"h", &p.h, true},
        {"N", &p.N, true},          {"R", &p.R, true},
    };
    for (const auto& f : fields) {
        if (f.values->size() != m) {
            v.push_back(std::string(f.name) + " has length " + std::to_string(f.values->size()) +
                        ", expected " + std::to_string(m));
            continue;
        }
        for (int i = 0; i < m; ++i) {
            const double x = (*f.values)(i);
            if (!std::isfinite(x)) {
                v.push_back(label(f.name, i) + " not finite");
            } else if (f.positive && !(x > 0.0)) {
                if (x == 0.0 && f.values == &p.sigma && vol == Volatility::AllowZero) continue;
                v.push_back(label(f.name, i) + " not positive");
            }
        }
    }
    return report;
}

double discount_lower_bound(const LipschitzConstants& k) {
    return std::max(k.kappa_sigma * k.kappa_sigma - 2.0 * k.kappa_1, k.kappa_Sigma + 2.0 * k.lambda_b);
}

LipschitzConstants lq_constants(const ModelParams& p, const Vector& phi) {
    if (phi.size() != p.regimes() || phi.size() == 0) {
        throw std::invalid_argument("phi must have one entry per regime");
    }
    if ((phi.array() < 0.0).any()) {
        throw std::invalid_argument("phi must be nonnegative");
    }
    LipschitzConstants k;
    k.kappa_1 = phi.minCoeff();
    return k;
}

} // namespace prodplan
