#pragma once

// Random admissible parameter sets shared by the property tests.

#include "model.hpp"

#include <random>

namespace prodplan::testing {

/// Every rate and weight drawn uniformly from [lo, hi]; theta likewise.
inline ModelParams random_instance(std::mt19937_64& rng, int m, double lo = 0.1, double hi = 5.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    Matrix q = Matrix::Zero(m, m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            if (i != j) q(i, j) = u(rng);
        }
    }
    ModelParams p;
    p.gen = Generator(q);
    p.r = u(rng);
    auto vec = [&] {
        Vector v(m);
        for (int i = 0; i < m; ++i) v(i) = u(rng);
        return v;
    };
    p.theta = vec();
    p.sigma = vec();
    p.c = vec();
    p.h = vec();
    p.N = vec();
    p.R = vec();
    return p;
}

inline ModelParams scalar_instance(double r, double N, double R) {
    ModelParams p;
    p.gen = Generator(Matrix::Zero(1, 1));
    p.r = r;
    p.theta = Vector::Constant(1, 1.0);
    p.sigma = Vector::Constant(1, 0.5);
    p.c = Vector::Constant(1, 2.0);
    p.h = Vector::Constant(1, 3.0);
    p.N = Vector::Constant(1, N);
    p.R = Vector::Constant(1, R);
    return p;
}

} // namespace prodplan::testing
