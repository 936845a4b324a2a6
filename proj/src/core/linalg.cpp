#include "linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace prodplan {

Vector solve_dense(const Matrix& a, const Vector& b) {
    Eigen::PartialPivLU<Matrix> lu(a);
    if (!(lu.rcond() > 1e-14)) throw std::runtime_error("singular linear system");
    return lu.solve(b);
}

Vector dominance_margins(const Matrix& a) {
    Vector out(a.rows());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        double off = 0.0;
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            if (j != i) off += std::abs(a(i, j));
        }
        out(i) = a(i, i) - off;
    }
    return out;
}

} // namespace prodplan
