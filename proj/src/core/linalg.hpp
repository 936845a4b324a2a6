#pragma once

#include "model.hpp"

namespace prodplan {

/// Dense LU solve with partial pivoting. Throws std::runtime_error if the
/// matrix is numerically singular.
Vector solve_dense(const Matrix& a, const Vector& b);

/// Row-wise strict diagonal dominance margins a_ii - sum_{j != i} |a_ij|.
Vector dominance_margins(const Matrix& a);

} // namespace prodplan
