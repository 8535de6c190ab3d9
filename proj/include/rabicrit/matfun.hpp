// matfun.hpp — Dense matrix exponential and the squeeze/displacement unitaries
// built from it.

#pragma once

#include <cmath>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

#include "rabicrit/operators.hpp"

namespace rabicrit {

// Scaling-and-squaring (Pade) exponential.  For anti-Hermitian input the
// result is unitary to ~1e-10 in the spectral norm.
inline Matrix mat_exp(const Matrix& A) {
    if (A.rows() != A.cols()) throw contract_error("mat_exp: matrix not square");
    check_finite(A, "mat_exp");
    return A.exp();
}

// S(r) = exp[(r/2)(a^dag^2 - a^2)] on the Fock factor (tensored with the
// atomic identity when cfg.atom_dim > 1 is not desired -- this acts on the
// bare Fock space; callers embed it as needed).
//
// Truncation guard: sinh^2(r) must sit well inside n_fock.
inline Matrix squeeze_op(double r, int n_fock) {
    if (!std::isfinite(r)) throw numeric_error("squeeze_op: non-finite r");
    const double occupancy = std::sinh(r) * std::sinh(r);
    if (occupancy + 6.0 * std::sqrt(occupancy + 1.0) + 4.0 > n_fock)
        throw truncation_error("squeeze_op: n_fock=" + std::to_string(n_fock) +
                               " too small for r=" + std::to_string(r));
    const Matrix a = fock_annihilation(n_fock);
    const Matrix gen = 0.5 * r * (Matrix(a.adjoint() * a.adjoint()) - Matrix(a * a));
    return mat_exp(gen);
}

// D(alpha) = exp[alpha (a^dag - a)], real displacement.
inline Matrix displace_op(double alpha, int n_fock) {
    if (!std::isfinite(alpha)) throw numeric_error("displace_op: non-finite alpha");
    if (alpha * alpha + 5.0 * std::abs(alpha) >= n_fock)
        throw truncation_error("displace_op: n_fock=" + std::to_string(n_fock) +
                               " too small for alpha=" + std::to_string(alpha));
    const Matrix a = fock_annihilation(n_fock);
    const Matrix gen = alpha * (Matrix(a.adjoint()) - a);
    return mat_exp(gen);
}

// ||U^dag U - I||_oo, for unitarity checks in tests.
inline double unitarity_defect(const Matrix& U) {
    return max_abs(Matrix(U.adjoint() * U) -
                   Matrix::Identity(U.rows(), U.cols()));
}

} // namespace rabicrit
