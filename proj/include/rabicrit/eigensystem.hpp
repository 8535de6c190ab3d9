// eigensystem.hpp — Hermitian eigendecomposition with a fixed ordering and
// phase convention, LAPACKE-backed with a real-symmetric fast path.
//
// Conventions:
//   * eigenvalues ascending, ties kept in LAPACK output order;
//   * each eigenvector's largest-magnitude component is made real positive,
//     so repeated runs (and near-degenerate doublets) are reproducible.

#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <complex>
#define LAPACK_COMPLEX_CUSTOM
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "rabicrit/operators.hpp"

namespace rabicrit {

struct EigenSystem {
    RealVector values;  // ascending
    Matrix vectors;     // orthonormal columns, phase-fixed
    bool real_input = false;

    int size() const { return static_cast<int>(values.size()); }
};

namespace detail {

inline void phase_fix_column(Eigen::Ref<Vector> v) {
    Eigen::Index imax = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double m = std::norm(v(i));
        if (m > best) { best = m; imax = i; }
    }
    const Complex z = v(imax);
    const double mag = std::abs(z);
    if (mag > 0.0) v *= std::conj(z) / mag;
}

inline void sign_fix_column(Eigen::Ref<Eigen::VectorXd> v) {
    Eigen::Index imax = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double m = std::abs(v(i));
        if (m > best) { best = m; imax = i; }
    }
    if (v(imax) < 0.0) v = -v;
}

inline bool effectively_real(const Matrix& A) {
    const double scale = max_abs(A);
    if (scale == 0.0) return true;
    return A.imag().cwiseAbs().maxCoeff() <= 1e-14 * scale;
}

inline void require_hermitian(const Matrix& H, const char* who) {
    if (H.rows() != H.cols())
        throw contract_error(std::string(who) + ": matrix not square");
    check_finite(H, who);
    if (!is_hermitian(H))
        throw contract_error(std::string(who) + ": input not Hermitian within 1e-12");
}

// Lowest k eigenpairs of a real symmetric matrix via dsyevr.
inline void dsyevr_lowest(RealMatrix A, int k, RealVector& w, RealMatrix& z) {
    const lapack_int n = static_cast<lapack_int>(A.rows());
    w.resize(k);
    z.resize(n, k);
    lapack_int m = 0;
    std::vector<lapack_int> isuppz(2 * std::max(1, k));
    const lapack_int info = LAPACKE_dsyevr(
        LAPACK_COL_MAJOR, 'V', 'I', 'L', n, A.data(), n, 0.0, 0.0, 1,
        static_cast<lapack_int>(k), 0.0, &m, w.data(), z.data(), n, isuppz.data());
    if (info != 0 || m != k)
        throw numeric_error("dsyevr failed, info=" + std::to_string(info));
}

inline void dsyevd_full(RealMatrix& A, RealVector& w) {
    const lapack_int n = static_cast<lapack_int>(A.rows());
    w.resize(n);
    const lapack_int info =
        LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n, A.data(), n, w.data());
    if (info != 0) throw numeric_error("dsyevd failed, info=" + std::to_string(info));
}

inline void zheevr_lowest(Matrix A, int k, RealVector& w, Matrix& z) {
    const lapack_int n = static_cast<lapack_int>(A.rows());
    w.resize(k);
    z.resize(n, k);
    lapack_int m = 0;
    std::vector<lapack_int> isuppz(2 * std::max(1, k));
    const lapack_int info = LAPACKE_zheevr(
        LAPACK_COL_MAJOR, 'V', 'I', 'L', n, A.data(), n, 0.0, 0.0, 1,
        static_cast<lapack_int>(k), 0.0, &m, w.data(), z.data(), n, isuppz.data());
    if (info != 0 || m != k)
        throw numeric_error("zheevr failed, info=" + std::to_string(info));
}

inline void zheevd_full(Matrix& A, RealVector& w) {
    const lapack_int n = static_cast<lapack_int>(A.rows());
    w.resize(n);
    const lapack_int info =
        LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'L', n, A.data(), n, w.data());
    if (info != 0) throw numeric_error("zheevd failed, info=" + std::to_string(info));
}

} // namespace detail

// Full decomposition.
inline EigenSystem herm_eig(const Matrix& H) {
    detail::require_hermitian(H, "herm_eig");
    EigenSystem sys;
    if (detail::effectively_real(H)) {
        sys.real_input = true;
        RealMatrix A = H.real();
        detail::dsyevd_full(A, sys.values);
        sys.vectors = Matrix(A.rows(), A.cols());
        for (Eigen::Index j = 0; j < A.cols(); ++j) {
            detail::sign_fix_column(A.col(j));
            sys.vectors.col(j) = A.col(j).cast<Complex>();
        }
    } else {
        Matrix A = H;
        detail::zheevd_full(A, sys.values);
        for (Eigen::Index j = 0; j < A.cols(); ++j) detail::phase_fix_column(A.col(j));
        sys.vectors = std::move(A);
    }
    return sys;
}

// Lowest k eigenpairs only (same ordering and phase conventions).
inline EigenSystem herm_eig_lowest(const Matrix& H, int k) {
    detail::require_hermitian(H, "herm_eig_lowest");
    if (k < 1 || k > H.rows())
        throw contract_error("herm_eig_lowest: k out of range");
    EigenSystem sys;
    if (detail::effectively_real(H)) {
        sys.real_input = true;
        RealMatrix z;
        detail::dsyevr_lowest(H.real(), k, sys.values, z);
        sys.vectors = Matrix(z.rows(), z.cols());
        for (Eigen::Index j = 0; j < z.cols(); ++j) {
            detail::sign_fix_column(z.col(j));
            sys.vectors.col(j) = z.col(j).cast<Complex>();
        }
    } else {
        Matrix z;
        detail::zheevr_lowest(H, k, sys.values, z);
        for (Eigen::Index j = 0; j < z.cols(); ++j) detail::phase_fix_column(z.col(j));
        sys.vectors = std::move(z);
    }
    return sys;
}

// Reconstruction residual max_j ||H v_j - w_j v_j|| / ||H||_F, for tests.
inline double eig_residual(const Matrix& H, const EigenSystem& sys) {
    const double hnorm = H.norm();
    double worst = 0.0;
    for (int j = 0; j < sys.size(); ++j) {
        const double r =
            (H * sys.vectors.col(j) - sys.values(j) * sys.vectors.col(j)).norm();
        worst = std::max(worst, r);
    }
    return hnorm > 0 ? worst / hnorm : worst;
}

} // namespace rabicrit
