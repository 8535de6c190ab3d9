// operators.hpp — Truncated-Fock bosonic ladder operators, atomic projectors and
// transitions, and tensor-product helpers on a declared Hilbert space.
//
// Basis convention (fixed): atomic index major, Fock index minor, i.e. the
// composite index of |atom>|n> is atom*n_fock + n.  Atomic level order is
//   atom_dim = 2 : {|g>, |e>}        (g = 0, e = 1)
//   atom_dim = 3 : {|mu>, |g>, |e>}  (mu = 0, g = 1, e = 2)

#pragma once

#include <complex>
#include <map>
#include <string>

#include <Eigen/Dense>

#include "rabicrit/errors.hpp"

namespace rabicrit {

using Matrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Complex = std::complex<double>;

// --------------------------- Hilbert space ----------------------------------

enum class Level : int { mu = 0, g = 1, e = 2 };

struct HilbertConfig {
    int n_fock = 2;    // Fock truncation (levels |0> .. |n_fock-1>)
    int atom_dim = 2;  // 2: {g,e};  3: {mu,g,e}

    HilbertConfig(int nf, int ad) : n_fock(nf), atom_dim(ad) { validate(); }

    void validate() const {
        if (n_fock < 2)
            throw config_error("HilbertConfig: n_fock must be >= 2, got " +
                               std::to_string(n_fock));
        if (atom_dim != 2 && atom_dim != 3)
            throw config_error("HilbertConfig: atom_dim must be 2 or 3, got " +
                               std::to_string(atom_dim));
    }

    int dim() const { return atom_dim * n_fock; }

    // Row/column of |level>|n> in the composite space.
    int index(Level level, int n) const {
        const int a = atom_index(level);
        if (n < 0 || n >= n_fock)
            throw config_error("HilbertConfig: Fock index out of range");
        return a * n_fock + n;
    }

    int atom_index(Level level) const {
        if (atom_dim == 2) {
            if (level == Level::g) return 0;
            if (level == Level::e) return 1;
            throw config_error("HilbertConfig: |mu> absent in a two-level atom");
        }
        return static_cast<int>(level);
    }

    bool has_mu() const { return atom_dim == 3; }
};

// --------------------------- Tensor product ---------------------------------

// kron(A, B): index ordering (i_A * rows_B + i_B), consistent with |atom>|n>
// when A acts on the atom and B on the Fock factor.
inline Matrix kron(const Matrix& A, const Matrix& B) {
    Matrix K(A.rows() * B.rows(), A.cols() * B.cols());
    for (Eigen::Index i = 0; i < A.rows(); ++i)
        for (Eigen::Index j = 0; j < A.cols(); ++j)
            K.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
    return K;
}

// --------------------------- Bosonic operators ------------------------------

// a|n> = sqrt(n)|n-1> on the truncated space (Fock factor only).
inline Matrix fock_annihilation(int n_fock) {
    if (n_fock < 2) throw config_error("fock_annihilation: n_fock must be >= 2");
    Matrix a = Matrix::Zero(n_fock, n_fock);
    for (int n = 1; n < n_fock; ++n) a(n - 1, n) = std::sqrt(double(n));
    return a;
}

struct FockOps {
    Matrix a;      // annihilation, tensored with the atomic identity
    Matrix a_dag;
    Matrix n_op;   // a_dag * a
};

inline FockOps fock_ops(const HilbertConfig& cfg) {
    cfg.validate();
    const Matrix a1 = fock_annihilation(cfg.n_fock);
    const Matrix Ia = Matrix::Identity(cfg.atom_dim, cfg.atom_dim);
    FockOps ops;
    ops.a = kron(Ia, a1);
    ops.a_dag = ops.a.adjoint();
    ops.n_op = ops.a_dag * ops.a;
    return ops;
}

// --------------------------- Atomic operators -------------------------------

// |to><from| on the atomic factor, tensored with the Fock identity.
inline Matrix atomic_transition(const HilbertConfig& cfg, Level to, Level from) {
    Matrix t = Matrix::Zero(cfg.atom_dim, cfg.atom_dim);
    t(cfg.atom_index(to), cfg.atom_index(from)) = 1.0;
    return kron(t, Matrix::Identity(cfg.n_fock, cfg.n_fock));
}

inline Matrix atomic_projector(const HilbertConfig& cfg, Level level) {
    return atomic_transition(cfg, level, level);
}

// Labeled map: projectors "proj_mu","proj_g","proj_e" and transitions
// "g_e" (=|g><e|), "e_g", "mu_g", "g_mu".  Unknown label -> config_error.
inline std::map<std::string, Matrix> atomic_ops(const HilbertConfig& cfg) {
    std::map<std::string, Matrix> ops;
    ops["proj_g"] = atomic_projector(cfg, Level::g);
    ops["proj_e"] = atomic_projector(cfg, Level::e);
    ops["g_e"] = atomic_transition(cfg, Level::g, Level::e);
    ops["e_g"] = atomic_transition(cfg, Level::e, Level::g);
    if (cfg.has_mu()) {
        ops["proj_mu"] = atomic_projector(cfg, Level::mu);
        ops["mu_g"] = atomic_transition(cfg, Level::mu, Level::g);
        ops["g_mu"] = atomic_transition(cfg, Level::g, Level::mu);
    }
    return ops;
}

inline const Matrix& atomic_op(const std::map<std::string, Matrix>& ops,
                               const std::string& label) {
    auto it = ops.find(label);
    if (it == ops.end())
        throw config_error("atomic_op: unknown label '" + label + "'");
    return it->second;
}

// --------------------------- Predicates -------------------------------------

inline double max_abs(const Matrix& A) {
    return A.cwiseAbs().maxCoeff();
}

// Hermitian within max|A - A^dag| <= tol * max|A|.
inline bool is_hermitian(const Matrix& A, double rel_tol = 1e-12) {
    if (A.rows() != A.cols()) return false;
    const double scale = max_abs(A);
    if (scale == 0.0) return true;
    return max_abs(A - A.adjoint()) <= rel_tol * scale;
}

inline void check_finite(const Matrix& A, const char* who) {
    if (!A.allFinite()) throw numeric_error(std::string(who) + ": NaN/Inf entries");
}

} // namespace rabicrit
