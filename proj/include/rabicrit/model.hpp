// model.hpp — The Rabi Hamiltonian, its three-level extension, the two-tone
// drive term, and spectral observables of the ground state.

#pragma once

#include <cmath>
#include <functional>
#include <string>

#include "rabicrit/critical.hpp"
#include "rabicrit/eigensystem.hpp"
#include "rabicrit/operators.hpp"

namespace rabicrit {

// ------------------------------ Parameters -----------------------------------

struct ModelParams {
    double omega = 1.0;    // cavity frequency (unit of energy)
    double Omega = 1.0;    // atomic transition frequency
    double g = 0.0;        // coupling strength
    double omega_mu = 0.0; // third-level frequency, < 0; used by build_H0 only

    static ModelParams from_gc(double g_c, double freq_ratio, double omega = 1.0) {
        if (!(g_c >= 0.0)) throw config_error("ModelParams: g_c must be >= 0");
        if (!(freq_ratio > 0.0)) throw config_error("ModelParams: ratio must be > 0");
        ModelParams p;
        p.omega = omega;
        p.Omega = freq_ratio * omega;
        p.g = 0.5 * g_c * std::sqrt(p.omega * p.Omega);
        return p;
    }

    double g_c() const { return 2.0 * g / std::sqrt(omega * Omega); }
    double freq_ratio() const { return Omega / omega; }

    void validate() const {
        if (!(omega > 0.0) || !(Omega > 0.0) || !(g >= 0.0))
            throw config_error("ModelParams: need omega > 0, Omega > 0, g >= 0");
    }

    void validate_three_level() const {
        validate();
        if (!(omega_mu < 0.0) || std::abs(omega_mu) < 3.0 * omega)
            throw config_error(
                "ModelParams: omega_mu must be negative with |omega_mu| >= 3 omega, got " +
                std::to_string(omega_mu));
    }
};

// --------------------------- Fock truncation policy --------------------------

// Truncation that comfortably contains the asymptotic ground-state occupation
// of either branch.  Away from the critical window the flat default applies.
inline int recommended_nfock(double g_c, double freq_ratio) {
    constexpr int base = 128;
    if (std::abs(g_c - 1.0) >= 1e-2 && g_c < 1.0) return base;
    if (g_c >= 1.0 && std::abs(g_c - 1.0) < 1e-12) {
        // critical point: occupation saturates at the finite-frequency scale
        const double sat = 0.5 * std::cbrt(freq_ratio);
        return std::max<int>(base, int(4.0 * (sat + 10.0)));
    }
    const PhasePoint pt(g_c, freq_ratio);
    if (pt.phase() == Phase::NP) {
        const double occ = std::pow(std::sinh(pt.r_np()), 2);
        return std::max<int>(base, int(std::ceil(4.0 * (occ + 10.0))));
    }
    const double a2 = pt.alpha() * pt.alpha();
    const double sq = std::pow(std::sinh(pt.r_sp()), 2);
    // displaced mean alpha^2 plus a stretched-tail margin
    const double need =
        a2 + 8.0 * std::exp(pt.r_sp()) * std::sqrt(a2 + 1.0) + 4.0 * sq + 40.0;
    return std::max<int>(base, int(std::ceil(need)));
}

// ------------------------------ Hamiltonians ----------------------------------

// H_R = omega a^dag a (|e><e| + |g><g|) + Omega |e><e|
//       - g (a + a^dag)(|g><e| + |e><g|)
// The cavity term deliberately excludes the |mu> sector.
inline Matrix build_HR(const ModelParams& p, const HilbertConfig& cfg) {
    p.validate();
    const Matrix n1 = Matrix(fock_annihilation(cfg.n_fock).adjoint() *
                             fock_annihilation(cfg.n_fock));
    const Matrix x1 = fock_annihilation(cfg.n_fock) +
                      Matrix(fock_annihilation(cfg.n_fock).adjoint());
    Matrix proj_ge = Matrix::Zero(cfg.atom_dim, cfg.atom_dim);
    proj_ge(cfg.atom_index(Level::g), cfg.atom_index(Level::g)) = 1.0;
    proj_ge(cfg.atom_index(Level::e), cfg.atom_index(Level::e)) = 1.0;
    Matrix proj_e = Matrix::Zero(cfg.atom_dim, cfg.atom_dim);
    proj_e(cfg.atom_index(Level::e), cfg.atom_index(Level::e)) = 1.0;
    Matrix sx = Matrix::Zero(cfg.atom_dim, cfg.atom_dim);
    sx(cfg.atom_index(Level::g), cfg.atom_index(Level::e)) = 1.0;
    sx(cfg.atom_index(Level::e), cfg.atom_index(Level::g)) = 1.0;
    const Matrix If = Matrix::Identity(cfg.n_fock, cfg.n_fock);
    return p.omega * kron(proj_ge, n1) + p.Omega * kron(proj_e, If) -
           p.g * kron(sx, x1);
}

// H_0 = H_R + omega_mu |mu><mu| + omega a^dag a |mu><mu|.  The |mu> sector
// commutes with everything else: eigenpairs split into |mu_n> = |n>|mu> at
// n omega + omega_mu and the H_R eigenpairs.
inline Matrix build_H0(const ModelParams& p, const HilbertConfig& cfg) {
    if (!cfg.has_mu())
        throw config_error("build_H0: needs a three-level atom (atom_dim = 3)");
    p.validate_three_level();
    const Matrix a1 = fock_annihilation(cfg.n_fock);
    const Matrix n1 = Matrix(a1.adjoint() * a1);
    Matrix proj_mu = Matrix::Zero(cfg.atom_dim, cfg.atom_dim);
    proj_mu(cfg.atom_index(Level::mu), cfg.atom_index(Level::mu)) = 1.0;
    const Matrix If = Matrix::Identity(cfg.n_fock, cfg.n_fock);
    return build_HR(p, cfg) + p.omega_mu * kron(proj_mu, If) +
           p.omega * kron(proj_mu, n1);
}

// ------------------------------ Drive term ------------------------------------

struct DriveSpec {
    double Omega_p = 0.0;  // pump amplitude
    double Omega_s = 0.0;  // Stokes amplitude
    double omega_p = 0.0;  // pump frequency
    double omega_s = 0.0;  // Stokes frequency
    int l = 1;             // target photon number is 2l
    int n_d = 3;           // detuning selector, n_d >= l
    bool weak_drive = false;

    // Resonant spec: omega_p = E0 - omega_mu, omega_s = omega_p - 2 l omega.
    static DriveSpec resonant(double E0, double omega_mu, int l, int n_d,
                              double Omega_p, double Omega_s, double gap_E2_E0) {
        DriveSpec d;
        d.l = l;
        d.n_d = n_d;
        auto [wp, ws] = drive_frequencies(E0, omega_mu, l);
        d.omega_p = wp;
        d.omega_s = ws;
        d.Omega_p = Omega_p;
        d.Omega_s = Omega_s;
        d.weak_drive = (Omega_p < 0.1 * gap_E2_E0) && (Omega_s < 0.1 * gap_E2_E0);
        return d;
    }

    double envelope(double t) const {
        return Omega_p * std::cos(omega_p * t) + Omega_s * std::cos(omega_s * t);
    }
};

// Time-dependent handle H_D(t) = envelope(t) * (|mu><g| + |g><mu|) ⊗ I.
struct DriveTerm {
    DriveSpec spec;
    Matrix coupling;  // (|mu><g| + |g><mu|) ⊗ I_fock

    Matrix at(double t) const { return spec.envelope(t) * coupling; }
};

inline DriveTerm build_HD(const DriveSpec& spec, const HilbertConfig& cfg) {
    if (!cfg.has_mu())
        throw config_error("build_HD: needs a three-level atom (atom_dim = 3)");
    DriveTerm term;
    term.spec = spec;
    term.coupling = atomic_transition(cfg, Level::mu, Level::g) +
                    atomic_transition(cfg, Level::g, Level::mu);
    return term;
}

// --------------------------- Ground-state observables -------------------------

namespace detail {

inline bool rel_close(double a, double b, double rtol, double atol = 1e-12) {
    return std::abs(a - b) <= std::max(rtol * std::max(std::abs(a), std::abs(b)), atol);
}

// Lowest eigenvector of H_R on a 2-level space with n_fock levels.
inline std::pair<double, Vector> ground_state_HR(const ModelParams& p, int n_fock) {
    const HilbertConfig cfg(n_fock, 2);
    const EigenSystem sys = herm_eig_lowest(build_HR(p, cfg), 1);
    return {sys.values(0), sys.vectors.col(0)};
}

inline double nbar_of_ground(const ModelParams& p, int n_fock) {
    auto [E0, v] = ground_state_HR(p, n_fock);
    const HilbertConfig cfg(n_fock, 2);
    const FockOps ops = fock_ops(cfg);
    return std::real(Complex(v.adjoint() * ops.n_op * v));
}

} // namespace detail

// nbar0 = <E0| a^dag a |E0> from the lowest numerical eigenstate of H_R.
// check_truncation reruns at n_fock + 32 and demands relative agreement 1e-6.
inline double nbar0(const ModelParams& p, const HilbertConfig& cfg,
                    bool check_truncation = true) {
    const double val = detail::nbar_of_ground(p, cfg.n_fock);
    if (check_truncation) {
        const double probe = detail::nbar_of_ground(p, cfg.n_fock + 32);
        if (!detail::rel_close(val, probe, 1e-6, 1e-9))
            throw truncation_error(
                "nbar0: not converged at n_fock=" + std::to_string(cfg.n_fock) +
                " (" + std::to_string(val) + " vs " + std::to_string(probe) +
                " at +32)");
    }
    return val;
}

// Central finite-difference derivative of nbar0 with respect to g_c at fixed
// ratio.  A window straddling g_c = 1 is reported one-sided instead.
struct NbarDerivative {
    double value = std::numeric_limits<double>::quiet_NaN();  // central
    bool straddles = false;
    double left = 0.0;   // backward difference, NP side
    double right = 0.0;  // forward difference, SP side
};

inline NbarDerivative dnbar0_dgc(const ModelParams& p, const HilbertConfig& cfg,
                                 double delta, bool check_truncation = false) {
    if (!(delta >= 1e-5 && delta <= 1e-2))
        throw contract_error("dnbar0_dgc: delta must lie in [1e-5, 1e-2]");
    const double gc = p.g_c();
    const double ratio = p.freq_ratio();
    auto nb = [&](double g) {
        return nbar0(ModelParams::from_gc(g, ratio, p.omega), cfg, check_truncation);
    };
    NbarDerivative out;
    const double lo = gc - delta, hi = gc + delta;
    if (lo < 1.0 && hi > 1.0) {
        out.straddles = true;
        const double mid = nb(gc);
        out.left = (mid - nb(lo)) / delta;
        out.right = (nb(hi) - mid) / delta;
        return out;
    }
    out.value = (nb(hi) - nb(std::max(lo, 0.0))) / (hi - std::max(lo, 0.0));
    return out;
}

// c_k = <g,k|E0>, phase-fixed lowest eigenvector of H_R.
inline Complex ck_numeric(const ModelParams& p, const HilbertConfig& cfg, int k) {
    if (k < 0 || k >= cfg.n_fock)
        throw contract_error("ck_numeric: k outside the Fock truncation");
    auto [E0, v] = detail::ground_state_HR(p, cfg.n_fock);
    const HilbertConfig flat(cfg.n_fock, 2);
    return v(flat.index(Level::g, k));
}

} // namespace rabicrit
