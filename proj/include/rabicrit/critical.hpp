// critical.hpp — Closed-form quantities of the normal (NP) and superradiant
// (SP) phases of the Rabi model, drive calibration formulas, and the
// three-state Raman reduction of the driven dynamics.
//
// Units: omega = 1 throughout; energies and rates are in units of omega.

#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <utility>

#include "rabicrit/hermite.hpp"
#include "rabicrit/operators.hpp"

namespace rabicrit {

enum class Phase { NP, SP, CRITICAL };

inline const char* phase_name(Phase p) {
    switch (p) {
        case Phase::NP: return "NP";
        case Phase::SP: return "SP";
        default: return "CRITICAL";
    }
}

// ------------------------------ PhasePoint ----------------------------------

// g_c < 1: squeezed-vacuum branch with squeezing r_np and excitation energy
// eps_np = sqrt(1 - g_c^2).  g_c > 1: displaced branch with displacement
// alpha = (1/2) sqrt(ratio (g_c^2 - g_c^-2)), squeezing r_sp and excitation
// energy eps_sp = sqrt(1 - g_c^-4).  Wrong-branch access throws.
class PhasePoint {
public:
    PhasePoint(double g_c, double freq_ratio)
        : g_c_(g_c), ratio_(freq_ratio) {
        if (!(g_c >= 0.0)) throw std::domain_error("PhasePoint: g_c must be >= 0");
        if (!(freq_ratio > 0.0))
            throw std::domain_error("PhasePoint: freq ratio must be > 0");
        if (std::abs(g_c - 1.0) < 1e-12) {
            phase_ = Phase::CRITICAL;
        } else if (g_c < 1.0) {
            phase_ = Phase::NP;
            r_np_ = -0.25 * std::log1p(-g_c * g_c);
            eps_np_ = std::sqrt(1.0 - g_c * g_c);
        } else {
            phase_ = Phase::SP;
            const double gm4 = std::pow(g_c, -4.0);
            r_sp_ = -0.25 * std::log1p(-gm4);
            eps_sp_ = std::sqrt(1.0 - gm4);
            alpha_ = 0.5 * std::sqrt(freq_ratio * (g_c * g_c - 1.0 / (g_c * g_c)));
        }
    }

    double g_c() const { return g_c_; }
    double freq_ratio() const { return ratio_; }
    Phase phase() const { return phase_; }

    double r_np() const { require(Phase::NP, "r_np"); return r_np_; }
    double eps_np() const { require(Phase::NP, "eps_np"); return eps_np_; }
    double r_sp() const { require(Phase::SP, "r_sp"); return r_sp_; }
    double eps_sp() const { require(Phase::SP, "eps_sp"); return eps_sp_; }
    double alpha() const { require(Phase::SP, "alpha"); return alpha_; }

    // Excitation energy of whichever branch applies (0 at the critical point).
    double excitation_energy() const {
        if (phase_ == Phase::NP) return eps_np_;
        if (phase_ == Phase::SP) return eps_sp_;
        return 0.0;
    }

private:
    void require(Phase p, const char* what) const {
        if (phase_ != p)
            throw contract_error(std::string(what) + " undefined in phase " +
                                 phase_name(phase_));
    }

    double g_c_, ratio_;
    Phase phase_;
    double r_np_ = 0, eps_np_ = 0, r_sp_ = 0, eps_sp_ = 0, alpha_ = 0;
};

inline PhasePoint critical_quantities(double g_c, double freq_ratio) {
    return PhasePoint(g_c, freq_ratio);
}

// ------------------------- Closed-form amplitudes ----------------------------

// |c_2k| of the asymptotic ground state, evaluated in log-magnitude space.
//
//   NP: |(-tanh r)^k sqrt((2k)!) / (2^k k! sqrt(cosh r))|
//   SP: |tanh^k(r) exp[-(alpha^2/2)(1+tanh r)] / (2^k sqrt((2k)! cosh r))
//        * H_{2k}(alpha e^r / sqrt(sinh 2r))|
inline LogScaled c2k_closed_log(int k, const PhasePoint& point) {
    if (k < 0) throw contract_error("c2k_closed: k must be >= 0");
    if (point.phase() == Phase::CRITICAL)
        throw contract_error("c2k_closed: undefined at the critical point");
    const double ln2 = std::log(2.0);
    LogScaled out;
    if (point.phase() == Phase::NP) {
        const double r = point.r_np();
        if (k > 0 && r == 0.0) return out;  // zero
        out.sign = 1;
        out.log_abs = -0.5 * std::log(std::cosh(r));
        if (k > 0)
            out.log_abs += k * std::log(std::tanh(r)) + 0.5 * log_factorial(2 * k) -
                           k * ln2 - log_factorial(k);
    } else {
        const double r = point.r_sp();
        const double alpha = point.alpha();
        const double x = alpha * std::exp(r) / std::sqrt(std::sinh(2.0 * r));
        const LogScaled h = hermite_log(2 * k, x);
        if (h.sign == 0) return out;  // zero of the Hermite polynomial
        out.sign = 1;
        out.log_abs = k * std::log(std::tanh(r)) -
                      0.5 * alpha * alpha * (1.0 + std::tanh(r)) - k * ln2 -
                      0.5 * (log_factorial(2 * k) + std::log(std::cosh(r))) +
                      h.log_abs;
    }
    return out;
}

// Magnitude; underflows cleanly to 0 deep in the SP.
inline double c2k_closed(int k, const PhasePoint& point) {
    return std::abs(c2k_closed_log(k, point).value());
}

// --------------------------- Drive calibration -------------------------------

// omega_mu = E0 - [2(n_d - l) + 0.25] omega.  Places |mu_2l> below |E0> and
// keeps |mu> off-resonant from the cavity.
inline double omega_mu_of(double E0, int n_d, int l) {
    if (l < 1) throw std::domain_error("omega_mu_of: l must be >= 1");
    if (n_d < l) throw std::domain_error("omega_mu_of: requires n_d >= l");
    return E0 - (2.0 * (n_d - l) + 0.25);
}

// omega_p = E0 - omega_mu, omega_s = omega_p - 2 l omega; both must be > 0.
inline std::pair<double, double> drive_frequencies(double E0, double omega_mu,
                                                   int l) {
    if (!(E0 > omega_mu))
        throw config_error("drive_frequencies: requires E0 > omega_mu");
    const double omega_p = E0 - omega_mu;
    const double omega_s = omega_p - 2.0 * l;
    if (!(omega_p > 0.0) || !(omega_s > 0.0))
        throw config_error("drive_frequencies: nonpositive drive frequency");
    return {omega_p, omega_s};
}

// --------------------------- Raman three-state model -------------------------

struct RamanTriple {
    Complex c0;        // <g,0|E0>
    Complex c2l;       // <g,2l|E0>
    double Omega_p = 0;
    double Omega_s = 0;
    bool weak_drive = true;

    // Xi^2 = (1/4)[(|c0| Omega_p)^2 + (|c2l| Omega_s)^2]
    double xi() const {
        const double a = std::abs(c0) * Omega_p;
        const double b = std::abs(c2l) * Omega_s;
        return 0.5 * std::hypot(a, b);
    }
};

inline constexpr double default_time_cap = 1e6;  // units of 1/omega

// P_2l(t) = (c0 Omega_p c2l Omega_s / (4 Xi^2)) [cos(Xi t) - 1], using
// amplitude magnitudes.  Xi = 0 gives the limit P = 0.
inline Complex p2l_analytic(const RamanTriple& triple, double t) {
    if (t < 0) throw contract_error("p2l_analytic: t must be >= 0");
    const double xi = triple.xi();
    if (xi == 0.0) return Complex(0.0, 0.0);
    const double a = std::abs(triple.c0) * triple.Omega_p;
    const double b = std::abs(triple.c2l) * triple.Omega_s;
    const double p = a * b / (4.0 * xi * xi) * (std::cos(xi * t) - 1.0);
    return Complex(p, 0.0);
}

// Peak photon-number estimate 2l |P_2l(t*)|^2 with t* = min(pi/Xi, time_cap).
// A nonpositive cap disables it, which is a contract error when Xi -> 0.
inline double nmax_e(const RamanTriple& triple, int l,
                     double time_cap = default_time_cap) {
    if (l < 1) throw contract_error("nmax_e: l must be >= 1");
    const double xi = triple.xi();
    double t_star;
    if (xi > 0.0 && M_PI / xi <= time_cap) {
        t_star = M_PI / xi;
    } else {
        if (!(time_cap > 0.0))
            throw contract_error("nmax_e: Xi -> 0 requires a positive time cap");
        t_star = time_cap;
    }
    const double p = std::abs(p2l_analytic(triple, t_star));
    return 2.0 * l * p * p;
}

// H_eff = (1/2)[c0 Omega_p |mu_0> + c2l Omega_s |mu_2l>] <E0| + h.c.
// on the ordered basis {|mu_0>, |E0>, |mu_2l>}; eigenvalues {0, +-Xi}.
inline Matrix heff_matrix(const RamanTriple& triple) {
    if (!triple.weak_drive)
        throw contract_error("heff_matrix: requires the weak-drive regime");
    Matrix h = Matrix::Zero(3, 3);
    h(0, 1) = 0.5 * triple.c0 * triple.Omega_p;
    h(2, 1) = 0.5 * triple.c2l * triple.Omega_s;
    h(1, 0) = std::conj(h(0, 1));
    h(1, 2) = std::conj(h(2, 1));
    return h;
}

} // namespace rabicrit
