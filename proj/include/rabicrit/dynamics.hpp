// dynamics.hpp — Driven dynamics in the dressed basis: coherent Schrodinger
// evolution (adaptive, with a stroboscopic fast path for periodic drives),
// the dressed-basis Lindblad master equation, and steady-state extraction.
//
// All evolution runs in the interaction picture of the diagonal dressed
// energies; only the slow drive-induced motion is integrated.  The drive
// couples the mu sector to the Rabi sector exclusively, so the engine keeps
// the coupling as a (mu x E) block and orders the basis mu-first internally.

#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/SVD>

#include "rabicrit/dressed.hpp"
#include "rabicrit/ode.hpp"

namespace rabicrit {

// ------------------------------ Driven system --------------------------------

struct DrivenSystem {
    DressedSubspace sub;
    DriveSpec drive;

    // engine layout: mu states first, then Rabi states, each subset in
    // ascending energy order
    std::vector<int> perm;      // engine slot -> dressed index
    std::vector<int> inv_perm;  // dressed index -> engine slot
    int n_mu = 0, n_rabi = 0;
    RealVector lam;             // permuted dressed energies
    Matrix C;                   // (n_mu x n_rabi) drive coupling block
    Eigen::ArrayXXd Delta;      // lam_mu(i) - lam_rabi(j)
    Matrix N_op;                // X- X+ in engine order
    int slot_mu0 = -1, slot_mu2l = -1, slot_E0 = -1;

    bool periodic = false;
    double period = 0.0;

    RamanTriple triple;  // c0, c2l and amplitudes, for horizons and oracles

    int size() const { return sub.M; }

    // |mu_0> in engine coordinates, the protocol's initial state
    Vector ground_state() const {
        Vector v = Vector::Zero(sub.M);
        v(slot_mu0) = 1.0;
        return v;
    }
};

namespace detail {

// Smallest common period of the two drive tones, when their ratio is
// rational with a small denominator.
inline std::optional<double> common_period(double omega_p, double omega_s) {
    if (omega_p <= 0 || omega_s <= 0) return std::nullopt;
    const double r = omega_p / omega_s;
    for (int b = 1; b <= 512; ++b) {
        const double a = std::round(r * b);
        if (a < 1) continue;
        if (std::abs(r - a / b) <= 1e-9 * std::max(1.0, r))
            return 2.0 * M_PI * b / omega_s;
    }
    return std::nullopt;
}

} // namespace detail

inline DrivenSystem make_driven(DressedSubspace sub, const DriveSpec& drive) {
    DrivenSystem sys;
    sys.sub = std::move(sub);
    sys.drive = drive;
    const auto& S = sys.sub;
    const int M = S.M;

    for (int i = 0; i < M; ++i)
        if (S.labels[i].is_mu) sys.perm.push_back(i);
    sys.n_mu = static_cast<int>(sys.perm.size());
    for (int i = 0; i < M; ++i)
        if (!S.labels[i].is_mu) sys.perm.push_back(i);
    sys.n_rabi = M - sys.n_mu;
    sys.inv_perm.assign(M, -1);
    for (int k = 0; k < M; ++k) sys.inv_perm[sys.perm[k]] = k;

    sys.lam.resize(M);
    for (int k = 0; k < M; ++k) sys.lam(k) = S.energies(sys.perm[k]);

    sys.C.resize(sys.n_mu, sys.n_rabi);
    sys.Delta.resize(sys.n_mu, sys.n_rabi);
    for (int i = 0; i < sys.n_mu; ++i)
        for (int j = 0; j < sys.n_rabi; ++j) {
            sys.C(i, j) = S.drive_coupling(sys.perm[i], sys.perm[sys.n_mu + j]);
            sys.Delta(i, j) = sys.lam(i) - sys.lam(sys.n_mu + j);
        }

    sys.N_op.resize(M, M);
    for (int i = 0; i < M; ++i)
        for (int j = 0; j < M; ++j)
            sys.N_op(i, j) = S.xminus_xplus(sys.perm[i], sys.perm[j]);

    sys.slot_mu0 = sys.inv_perm[S.index_of_mu(0)];
    sys.slot_E0 = sys.inv_perm[S.index_of_E(0)];
    sys.slot_mu2l = sys.inv_perm[S.index_of_mu(2 * drive.l)];

    const auto T = detail::common_period(drive.omega_p, drive.omega_s);
    sys.periodic = T.has_value();
    sys.period = T.value_or(0.0);

    sys.triple.c0 = S.drive_coupling(S.index_of_mu(0), S.index_of_E(0));
    sys.triple.c2l = S.drive_coupling(S.index_of_mu(2 * drive.l), S.index_of_E(0));
    sys.triple.Omega_p = drive.Omega_p;
    sys.triple.Omega_s = drive.Omega_s;
    sys.triple.weak_drive = drive.weak_drive;
    return sys;
}

// ------------------------------ Evolution record -----------------------------

struct EvolutionRecord {
    std::vector<double> t;
    std::vector<double> pop_mu0, pop_mu2l, pop_E0;
    std::vector<double> nbar;     // <X- X+>
    std::vector<double> norm;     // state norm (coherent) or trace (dissipative)
    std::vector<double> phi_out;  // kappa <X- X+>, dissipative runs only
    std::string method;           // "stroboscopic" | "adaptive"
    double max_norm_drift = 0.0;

    double t_end() const { return t.empty() ? 0.0 : t.back(); }
};

// Max of <X- X+> over the record; the record must span required_span up to
// one sampling interval of slack.
inline double nbar_max(const EvolutionRecord& rec, double required_span) {
    double spacing = 0.0;
    for (size_t i = 1; i < rec.t.size(); ++i)
        spacing = std::max(spacing, rec.t[i] - rec.t[i - 1]);
    if (rec.t.empty() ||
        rec.t_end() < required_span * (1.0 - 1e-9) - spacing)
        throw contract_error("nbar_max: record does not span the required horizon");
    double best = 0.0;
    for (double v : rec.nbar) best = std::max(best, v);
    return best;
}

// Phi_out = kappa Tr[X- X+ rho] for a density operator in dressed order.
inline double phi_out(const Matrix& rho, const DressedSubspace& sub, double kappa) {
    if (rho.rows() != sub.M)
        throw contract_error("phi_out: dimension mismatch");
    return kappa * std::real(Matrix(sub.xminus_xplus * rho).trace());
}

// ------------------------------ Engine internals -----------------------------

namespace detail {

// f(t) * C .* exp(i Delta t), the interaction-picture drive block.
struct CoupledBlock {
    Eigen::ArrayXXcd phase;
    Matrix Ct;

    void form(const DrivenSystem& sys, double t) {
        phase = ((sys.Delta * t).cos().cast<Complex>() +
                 Complex(0, 1) * (sys.Delta * t).sin().cast<Complex>());
        Ct = (sys.drive.envelope(t) * sys.C.array() * phase).matrix();
    }
};

// Schrodinger-picture state from the interaction-picture one.
inline Vector unrotate(const DrivenSystem& sys, double t, const Vector& psi_i) {
    Vector out(psi_i.size());
    for (Eigen::Index k = 0; k < psi_i.size(); ++k)
        out(k) = std::polar(1.0, -sys.lam(k) * t) * psi_i(k);
    return out;
}

inline Matrix unrotate_rho(const DrivenSystem& sys, double t, const Matrix& rho_i) {
    const int M = static_cast<int>(rho_i.rows());
    Matrix out(M, M);
    for (int r = 0; r < M; ++r)
        for (int c = 0; c < M; ++c)
            out(r, c) = std::polar(1.0, -(sys.lam(r) - sys.lam(c)) * t) * rho_i(r, c);
    return out;
}

inline void record_state(const DrivenSystem& sys, double t, const Vector& psi_s,
                         EvolutionRecord& rec) {
    rec.t.push_back(t);
    rec.pop_mu0.push_back(std::norm(psi_s(sys.slot_mu0)));
    rec.pop_mu2l.push_back(std::norm(psi_s(sys.slot_mu2l)));
    rec.pop_E0.push_back(std::norm(psi_s(sys.slot_E0)));
    rec.nbar.push_back(std::real(Complex(psi_s.adjoint() * sys.N_op * psi_s)));
    const double n = psi_s.norm();
    rec.norm.push_back(n);
    rec.max_norm_drift = std::max(rec.max_norm_drift, std::abs(n - 1.0));
}

inline void record_rho(const DrivenSystem& sys, double t, const Matrix& rho_s,
                       double kappa, EvolutionRecord& rec) {
    rec.t.push_back(t);
    rec.pop_mu0.push_back(std::real(rho_s(sys.slot_mu0, sys.slot_mu0)));
    rec.pop_mu2l.push_back(std::real(rho_s(sys.slot_mu2l, sys.slot_mu2l)));
    rec.pop_E0.push_back(std::real(rho_s(sys.slot_E0, sys.slot_E0)));
    const double nb = std::real(Matrix(sys.N_op * rho_s).trace());
    rec.nbar.push_back(nb);
    rec.phi_out.push_back(kappa * nb);
    const double tr = std::real(rho_s.trace());
    rec.norm.push_back(tr);
    rec.max_norm_drift = std::max(rec.max_norm_drift, std::abs(tr - 1.0));
}

} // namespace detail

// --------------------------- Coherent evolution ------------------------------

struct CoherentOptions {
    double rtol = 1e-8;           // adaptive path tolerance
    double propagator_rtol = 1e-11;
    int samples = 400;            // adaptive path output grid
    bool allow_stroboscopic = true;
    int min_periods_for_strobe = 32;
};

// One drive period of the Schrodinger-picture propagator, unitarized by
// polar projection so that long powering preserves the norm.
inline Matrix period_propagator(const DrivenSystem& sys,
                                double rtol = 1e-11) {
    if (!sys.periodic)
        throw contract_error("period_propagator: drive tones are incommensurate");
    const int M = sys.size();
    Matrix U = Matrix::Identity(M, M);
    detail::CoupledBlock blk;
    auto rhs = [&](double t, const Matrix& u) -> Matrix {
        blk.form(sys, t);
        Matrix out(M, u.cols());
        out.topRows(sys.n_mu).noalias() = blk.Ct * u.bottomRows(sys.n_rabi);
        out.bottomRows(sys.n_rabi).noalias() = blk.Ct.adjoint() * u.topRows(sys.n_mu);
        return Matrix(Complex(0, -1) * out);
    };
    OdeOptions opt;
    opt.rtol = rtol;
    opt.atol = rtol * 1e-2;
    integrate_adaptive(rhs, U, 0.0, sys.period, opt);
    for (int r = 0; r < M; ++r)
        U.row(r) *= std::polar(1.0, -sys.lam(r) * sys.period);
    Eigen::JacobiSVD<Matrix> svd(U, Eigen::ComputeThinU | Eigen::ComputeThinV);
    return Matrix(svd.matrixU() * svd.matrixV().adjoint());
}

// Coherent evolution of psi0 (engine coordinates; defaults to |mu_0>).
// Periodic drives over many periods take the stroboscopic path: one
// unitarized period propagator powered across the horizon.
inline EvolutionRecord evolve_coherent(const DrivenSystem& sys, double t_end,
                                       const CoherentOptions& opts = {},
                                       const Vector* psi0 = nullptr) {
    if (t_end < 0) throw contract_error("evolve_coherent: negative horizon");
    const int M = sys.size();
    Vector psi = psi0 ? *psi0 : sys.ground_state();
    if (std::abs(psi.norm() - 1.0) > 1e-9)
        throw contract_error("evolve_coherent: initial state not normalized");

    EvolutionRecord rec;
    const bool strobe = opts.allow_stroboscopic && sys.periodic &&
                        t_end >= opts.min_periods_for_strobe * sys.period;
    if (strobe) {
        rec.method = "stroboscopic";
        const Matrix U = period_propagator(sys, opts.propagator_rtol);
        const long n_per = static_cast<long>(std::floor(t_end / sys.period));
        detail::record_state(sys, 0.0, psi, rec);
        for (long m = 1; m <= n_per; ++m) {
            psi = U * psi;
            detail::record_state(sys, m * sys.period, psi, rec);
        }
        return rec;
    }

    rec.method = "adaptive";
    detail::CoupledBlock blk;
    auto rhs = [&](double t, const Vector& v) -> Vector {
        blk.form(sys, t);
        Vector out(M);
        out.head(sys.n_mu).noalias() = blk.Ct * v.tail(sys.n_rabi);
        out.tail(sys.n_rabi).noalias() = blk.Ct.adjoint() * v.head(sys.n_mu);
        return Vector(Complex(0, -1) * out);
    };
    OdeOptions opt;
    opt.rtol = opts.rtol;
    opt.atol = 1e-12;
    OdeStats stats;
    detail::record_state(sys, 0.0, psi, rec);
    const int n = std::max(1, opts.samples);
    for (int i = 1; i <= n; ++i) {
        const double t0 = t_end * (i - 1) / n;
        const double t1 = t_end * i / n;
        stats = integrate_adaptive(rhs, psi, t0, t1, opt, stats);
        detail::record_state(sys, t1, detail::unrotate(sys, t1, psi), rec);
    }
    return rec;
}

// --------------------------- Dissipative evolution ---------------------------

struct MasterOptions {
    double rtol = 1e-6;
    double atol = 1e-12;
    int samples = 200;  // used when sampling a fixed horizon
};

namespace detail {

struct DissipatorTable {
    RealMatrix G;   // G(i, j): rate of jump j -> i, engine order
    RealVector w;   // column sums: total decay rate out of j

    void build(const DrivenSystem& sys, const DissipationParams& diss) {
        const int M = sys.size();
        G = RealMatrix::Zero(M, M);
        for (const RateEntry& r : sys.sub.rates(diss))
            G(sys.inv_perm[r.to], sys.inv_perm[r.from]) += r.rate;
        w = G.colwise().sum();
    }
};

// RHS of the interaction-picture master equation.  States are Hermitian in
// exact arithmetic; the commutator is formed as K - K^dag.
struct MasterRhs {
    const DrivenSystem* sys;
    DissipatorTable table;
    mutable CoupledBlock blk;

    Matrix operator()(double t, const Matrix& rho) const {
        const int M = sys->size();
        blk.form(*sys, t);
        Matrix K(M, M);
        K.topRows(sys->n_mu).noalias() = blk.Ct * rho.bottomRows(sys->n_rabi);
        K.bottomRows(sys->n_rabi).noalias() =
            blk.Ct.adjoint() * rho.topRows(sys->n_mu);
        Matrix out = Complex(0, -1) * (K - Matrix(K.adjoint()));
        // jump gains on the diagonal, decay on every element
        const RealVector pops = rho.diagonal().real();
        const RealVector gain = table.G * pops;
        out.diagonal() += gain.cast<Complex>();
        out.array() -= rho.array() *
                       (0.5 * (table.w.replicate(1, M) +
                               table.w.transpose().replicate(M, 1)))
                           .array();
        return out;
    }
};

} // namespace detail

// Master-equation evolution over [0, t_end] with sampling on a uniform grid.
// rho0 is in engine coordinates; defaults to |mu_0><mu_0|.
inline EvolutionRecord master_evolve(const DrivenSystem& sys,
                                     const DissipationParams& diss, double t_end,
                                     const MasterOptions& opts = {},
                                     const Matrix* rho0 = nullptr) {
    diss.validate();
    const int M = sys.size();
    Matrix rho;
    if (rho0) {
        rho = *rho0;
        if (std::abs(std::real(rho.trace()) - 1.0) > 1e-9)
            throw contract_error("master_evolve: initial state must have unit trace");
    } else {
        rho = Matrix::Zero(M, M);
        rho(sys.slot_mu0, sys.slot_mu0) = 1.0;
    }

    detail::MasterRhs rhs;
    rhs.sys = &sys;
    rhs.table.build(sys, diss);

    OdeOptions opt;
    opt.rtol = opts.rtol;
    opt.atol = opts.atol;
    OdeStats stats;
    EvolutionRecord rec;
    rec.method = "adaptive";
    detail::record_rho(sys, 0.0, rho, diss.kappa, rec);
    const int n = std::max(1, opts.samples);
    for (int i = 1; i <= n; ++i) {
        const double t0 = t_end * (i - 1) / n;
        const double t1 = t_end * i / n;
        stats = integrate_adaptive(rhs, rho, t0, t1, opt, stats);
        rho = 0.5 * (rho + Matrix(rho.adjoint()));
        detail::record_rho(sys, t1, detail::unrotate_rho(sys, t1, rho),
                           diss.kappa, rec);
    }
    return rec;
}

// ------------------------------ Steady state ----------------------------------

struct SteadyOptions {
    double rtol = 1e-6;            // integrator tolerance
    double window_factor = 10.0;   // window = factor / min(kappa, gamma1, gamma2)
    double flat_tol = 1e-3;        // Phi variation over the window
    double zero_floor = 1e-14;     // |Phi| below this counts as converged-to-zero
    double max_horizon = 4.0e4;    // abort beyond this time
    std::string method = "longtime";  // "longtime" | "floquet-averaged"
    double secular_tol = 1e-8;     // resonance window of the averaged generator
};

struct SteadyResult {
    Matrix rho;          // dressed (energy) order, Schrodinger picture
    double phi = 0.0;    // kappa <X- X+>
    double t_reached = 0.0;
    bool converged = false;
    std::string method;
    EvolutionRecord trace;  // stroboscopic Phi_out history
};

namespace detail {

inline Matrix engine_to_dressed(const DrivenSystem& sys, const Matrix& rho_e) {
    const int M = sys.size();
    Matrix out(M, M);
    for (int r = 0; r < M; ++r)
        for (int c = 0; c < M; ++c)
            out(sys.perm[r], sys.perm[c]) = rho_e(r, c);
    return out;
}

// Long-time integration, chunked by the drive period, until Phi_out is flat
// over the required window.
inline SteadyResult steady_longtime(const DrivenSystem& sys,
                                    const DissipationParams& diss,
                                    const SteadyOptions& opts,
                                    const Matrix* rho0) {
    const int M = sys.size();
    const double chunk =
        sys.periodic ? sys.period
                     : 2.0 * M_PI / std::min(sys.drive.omega_p, sys.drive.omega_s);
    const double window = opts.window_factor / diss.min_rate();
    const int win_chunks = std::max(2, int(std::ceil(window / chunk)));

    Matrix rho;
    if (rho0) rho = *rho0;
    else {
        rho = Matrix::Zero(M, M);
        rho(sys.slot_mu0, sys.slot_mu0) = 1.0;
    }

    MasterRhs rhs;
    rhs.sys = &sys;
    rhs.table.build(sys, diss);
    OdeOptions opt;
    opt.rtol = opts.rtol;
    opt.atol = 1e-13;

    SteadyResult res;
    res.method = "longtime";
    OdeStats stats;
    std::vector<double>& phis = res.trace.phi_out;
    double t = 0.0;
    record_rho(sys, 0.0, rho, diss.kappa, res.trace);
    while (t < opts.max_horizon) {
        stats = integrate_adaptive(rhs, rho, t, t + chunk, opt, stats);
        t += chunk;
        rho = 0.5 * (rho + Matrix(rho.adjoint()));
        record_rho(sys, t, unrotate_rho(sys, t, rho), diss.kappa, res.trace);
        if (std::abs(res.trace.norm.back() - 1.0) > 1e-6)
            throw convergence_error("steady_state: trace drifted beyond 1e-6");
        if (static_cast<int>(phis.size()) > win_chunks) {
            double lo = phis.back(), hi = phis.back();
            for (int k = 0; k < win_chunks; ++k) {
                const double v = phis[phis.size() - 1 - k];
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            if (hi < opts.zero_floor ||
                (hi - lo) <= opts.flat_tol * std::max(hi, opts.zero_floor)) {
                res.converged = true;
                break;
            }
        }
    }
    res.t_reached = t;
    res.phi = phis.back();
    res.rho = engine_to_dressed(sys, unrotate_rho(sys, t, rho));
    if (!res.converged) {
        std::string msg = "steady_state: no convergence by t=" + std::to_string(t) +
                          "; Phi tail:";
        for (size_t k = phis.size() > 6 ? phis.size() - 6 : 0; k < phis.size(); ++k)
            msg += " " + std::to_string(phis[k]);
        throw convergence_error(msg);
    }
    return res;
}

// Secular (rotating-frame averaged) generator: null vector of the
// time-independent Liouvillian built from the resonant drive terms.
inline SteadyResult steady_floquet(const DrivenSystem& sys,
                                   const DissipationParams& diss,
                                   const SteadyOptions& opts) {
    const int M = sys.size();
    // averaged Hamiltonian in the interaction picture
    Matrix hbar = Matrix::Zero(M, M);
    for (int i = 0; i < sys.n_mu; ++i)
        for (int j = 0; j < sys.n_rabi; ++j) {
            const double d = sys.Delta(i, j);
            double amp = 0.0;
            if (std::abs(d + sys.drive.omega_p) < opts.secular_tol ||
                std::abs(d - sys.drive.omega_p) < opts.secular_tol)
                amp += 0.5 * sys.drive.Omega_p;
            if (std::abs(d + sys.drive.omega_s) < opts.secular_tol ||
                std::abs(d - sys.drive.omega_s) < opts.secular_tol)
                amp += 0.5 * sys.drive.Omega_s;
            if (amp != 0.0) {
                hbar(i, sys.n_mu + j) += amp * sys.C(i, j);
                hbar(sys.n_mu + j, i) += amp * std::conj(sys.C(i, j));
            }
        }

    MasterRhs dummy;  // reuse the rate table builder
    dummy.sys = &sys;
    dummy.table.build(sys, diss);
    const RealMatrix& G = dummy.table.G;
    const RealVector& w = dummy.table.w;

    const int D = M * M;
    const auto idx = [M](int r, int c) { return r + M * c; };
    Matrix L = Matrix::Zero(D, D);
    for (int r = 0; r < M; ++r)
        for (int c = 0; c < M; ++c) {
            const int row = idx(r, c);
            for (int k = 0; k < M; ++k) {
                L(row, idx(k, c)) += Complex(0, -1) * hbar(r, k);
                L(row, idx(r, k)) -= Complex(0, -1) * hbar(k, c);
            }
            L(row, row) -= 0.5 * (w(r) + w(c));
        }
    for (int i = 0; i < M; ++i)
        for (int j = 0; j < M; ++j)
            if (G(i, j) > 0) L(idx(i, i), idx(j, j)) += G(i, j);

    // replace one row with the trace condition and solve L x = e0
    for (int c = 0; c < D; ++c) L(0, c) = 0.0;
    for (int r = 0; r < M; ++r) L(0, idx(r, r)) = 1.0;
    Vector b = Vector::Zero(D);
    b(0) = 1.0;
    const Vector x = L.partialPivLu().solve(b);

    Matrix rho(M, M);
    for (int r = 0; r < M; ++r)
        for (int c = 0; c < M; ++c) rho(r, c) = x(idx(r, c));
    rho = 0.5 * (rho + Matrix(rho.adjoint()));

    SteadyResult res;
    res.method = "floquet-averaged";
    res.converged = true;
    res.rho = engine_to_dressed(sys, rho);
    res.phi = diss.kappa * std::real(Matrix(sys.N_op * rho).trace());
    return res;
}

} // namespace detail

// Steady state of the driven-dissipative system.  "longtime" integrates until
// Phi_out varies by less than flat_tol over a window of window_factor over
// the smallest rate; "floquet-averaged" solves the null space of the
// secular-averaged generator.  The method used is recorded in the result.
inline SteadyResult steady_state(const DrivenSystem& sys,
                                 const DissipationParams& diss,
                                 const SteadyOptions& opts = {},
                                 const Matrix* rho0 = nullptr) {
    diss.validate();
    if (diss.min_rate() == std::numeric_limits<double>::infinity())
        throw config_error("steady_state: all dissipation rates are zero");
    if (opts.method == "longtime")
        return detail::steady_longtime(sys, diss, opts, rho0);
    if (opts.method == "floquet-averaged")
        return detail::steady_floquet(sys, diss, opts);
    throw config_error("steady_state: unknown method '" + opts.method + "'");
}

// ------------------------------ Point assembly -------------------------------

// Drive resolved against the subspace's numerically computed spectrum:
// Omega_p = pump_frac (E2 - E0), Omega_s = stokes_ratio * Omega_p.
inline DriveSpec resolve_drive(const DressedSubspace& sub, int l, int n_d,
                               double pump_frac, double stokes_ratio = 2.0) {
    const double gap = sub.E2 - sub.E0;
    const double omega_p_amp = pump_frac * gap;
    return DriveSpec::resonant(sub.E0, sub.params.omega_mu, l, n_d, omega_p_amp,
                               stokes_ratio * omega_p_amp, gap);
}

// One fully assembled parameter point of the protocol.
struct PointConfig {
    double g_c = 0.9;
    double freq_ratio = 1e4;
    int l = 2;
    int n_d = 4;               // 0: use n_d = 2 + l
    double pump_frac = 0.005;  // Omega_p as a fraction of E2 - E0
    double stokes_ratio = 2.0;
    int n_fock = 0;            // 0: recommended_nfock
    int dressed_m = 60;
    double time_cap = default_time_cap;
};

inline DrivenSystem make_point(const PointConfig& cfg) {
    const int n_d = cfg.n_d > 0 ? cfg.n_d : 2 + cfg.l;
    const int nf = cfg.n_fock > 0 ? cfg.n_fock
                                  : recommended_nfock(cfg.g_c, cfg.freq_ratio);
    DressedSubspace sub =
        build_dressed_resolved(cfg.g_c, cfg.freq_ratio, cfg.l, n_d, nf, cfg.dressed_m);
    const DriveSpec drive = resolve_drive(sub, cfg.l, n_d, cfg.pump_frac,
                                          cfg.stokes_ratio);
    return make_driven(std::move(sub), drive);
}

// Horizon of the coherent protocol: min(1.2 pi/Xi, time cap).
inline double coherent_horizon(const DrivenSystem& sys,
                               double time_cap = default_time_cap) {
    const double xi = sys.triple.xi();
    if (xi > 0 && 1.2 * M_PI / xi <= time_cap) return 1.2 * M_PI / xi;
    return time_cap;
}

} // namespace rabicrit
