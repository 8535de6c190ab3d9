// dressed.hpp — Eigenbasis of the undriven three-level Hamiltonian H_0,
// assembled block-wise (the |mu> sector is exactly diagonal, the rest is the
// Rabi spectrum), projection onto the lowest M dressed states, the
// positive-frequency operator X+, and the dressed Lindblad rates.

#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "rabicrit/eigensystem.hpp"
#include "rabicrit/model.hpp"

namespace rabicrit {

// ------------------------------ X+ (generic) ---------------------------------

// X+ = sum_{j' < j} <xi_j'|(a + a^dag)|xi_j> |xi_j'><xi_j| over an
// ascending-sorted eigensystem: strictly zero for j' >= j (row >= column).
// Returns the matrix in the dressed index; a degeneracy below 1e-10 keeps the
// eigensystem's index order and is reported through *degenerate_flag.
inline Matrix build_xplus(const EigenSystem& eig, const HilbertConfig& cfg,
                          bool* degenerate_flag = nullptr) {
    const int m = eig.size();
    if (eig.vectors.rows() != cfg.dim())
        throw contract_error("build_xplus: eigensystem does not match the space");
    const FockOps ops = fock_ops(cfg);
    const Matrix x = ops.a + ops.a_dag;
    const Matrix x_eig = eig.vectors.adjoint() * x * eig.vectors;
    Matrix xp = Matrix::Zero(m, m);
    bool degen = false;
    for (int j = 1; j < m; ++j) {
        if (eig.values(j) - eig.values(j - 1) < 1e-10) degen = true;
        for (int jp = 0; jp < j; ++jp) xp(jp, j) = x_eig(jp, j);
    }
    if (degenerate_flag) *degenerate_flag = degen;
    return xp;
}

// ------------------------------ Dissipation ----------------------------------

struct DissipationParams {
    double kappa = 0.0;   // cavity decay
    double gamma1 = 0.0;  // |g> -> |mu| emission
    double gamma2 = 0.0;  // |e> -> |g| emission

    void validate() const {
        if (kappa < 0 || gamma1 < 0 || gamma2 < 0)
            throw config_error("DissipationParams: rates must be >= 0");
    }
    double min_rate() const {
        double m = std::numeric_limits<double>::infinity();
        for (double r : {kappa, gamma1, gamma2})
            if (r > 0) m = std::min(m, r);
        return m;
    }
    bool all_zero() const { return kappa == 0 && gamma1 == 0 && gamma2 == 0; }
};

struct RateEntry {
    int to;       // j' (lower state)
    int from;     // j  (upper state)
    double rate;
    int channel;  // 1: gamma1 (mu<->g), 2: gamma2 (g<->e), 3: kappa (a+a^dag)
};

// Gamma^(1) = gamma1 |<j'|(|mu><g|+h.c.)|j>|^2, Gamma^(2) likewise for
// (|g><e|+h.c.), Gamma^(3) = kappa |<j'|(a+a^dag)|j>|^2, all with j' < j.
inline std::vector<RateEntry> lindblad_rates(const EigenSystem& eig,
                                             const HilbertConfig& cfg,
                                             const DissipationParams& diss) {
    diss.validate();
    const int m = eig.size();
    std::vector<Matrix> channel_ops;
    std::vector<double> strengths = {diss.gamma1, diss.gamma2, diss.kappa};
    if (cfg.has_mu())
        channel_ops.push_back(atomic_transition(cfg, Level::mu, Level::g) +
                              atomic_transition(cfg, Level::g, Level::mu));
    else
        channel_ops.push_back(Matrix::Zero(cfg.dim(), cfg.dim()));
    channel_ops.push_back(atomic_transition(cfg, Level::g, Level::e) +
                          atomic_transition(cfg, Level::e, Level::g));
    const FockOps fops = fock_ops(cfg);
    channel_ops.push_back(fops.a + fops.a_dag);

    std::vector<RateEntry> rates;
    for (int ch = 0; ch < 3; ++ch) {
        if (strengths[ch] == 0.0) continue;
        const Matrix in_eig = eig.vectors.adjoint() * channel_ops[ch] * eig.vectors;
        for (int j = 1; j < m; ++j)
            for (int jp = 0; jp < j; ++jp) {
                const double r = strengths[ch] * std::norm(in_eig(jp, j));
                if (r > 0) rates.push_back({jp, j, r, ch + 1});
            }
    }
    return rates;
}

// ------------------------------ DressedSubspace -------------------------------

struct DressedLabel {
    bool is_mu;
    int quantum;  // n for |mu_n>, m for |E_m>
    std::string name() const {
        return (is_mu ? "mu_" : "E_") + std::to_string(quantum);
    }
};

// The lowest M eigenstates of H_0 with every operator the dynamics needs,
// restricted to that window.  Constructed block-wise: |mu_n> are exact basis
// states at n*omega + omega_mu, the rest is the Rabi spectrum.
struct DressedSubspace {
    ModelParams params;      // omega_mu resolved
    int n_fock = 0;          // underlying truncation
    int M = 0;               // retained states
    RealVector energies;     // ascending
    std::vector<DressedLabel> labels;
    std::map<int, int> mu_index;  // mu_n -> dressed index
    std::map<int, int> e_index;   // E_m  -> dressed index
    bool degenerate_flag = false;

    Matrix drive_coupling;  // <i|(|mu><g|+|g><mu|)|j>; mu<->E blocks only
    Matrix sigma_ge;        // <i|(|g><e|+|e><g|)|j>;   E<->E block only
    Matrix x_full;          // <i|(a+a^dag)|j>
    Matrix xplus;           // strict upper triangle of x_full
    Matrix xminus_xplus;    // X- X+

    double E0 = 0, E1 = 0, E2 = 0;  // lowest Rabi eigenvalues

    int index_of_mu(int n) const {
        auto it = mu_index.find(n);
        if (it == mu_index.end())
            throw config_error("dressed subspace: required state |mu_" +
                               std::to_string(n) + "> outside the retained window (M=" +
                               std::to_string(M) + ")");
        return it->second;
    }
    int index_of_E(int m) const {
        auto it = e_index.find(m);
        if (it == e_index.end())
            throw config_error("dressed subspace: required state |E_" +
                               std::to_string(m) + "> outside the retained window (M=" +
                               std::to_string(M) + ")");
        return it->second;
    }

    // Dressed-basis rate table using the same Gamma expressions as
    // lindblad_rates, evaluated on the retained window.
    std::vector<RateEntry> rates(const DissipationParams& diss) const {
        diss.validate();
        std::vector<RateEntry> out;
        const Matrix* ops[3] = {&drive_coupling, &sigma_ge, &x_full};
        const double strengths[3] = {diss.gamma1, diss.gamma2, diss.kappa};
        for (int ch = 0; ch < 3; ++ch) {
            if (strengths[ch] == 0.0) continue;
            for (int j = 1; j < M; ++j)
                for (int jp = 0; jp < j; ++jp) {
                    const double r = strengths[ch] * std::norm((*ops[ch])(jp, j));
                    if (r > 0) out.push_back({jp, j, r, ch + 1});
                }
        }
        return out;
    }
};

// Builds the dressed subspace for the three-level model at the point p
// (omega_mu already resolved), retaining the lowest M states.
//   n_fock  : Fock truncation of the underlying Rabi problem
//   n_rabi  : how many Rabi eigenpairs to expose (>= M is always safe)
inline DressedSubspace build_dressed(const ModelParams& p, int n_fock, int M) {
    p.validate_three_level();
    if (M < 3) throw config_error("build_dressed: M must be >= 3");
    if (M > 3 * n_fock)
        throw config_error("build_dressed: M exceeds the full dimension");

    const HilbertConfig rabi_cfg(n_fock, 2);
    const int n_rabi = std::min(M, 2 * n_fock);
    const EigenSystem rabi = herm_eig_lowest(build_HR(p, rabi_cfg), n_rabi);

    DressedSubspace sub;
    sub.params = p;
    sub.n_fock = n_fock;
    sub.M = M;
    sub.E0 = rabi.values(0);
    sub.E1 = n_rabi > 1 ? rabi.values(1) : rabi.values(0);
    sub.E2 = n_rabi > 2 ? rabi.values(2) : rabi.values(0);

    // merge mu ladder and Rabi spectrum, ascending; mu states first on ties
    struct Entry { double energy; bool is_mu; int quantum; };
    std::vector<Entry> entries;
    entries.reserve(n_fock + n_rabi);
    for (int n = 0; n < n_fock; ++n)
        entries.push_back({p.omega_mu + n * p.omega, true, n});
    for (int m = 0; m < n_rabi; ++m) entries.push_back({rabi.values(m), false, m});
    std::stable_sort(entries.begin(), entries.end(),
                     [](const Entry& a, const Entry& b) {
                         if (a.energy != b.energy) return a.energy < b.energy;
                         if (a.is_mu != b.is_mu) return a.is_mu;
                         return a.quantum < b.quantum;
                     });
    entries.resize(M);

    sub.energies.resize(M);
    sub.labels.reserve(M);
    for (int i = 0; i < M; ++i) {
        sub.energies(i) = entries[i].energy;
        sub.labels.push_back({entries[i].is_mu, entries[i].quantum});
        if (entries[i].is_mu) sub.mu_index[entries[i].quantum] = i;
        else sub.e_index[entries[i].quantum] = i;
        if (i > 0 && sub.energies(i) - sub.energies(i - 1) < 1e-10)
            sub.degenerate_flag = true;
    }

    // g- and e-sector slices of the retained Rabi eigenvectors
    const auto gsec = [&](int m) {
        return rabi.vectors.col(m).segment(rabi_cfg.index(Level::g, 0), n_fock);
    };
    const auto esec = [&](int m) {
        return rabi.vectors.col(m).segment(rabi_cfg.index(Level::e, 0), n_fock);
    };
    const Matrix x1 = Matrix(fock_annihilation(n_fock) +
                             Matrix(fock_annihilation(n_fock).adjoint()));

    sub.drive_coupling = Matrix::Zero(M, M);
    sub.sigma_ge = Matrix::Zero(M, M);
    sub.x_full = Matrix::Zero(M, M);
    for (int i = 0; i < M; ++i) {
        for (int j = 0; j < M; ++j) {
            const auto& Li = sub.labels[i];
            const auto& Lj = sub.labels[j];
            if (Li.is_mu && Lj.is_mu) {
                sub.x_full(i, j) = x1(Li.quantum, Lj.quantum);
            } else if (Li.is_mu && !Lj.is_mu) {
                // <mu_n|(|mu><g|+|g><mu|)|E_m> = <g,n|E_m>
                sub.drive_coupling(i, j) = gsec(Lj.quantum)(Li.quantum);
            } else if (!Li.is_mu && Lj.is_mu) {
                sub.drive_coupling(i, j) = std::conj(gsec(Li.quantum)(Lj.quantum));
            } else {
                if (j >= i) {  // fill Hermitian lower half from the upper
                    sub.x_full(i, j) =
                        Complex(gsec(Li.quantum).adjoint() * x1 * gsec(Lj.quantum)) +
                        Complex(esec(Li.quantum).adjoint() * x1 * esec(Lj.quantum));
                    sub.sigma_ge(i, j) =
                        Complex(gsec(Li.quantum).adjoint() * esec(Lj.quantum)) +
                        Complex(esec(Li.quantum).adjoint() * gsec(Lj.quantum));
                }
            }
        }
    }
    for (int i = 0; i < M; ++i)
        for (int j = 0; j < i; ++j)
            if (!sub.labels[i].is_mu && !sub.labels[j].is_mu) {
                sub.x_full(i, j) = std::conj(sub.x_full(j, i));
                sub.sigma_ge(i, j) = std::conj(sub.sigma_ge(j, i));
            }

    sub.xplus = Matrix::Zero(M, M);
    for (int j = 1; j < M; ++j)
        for (int jp = 0; jp < j; ++jp) sub.xplus(jp, j) = sub.x_full(jp, j);
    sub.xminus_xplus = sub.xplus.adjoint() * sub.xplus;
    return sub;
}

// Convenience: resolve omega_mu from the numerically computed E0 via the
// placement rule, then build the subspace.
inline DressedSubspace build_dressed_resolved(double g_c, double freq_ratio,
                                              int l, int n_d, int n_fock, int M) {
    ModelParams p = ModelParams::from_gc(g_c, freq_ratio);
    {
        const HilbertConfig cfg(n_fock, 2);
        const EigenSystem low = herm_eig_lowest(build_HR(p, cfg), 1);
        p.omega_mu = omega_mu_of(low.values(0), n_d, l);
    }
    return build_dressed(p, n_fock, M);
}

} // namespace rabicrit
