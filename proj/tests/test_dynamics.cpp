#include <catch2/catch_amalgamated.hpp>

#include "rabicrit/dynamics.hpp"

using namespace rabicrit;

namespace {

// Brute-force reference: integrate i psi' = [H_0 + f(t) W] psi in the bare
// basis.  Only viable for small ratios and truncations.
struct BareReference {
    Matrix H0;
    Matrix W;
    DriveSpec drive;
    HilbertConfig cfg{2, 3};

    std::vector<Vector> evolve(Vector psi, const std::vector<double>& grid,
                               double rtol) const {
        auto rhs = [&](double t, const Vector& v) -> Vector {
            return Vector(Complex(0, -1) *
                          (H0 * v + drive.envelope(t) * (W * v)));
        };
        OdeOptions opt;
        opt.rtol = rtol;
        opt.atol = 1e-13;
        OdeStats stats;
        std::vector<Vector> out;
        out.push_back(psi);
        for (size_t i = 1; i < grid.size(); ++i) {
            stats = integrate_adaptive(rhs, psi, grid[i - 1], grid[i], opt, stats);
            out.push_back(psi);
        }
        return out;
    }
};

PointConfig small_point() {
    PointConfig cfg;
    cfg.g_c = 0.8;
    cfg.freq_ratio = 20.0;
    cfg.l = 1;
    cfg.n_d = 3;
    cfg.pump_frac = 0.04;
    cfg.n_fock = 10;
    cfg.dressed_m = 30;  // full dimension of the 3 x 10 space
    return cfg;
}

} // namespace

TEST_CASE("undriven state is stationary") {
    PointConfig cfg = small_point();
    DrivenSystem sys = make_point(cfg);
    sys.drive.Omega_p = sys.drive.Omega_s = 0.0;
    const EvolutionRecord rec = evolve_coherent(sys, 50.0);
    for (size_t i = 0; i < rec.t.size(); ++i) {
        REQUIRE(rec.pop_mu0[i] == Catch::Approx(1.0).margin(1e-10));
        REQUIRE(rec.nbar[i] == Catch::Approx(0.0).margin(1e-10));
        REQUIRE(std::abs(rec.norm[i] - 1.0) < 1e-9);
    }
}

TEST_CASE("dressed evolution reproduces the bare-basis dynamics") {
    // full-dimension projection (M = 3 n_fock) must be exact
    const PointConfig cfg = small_point();
    const DrivenSystem sys = make_point(cfg);
    REQUIRE(sys.size() == 30);

    BareReference ref;
    ref.cfg = HilbertConfig(cfg.n_fock, 3);
    ModelParams p = ModelParams::from_gc(cfg.g_c, cfg.freq_ratio);
    p.omega_mu = sys.sub.params.omega_mu;
    ref.H0 = build_H0(p, ref.cfg);
    ref.W = atomic_transition(ref.cfg, Level::mu, Level::g) +
            atomic_transition(ref.cfg, Level::g, Level::mu);
    ref.drive = sys.drive;

    const double horizon = 80.0;
    CoherentOptions copts;
    copts.allow_stroboscopic = false;
    copts.samples = 16;
    copts.rtol = 1e-10;
    const EvolutionRecord rec = evolve_coherent(sys, horizon, copts);

    std::vector<double> grid = rec.t;
    Vector psi0 = Vector::Zero(ref.cfg.dim());
    psi0(ref.cfg.index(Level::mu, 0)) = 1.0;
    const auto bare = ref.evolve(psi0, grid, 1e-10);

    for (size_t i = 0; i < grid.size(); ++i) {
        const double pop_mu0 =
            std::norm(bare[i](ref.cfg.index(Level::mu, 0)));
        const double pop_mu2l =
            std::norm(bare[i](ref.cfg.index(Level::mu, 2 * cfg.l)));
        REQUIRE(rec.pop_mu0[i] == Catch::Approx(pop_mu0).margin(2e-7));
        REQUIRE(rec.pop_mu2l[i] == Catch::Approx(pop_mu2l).margin(2e-7));
    }
}

TEST_CASE("stroboscopic and adaptive paths agree") {
    PointConfig cfg = small_point();
    cfg.dressed_m = 24;
    const DrivenSystem sys = make_point(cfg);
    REQUIRE(sys.periodic);

    const double horizon = 40 * sys.period;
    CoherentOptions direct;
    direct.allow_stroboscopic = false;
    direct.rtol = 1e-10;
    direct.samples = 40;
    const EvolutionRecord a = evolve_coherent(sys, horizon, direct);

    CoherentOptions strobe;
    strobe.min_periods_for_strobe = 1;
    const EvolutionRecord b = evolve_coherent(sys, horizon, strobe);
    REQUIRE(b.method == "stroboscopic");

    // compare at common times (every period: adaptive sampled at multiples)
    for (size_t ia = 0; ia < a.t.size(); ++ia) {
        for (size_t ib = 0; ib < b.t.size(); ++ib)
            if (std::abs(a.t[ia] - b.t[ib]) < 1e-9) {
                REQUIRE(a.pop_mu0[ia] == Catch::Approx(b.pop_mu0[ib]).margin(1e-7));
                REQUIRE(a.pop_mu2l[ia] ==
                        Catch::Approx(b.pop_mu2l[ib]).margin(1e-7));
                REQUIRE(a.nbar[ia] == Catch::Approx(b.nbar[ib]).margin(1e-6));
            }
    }
    REQUIRE(b.max_norm_drift < 1e-8);
}

TEST_CASE("weak-drive transfer matches the Raman three-state oracle") {
    PointConfig cfg;
    cfg.g_c = 0.9;
    cfg.freq_ratio = 1e4;
    cfg.l = 1;
    cfg.n_d = 3;
    cfg.pump_frac = 0.005;
    cfg.n_fock = 128;
    cfg.dressed_m = 24;
    const DrivenSystem sys = make_point(cfg);
    REQUIRE(sys.drive.weak_drive);

    const double xi = sys.triple.xi();
    const double horizon = 1.2 * M_PI / xi;
    const EvolutionRecord rec = evolve_coherent(sys, horizon);

    double peak = 0.0;
    for (double v : rec.pop_mu2l) peak = std::max(peak, v);
    const double oracle =
        std::pow(std::abs(p2l_analytic(sys.triple, M_PI / xi)), 2);
    REQUIRE(peak == Catch::Approx(oracle).epsilon(0.05));

    // nbar at the peak is dominated by 2l real photons in |mu_2l>
    const double nb = nbar_max(rec, M_PI / xi);
    REQUIRE(nb == Catch::Approx(2.0 * cfg.l * oracle).epsilon(0.08));
}

TEST_CASE("nbar_max horizon contract") {
    PointConfig cfg = small_point();
    cfg.dressed_m = 20;
    const DrivenSystem sys = make_point(cfg);
    const EvolutionRecord rec = evolve_coherent(sys, 10.0);
    REQUIRE_THROWS_AS(nbar_max(rec, 20.0), contract_error);
    REQUIRE_NOTHROW(nbar_max(rec, 10.0));
}

TEST_CASE("dissipation-free master equation matches the coherent evolution") {
    PointConfig cfg = small_point();
    cfg.dressed_m = 20;
    const DrivenSystem sys = make_point(cfg);
    DissipationParams none;

    const double horizon = 60.0;
    CoherentOptions copts;
    copts.allow_stroboscopic = false;
    copts.samples = 12;
    copts.rtol = 1e-10;
    const EvolutionRecord coh = evolve_coherent(sys, horizon, copts);

    MasterOptions mopts;
    mopts.samples = 12;
    mopts.rtol = 1e-9;
    const EvolutionRecord dis = master_evolve(sys, none, horizon, mopts);

    for (size_t i = 0; i < coh.t.size(); ++i) {
        REQUIRE(dis.pop_mu0[i] == Catch::Approx(coh.pop_mu0[i]).margin(1e-6));
        REQUIRE(dis.pop_mu2l[i] == Catch::Approx(coh.pop_mu2l[i]).margin(1e-6));
        REQUIRE(std::abs(dis.norm[i] - 1.0) < 1e-6);
    }
}

TEST_CASE("real-photon identity in the output rate") {
    PointConfig cfg = small_point();
    const DrivenSystem sys = make_point(cfg);
    const int l = cfg.l;

    Matrix rho = Matrix::Zero(sys.sub.M, sys.sub.M);
    const int idx = sys.sub.index_of_mu(2 * l);
    rho(idx, idx) = 1.0;
    REQUIRE(phi_out(rho, sys.sub, 0.02) == Catch::Approx(0.02 * 2 * l).epsilon(1e-10));

    Matrix ground = Matrix::Zero(sys.sub.M, sys.sub.M);
    ground(sys.sub.index_of_mu(0), sys.sub.index_of_mu(0)) = 1.0;
    REQUIRE(phi_out(ground, sys.sub, 0.02) == Catch::Approx(0.0).margin(1e-14));
}

TEST_CASE("steady state of the undriven dissipative system is |mu_0>") {
    PointConfig cfg = small_point();
    cfg.dressed_m = 20;
    DrivenSystem sys = make_point(cfg);
    sys.drive.Omega_p = sys.drive.Omega_s = 0.0;
    DissipationParams diss;
    diss.kappa = diss.gamma1 = diss.gamma2 = 0.05;

    // start away from the ground state: |mu_2> population relaxes down
    Matrix rho0 = Matrix::Zero(sys.size(), sys.size());
    rho0(sys.inv_perm[sys.sub.index_of_mu(2)], sys.inv_perm[sys.sub.index_of_mu(2)]) = 1.0;

    const SteadyResult res = steady_state(sys, diss, {}, &rho0);
    REQUIRE(res.converged);
    REQUIRE(res.phi == Catch::Approx(0.0).margin(1e-8));
    const int mu0 = sys.sub.index_of_mu(0);
    REQUIRE(std::real(res.rho(mu0, mu0)) == Catch::Approx(1.0).margin(1e-6));
}

TEST_CASE("steady state is independent of the initial state") {
    PointConfig cfg = small_point();
    cfg.dressed_m = 20;
    cfg.pump_frac = 0.08;
    const DrivenSystem sys = make_point(cfg);
    DissipationParams diss;
    diss.kappa = diss.gamma1 = diss.gamma2 = 0.05;

    const SteadyResult a = steady_state(sys, diss);

    Matrix rho0 = Matrix::Zero(sys.size(), sys.size());
    const int m2 = sys.inv_perm[sys.sub.index_of_mu(2)];
    const int m0 = sys.slot_mu0;
    rho0(m0, m0) = 0.4;
    rho0(m2, m2) = 0.6;
    const SteadyResult b = steady_state(sys, diss, {}, &rho0);

    REQUIRE(a.converged);
    REQUIRE(b.converged);
    REQUIRE(a.phi > 0.0);
    REQUIRE(std::abs(a.phi - b.phi) <= 0.005 * std::max(a.phi, b.phi));
}

TEST_CASE("floquet-averaged steady state agrees with long-time integration") {
    PointConfig cfg = small_point();
    cfg.dressed_m = 20;
    cfg.pump_frac = 0.02;  // weak drive: the secular approximation is clean
    const DrivenSystem sys = make_point(cfg);
    DissipationParams diss;
    diss.kappa = diss.gamma1 = diss.gamma2 = 0.05;

    const SteadyResult lt = steady_state(sys, diss);
    SteadyOptions fopts;
    fopts.method = "floquet-averaged";
    const SteadyResult fl = steady_state(sys, diss, fopts);

    REQUIRE(fl.method == "floquet-averaged");
    REQUIRE(fl.phi == Catch::Approx(lt.phi).epsilon(0.05));
}

TEST_CASE("steady state reports non-convergence with the Phi trace") {
    PointConfig cfg = small_point();
    cfg.dressed_m = 20;
    cfg.pump_frac = 0.08;
    const DrivenSystem sys = make_point(cfg);
    DissipationParams diss;
    diss.kappa = diss.gamma1 = diss.gamma2 = 0.05;
    SteadyOptions opts;
    opts.max_horizon = 3.0 * sys.period;  // far too short
    REQUIRE_THROWS_AS(steady_state(sys, diss, opts), convergence_error);
}
