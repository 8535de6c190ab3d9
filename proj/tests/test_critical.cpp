#include <catch2/catch_amalgamated.hpp>

#include "rabicrit/critical.hpp"
#include "rabicrit/matfun.hpp"

using namespace rabicrit;

TEST_CASE("phase classification and branch guards") {
    REQUIRE(critical_quantities(0.4, 100).phase() == Phase::NP);
    REQUIRE(critical_quantities(1.4, 100).phase() == Phase::SP);
    REQUIRE(critical_quantities(1.0, 100).phase() == Phase::CRITICAL);
    REQUIRE_THROWS_AS(critical_quantities(-0.1, 100), std::domain_error);

    const PhasePoint np = critical_quantities(0.5, 100);
    REQUIRE_THROWS_AS(np.alpha(), contract_error);
    REQUIRE_THROWS_AS(np.r_sp(), contract_error);
    const PhasePoint sp = critical_quantities(1.5, 100);
    REQUIRE_THROWS_AS(sp.r_np(), contract_error);
    const PhasePoint crit = critical_quantities(1.0, 100);
    REQUIRE_THROWS_AS(crit.eps_np(), contract_error);
    REQUIRE_THROWS_AS(crit.eps_sp(), contract_error);
}

TEST_CASE("closed-form critical quantities") {
    SECTION("NP at g_c = 0.6: eps = 0.8 exactly, r_np = -ln(0.64)/4") {
        const PhasePoint pt = critical_quantities(0.6, 1e6);
        REQUIRE(pt.eps_np() == Catch::Approx(0.8).epsilon(1e-14));
        REQUIRE(pt.r_np() == Catch::Approx(-0.25 * std::log(0.64)).epsilon(1e-14));
        REQUIRE(pt.r_np() == Catch::Approx(0.11157).margin(5e-6));
    }
    SECTION("SP at g_c = 1.1, ratio 100") {
        // oracle: independent high-precision evaluation of the two formulas
        const PhasePoint pt = critical_quantities(1.1, 100);
        REQUIRE(pt.alpha() == Catch::Approx(3.0965856964).epsilon(1e-9));
        REQUIRE(pt.r_sp() == Catch::Approx(0.2872239880).epsilon(1e-9));
    }
    SECTION("SP at g_c = sqrt(2): eps_sp = sqrt(3)/2") {
        const PhasePoint pt = critical_quantities(std::sqrt(2.0), 50);
        REQUIRE(pt.eps_sp() == Catch::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-12));
    }
    SECTION("branch continuity at the critical point") {
        REQUIRE(critical_quantities(1.0 - 1e-6, 1e4).eps_np() < 1e-2);
        REQUIRE(critical_quantities(1.0 + 1e-6, 1e4).eps_sp() < 1e-2);
        // sqrt(2e-6) and sqrt(4e-6): the closed forms vanish as sqrt(|g_c-1|)
        REQUIRE(critical_quantities(1.0 - 1e-6, 1e4).eps_np() < 1.5e-3);
        REQUIRE(critical_quantities(1.0 + 1e-6, 1e4).eps_sp() < 2.1e-3);
    }
}

TEST_CASE("c2k closed form, NP branch") {
    SECTION("g_c -> 0: only c_0 survives") {
        const PhasePoint pt = critical_quantities(1e-9, 1e6);
        REQUIRE(c2k_closed(0, pt) == Catch::Approx(1.0).margin(1e-12));
        for (int k = 1; k <= 5; ++k) REQUIRE(c2k_closed(k, pt) < 1e-15);
    }
    SECTION("g_c = 0.5, k = 1: |c_2| = 0.0507") {
        const PhasePoint pt = critical_quantities(0.5, 1e6);
        REQUIRE(c2k_closed(1, pt) == Catch::Approx(0.05070243).epsilon(1e-6));
    }
    SECTION("matches squeeze-operator amplitudes") {
        const PhasePoint pt = critical_quantities(0.9, 1e6);
        const Matrix S = squeeze_op(pt.r_np(), 128);
        for (int k = 0; k <= 6; ++k)
            REQUIRE(c2k_closed(k, pt) ==
                    Catch::Approx(std::abs(S(2 * k, 0))).margin(1e-10));
    }
    SECTION("completeness: sum |c_2k|^2 -> 1 at k_max = 200 up to g_c = 0.999") {
        for (double gc : {0.3, 0.9, 0.99, 0.999}) {
            const PhasePoint pt = critical_quantities(gc, 1e6);
            double sum = 0.0;
            for (int k = 0; k <= 200; ++k) {
                const double c = c2k_closed(k, pt);
                sum += c * c;
            }
            REQUIRE(sum >= 1.0 - 1e-6);
            REQUIRE(sum <= 1.0 + 1e-9);
        }
    }
}

TEST_CASE("c2k closed form, SP branch collapses") {
    SECTION("g_c = 1.001 at ratio 1e6: all k <= 4 below 1e-6") {
        const PhasePoint pt = critical_quantities(1.001, 1e6);
        for (int k = 0; k <= 4; ++k) REQUIRE(c2k_closed(k, pt) < 1e-6);
    }
    SECTION("log form reports the astronomically small magnitude") {
        const PhasePoint pt = critical_quantities(1.001, 1e6);
        const LogScaled c0 = c2k_closed_log(0, pt);
        REQUIRE(c0.sign != 0);
        REQUIRE(c0.log_abs < -500.0);
    }
    SECTION("critical point is rejected") {
        const PhasePoint pt = critical_quantities(1.0, 1e6);
        REQUIRE_THROWS_AS(c2k_closed(0, pt), contract_error);
    }
}

TEST_CASE("drive calibration formulas") {
    SECTION("omega_mu placement") {
        REQUIRE(omega_mu_of(-0.5, 2 + 2, 2) == Catch::Approx(-0.5 - 4.25));
        REQUIRE(omega_mu_of(-0.5, 1, 1) == Catch::Approx(-0.5 - 0.25));
        REQUIRE(omega_mu_of(-0.5, 6, 4) == Catch::Approx(-0.5 - 4.25));
        REQUIRE_THROWS_AS(omega_mu_of(-0.5, 1, 2), std::domain_error);
    }
    SECTION("drive frequencies") {
        auto [wp, ws] = drive_frequencies(-0.5, -0.5 - 4.25, 2);
        REQUIRE(wp == Catch::Approx(4.25));
        REQUIRE(ws == Catch::Approx(0.25));
        auto [wp1, ws1] = drive_frequencies(0.0, -3.0, 1);
        REQUIRE(wp1 == Catch::Approx(3.0));
        REQUIRE(ws1 == Catch::Approx(1.0));
        REQUIRE(wp1 - ws1 == Catch::Approx(2.0 * 1));
        REQUIRE_THROWS_AS(drive_frequencies(0.0, -1.0, 2), config_error);
    }
}

TEST_CASE("Raman three-state model") {
    RamanTriple triple;
    triple.c0 = 0.6;
    triple.c2l = 0.3;
    triple.Omega_p = 2e-3;
    triple.Omega_s = 4e-3;

    const double a = std::abs(triple.c0) * triple.Omega_p;
    const double b = std::abs(triple.c2l) * triple.Omega_s;

    SECTION("Xi invariant") {
        REQUIRE(triple.xi() * triple.xi() ==
                Catch::Approx(0.25 * (a * a + b * b)).epsilon(1e-12));
    }
    SECTION("full revival at t = 2 pi / Xi") {
        REQUIRE(std::abs(p2l_analytic(triple, 2.0 * M_PI / triple.xi())) < 1e-10);
    }
    SECTION("symmetric case transfers completely") {
        RamanTriple sym = triple;
        sym.c2l = triple.c0 * triple.Omega_p / triple.Omega_s;
        REQUIRE(std::abs(p2l_analytic(sym, M_PI / sym.xi())) ==
                Catch::Approx(1.0).epsilon(1e-12));
        REQUIRE(nmax_e(sym, 2) == Catch::Approx(4.0).epsilon(1e-12));
    }
    SECTION("bounded transfer: nmax_e <= 2l") {
        for (double ratio : {0.1, 0.5, 1.0, 3.0, 10.0}) {
            RamanTriple t2 = triple;
            t2.c2l = triple.c0 * ratio;
            for (int l : {1, 2, 3, 4}) REQUIRE(nmax_e(t2, l) <= 2.0 * l + 1e-12);
        }
    }
    SECTION("time cap applies when Xi -> 0") {
        RamanTriple dead = triple;
        dead.c0 = 0.0;
        dead.c2l = 0.0;
        REQUIRE(nmax_e(dead, 2, 1e6) == 0.0);
        REQUIRE_THROWS_AS(nmax_e(dead, 2, 0.0), contract_error);
    }
}

TEST_CASE("heff spectrum and dynamics reproduce the analytic amplitude") {
    RamanTriple triple;
    triple.c0 = 0.45;
    triple.c2l = 0.27;
    triple.Omega_p = 1.3e-3;
    triple.Omega_s = 2.6e-3;
    const Matrix h = heff_matrix(triple);
    const double xi = triple.xi();

    SECTION("eigenvalues {-Xi, 0, +Xi}") {
        Eigen::SelfAdjointEigenSolver<Matrix> es(h);
        REQUIRE(es.eigenvalues()(0) == Catch::Approx(-xi).epsilon(1e-10));
        REQUIRE(std::abs(es.eigenvalues()(1)) < 1e-15);
        REQUIRE(es.eigenvalues()(2) == Catch::Approx(xi).epsilon(1e-10));
    }
    SECTION("dark state has eigenvalue zero") {
        Vector dark(3);
        dark << triple.c2l * triple.Omega_s, 0.0, -triple.c0 * triple.Omega_p;
        dark.normalize();
        REQUIRE((h * dark).norm() < 1e-15);
    }
    SECTION("matrix-exponential evolution matches p2l_analytic to 1e-10") {
        Vector mu0 = Vector::Zero(3);
        mu0(0) = 1.0;
        for (double frac : {0.1, 0.35, 0.71, 1.0, 1.62, 2.0}) {
            const double t = frac * M_PI / xi;
            const Matrix U = mat_exp(Complex(0, -1) * t * h);
            const Complex amp = (U * mu0)(2);
            REQUIRE(std::abs(amp - p2l_analytic(triple, t)) < 1e-10);
        }
    }
    SECTION("strong drive is rejected") {
        RamanTriple strong = triple;
        strong.weak_drive = false;
        REQUIRE_THROWS_AS(heff_matrix(strong), contract_error);
    }
}
