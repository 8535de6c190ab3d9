#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "rabicrit/eigensystem.hpp"
#include "rabicrit/model.hpp"

using namespace rabicrit;

namespace {

Matrix random_hermitian(int n, std::mt19937& rng) {
    std::normal_distribution<double> dist;
    Matrix A(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) A(i, j) = Complex(dist(rng), dist(rng));
    return 0.5 * (A + Matrix(A.adjoint()));
}

} // namespace

TEST_CASE("diagonal real input returns the sorted diagonal") {
    Matrix H = Matrix::Zero(4, 4);
    H(0, 0) = 3.0; H(1, 1) = -1.0; H(2, 2) = 7.0; H(3, 3) = 0.5;
    const EigenSystem sys = herm_eig(H);
    REQUIRE(sys.values(0) == Catch::Approx(-1.0));
    REQUIRE(sys.values(1) == Catch::Approx(0.5));
    REQUIRE(sys.values(2) == Catch::Approx(3.0));
    REQUIRE(sys.values(3) == Catch::Approx(7.0));
    REQUIRE(sys.real_input);
}

TEST_CASE("decoupled Rabi limit: ground state is |g,0> at zero energy") {
    ModelParams p = ModelParams::from_gc(0.0, 10.0);
    const HilbertConfig cfg(8, 2);
    const EigenSystem sys = herm_eig(build_HR(p, cfg));
    REQUIRE(std::abs(sys.values(0)) < 1e-12);
    Vector g0 = Vector::Zero(cfg.dim());
    g0(cfg.index(Level::g, 0)) = 1.0;
    REQUIRE(std::abs(std::abs(Complex(g0.adjoint() * sys.vectors.col(0))) - 1.0) <
            1e-12);
}

TEST_CASE("gap at g_c = 0.6 matches the closed-form excitation energy") {
    // oracle: eps_np = sqrt(1 - g_c^2) = 0.8 exactly
    ModelParams p = ModelParams::from_gc(0.6, 1e6);
    const HilbertConfig cfg(64, 2);
    const EigenSystem sys = herm_eig_lowest(build_HR(p, cfg), 2);
    REQUIRE(std::abs((sys.values(1) - sys.values(0)) - 0.8) < 1e-3);
}

TEST_CASE("phase convention: largest component real positive") {
    std::mt19937 rng(42);
    const Matrix H = random_hermitian(24, rng);
    const EigenSystem sys = herm_eig(H);
    for (int j = 0; j < sys.size(); ++j) {
        const Vector v = sys.vectors.col(j);
        Eigen::Index imax = 0;
        v.cwiseAbs().maxCoeff(&imax);
        REQUIRE(std::abs(std::imag(v(imax))) < 1e-12);
        REQUIRE(std::real(v(imax)) > 0.0);
    }
}

TEST_CASE("round-trip residual on random Hermitian matrices") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> dims(2, 300);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = dims(rng);
        const Matrix H = random_hermitian(n, rng);
        const EigenSystem sys = herm_eig(H);
        REQUIRE(eig_residual(H, sys) <= 1e-9);
        for (int j = 1; j < n; ++j) REQUIRE(sys.values(j) >= sys.values(j - 1));
    }
}

TEST_CASE("partial and full decompositions agree") {
    std::mt19937 rng(3);
    const Matrix H = random_hermitian(60, rng);
    const EigenSystem full = herm_eig(H);
    const EigenSystem low = herm_eig_lowest(H, 5);
    for (int j = 0; j < 5; ++j) {
        REQUIRE(low.values(j) == Catch::Approx(full.values(j)).margin(1e-10));
        const double overlap =
            std::abs(Complex(full.vectors.col(j).adjoint() * low.vectors.col(j)));
        REQUIRE(overlap == Catch::Approx(1.0).margin(1e-9));
    }
}

TEST_CASE("non-Hermitian input is rejected") {
    Matrix H = Matrix::Zero(3, 3);
    H(0, 1) = 1.0;
    REQUIRE_THROWS_AS(herm_eig(H), contract_error);
}
