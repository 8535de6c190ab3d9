#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "rabicrit/hermite.hpp"

using namespace rabicrit;

namespace {

// Oracle: explicit coefficient sum H_n(x) = n! sum_m (-1)^m (2x)^{n-2m} / (m! (n-2m)!)
double hermite_coefficient_sum(int n, double x) {
    double sum = 0.0;
    for (int m = 0; 2 * m <= n; ++m) {
        const double term = std::pow(-1.0, m) * std::pow(2.0 * x, n - 2 * m) /
                            (std::tgamma(m + 1.0) * std::tgamma(n - 2 * m + 1.0));
        sum += term;
    }
    return sum * std::tgamma(n + 1.0);
}

} // namespace

TEST_CASE("hermite basics") {
    REQUIRE(hermite(0, 3.7) == 1.0);
    REQUIRE(hermite(1, 0.5) == Catch::Approx(1.0));
    REQUIRE(hermite(2, 0.0) == Catch::Approx(-2.0));
    REQUIRE(hermite(3, 1.0) == Catch::Approx(-4.0));  // 8x^3 - 12x
}

TEST_CASE("hermite matches the coefficient-sum oracle") {
    // frozen value from the oracle: H_10(1.3) = -66123.413033...
    REQUIRE(hermite(10, 1.3) == Catch::Approx(-66123.413033).epsilon(1e-9));
    for (int n : {4, 7, 10, 13, 16}) {
        for (double x : {-2.1, -0.3, 0.9, 1.3, 3.4}) {
            const double oracle = hermite_coefficient_sum(n, x);
            REQUIRE(hermite(n, x) == Catch::Approx(oracle).epsilon(1e-9));
        }
    }
}

TEST_CASE("derivative identity H_n'(x) = 2 n H_{n-1}(x)") {
    const double h = 1e-6;
    for (int n = 1; n <= 30; ++n) {
        for (double x : {-1.7, 0.4, 2.2}) {
            const double fd = (hermite(n, x + h) - hermite(n, x - h)) / (2.0 * h);
            const double rhs = 2.0 * n * hermite(n - 1, x);
            if (std::abs(rhs) > 1e-8)
                REQUIRE(fd == Catch::Approx(rhs).epsilon(1e-4));
        }
    }
}

TEST_CASE("log form survives where the plain value overflows") {
    // H_200(40) ~ (2x)^200 = 80^200, far beyond double range
    const LogScaled big = hermite_log(200, 40.0);
    REQUIRE(big.sign != 0);
    REQUIRE(big.log_abs > std::log(std::numeric_limits<double>::max()));
    REQUIRE_THROWS_AS(hermite(200, 40.0), numeric_error);

    // log form agrees with the plain value in the representable regime
    const LogScaled mid = hermite_log(24, 2.5);
    REQUIRE(mid.value() == Catch::Approx(hermite(24, 2.5)).epsilon(1e-12));
}

TEST_CASE("order range is enforced") {
    REQUIRE_NOTHROW(hermite_log(hermite_max_order, 1.0));
    REQUIRE_THROWS_AS(hermite_log(hermite_max_order + 1, 1.0), contract_error);
    REQUIRE_THROWS_AS(hermite_log(-1, 1.0), contract_error);
}
