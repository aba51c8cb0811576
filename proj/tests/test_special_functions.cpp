#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "oracles.hpp"
#include "unlearn/special_functions.hpp"

using namespace unlearn;

TEST_CASE("norm_cdf matches the high-precision reference") {
    for (double x = -8.0; x <= 8.0; x += 0.0625) {
        const double ref = static_cast<double>(oracle::norm_cdf_hp(x));
        REQUIRE(norm_cdf(x) == Catch::Approx(ref).margin(1e-15));
    }
    REQUIRE(norm_cdf(0.0) == 0.5);
    REQUIRE(norm_cdf(std::numeric_limits<double>::infinity()) == 1.0);
    REQUIRE(norm_cdf(-std::numeric_limits<double>::infinity()) == 0.0);
}

TEST_CASE("norm_quantile round-trips and matches the reference") {
    for (double p = 0.0005; p < 1.0; p += 0.0007) {
        const double x = norm_quantile(p);
        REQUIRE(norm_cdf(x) == Catch::Approx(p).margin(1e-14));
        const double ref = static_cast<double>(oracle::norm_quantile_hp(p));
        REQUIRE(x == Catch::Approx(ref).margin(1e-12));
    }
    REQUIRE(norm_quantile(0.5) == Catch::Approx(0.0).margin(1e-15));
    REQUIRE(std::isinf(norm_quantile(0.0)));
    REQUIRE(std::isinf(norm_quantile(1.0)));
    REQUIRE_THROWS_AS(norm_quantile(-0.1), std::domain_error);
    REQUIRE_THROWS_AS(norm_quantile(1.5), std::domain_error);
}

TEST_CASE("chi-squared CDF agrees with closed forms at k = 1, 2, 4") {
    for (double x = 0.125; x <= 30.0; x += 0.5) {
        // k = 2: 1 - exp(-x/2) exactly.
        REQUIRE(chi_squared_cdf(x, 2) == Catch::Approx(1.0 - std::exp(-0.5 * x)).margin(1e-13));
        // k = 4: 1 - exp(-x/2)(1 + x/2).
        REQUIRE(chi_squared_cdf(x, 4) ==
                Catch::Approx(1.0 - std::exp(-0.5 * x) * (1.0 + 0.5 * x)).margin(1e-13));
        // k = 1: 2 Phi(sqrt(x)) - 1.
        const double ref = 2.0 * static_cast<double>(oracle::norm_cdf_hp(std::sqrt(x))) - 1.0;
        REQUIRE(chi_squared_cdf(x, 1) == Catch::Approx(ref).margin(1e-13));
    }
    REQUIRE(chi_squared_cdf(0.0, 3) == 0.0);
    REQUIRE_THROWS_AS(chi_squared_cdf(1.0, 0.0), std::domain_error);
}

TEST_CASE("noncentral chi-squared reduces to the two-sided normal in d = 1") {
    // ||Z + Delta|| <= t in one dimension: Phi(t - Delta) - Phi(-t - Delta).
    for (double Delta : {0.0, 0.7, 2.5, 5.0}) {
        for (double t = 0.25; t <= 12.0; t += 0.4) {
            const double direct = static_cast<double>(oracle::norm_cdf_hp(t - Delta) -
                                                      oracle::norm_cdf_hp(-t - Delta));
            REQUIRE(noncentral_chi_squared_cdf(t * t, 1, Delta * Delta) ==
                    Catch::Approx(direct).margin(1e-12));
        }
    }
}

TEST_CASE("noncentral chi-squared is monotone and normalized") {
    double prev = 0.0;
    for (double x = 0.5; x < 120.0; x += 0.5) {
        const double v = noncentral_chi_squared_cdf(x, 5, 25.0);
        REQUIRE(v >= prev);
        prev = v;
    }
    // The complement at x = 120 is ~6.3e-9 (heavy Poisson-mixture tail).
    REQUIRE(prev > 1.0 - 1e-8);
    REQUIRE(prev <= 1.0);
}

TEST_CASE("pmf helpers are normalized") {
    double s = 0.0;
    for (long k = 0; k <= 120; ++k) s += std::exp(poisson_log_pmf(k, 7.5));
    REQUIRE(s == Catch::Approx(1.0).margin(1e-12));
    s = 0.0;
    for (long k = 0; k <= 25; ++k) s += std::exp(binomial_log_pmf(k, 25, 0.37));
    REQUIRE(s == Catch::Approx(1.0).margin(1e-12));
}
