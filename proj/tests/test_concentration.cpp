#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "unlearn/concentration.hpp"
#include "unlearn/rng.hpp"

using namespace unlearn;

namespace {

// Smoke-level tail simulations: 1e4 replications with a 3-standard-error
// margin. The strict 1e5-replication runs live in the acceptance suite.
double simulated_exceedance_gaussian_mean(long n, int d, double radius, long reps,
                                          std::uint64_t seed) {
    Rng rng(seed);
    long exceed = 0;
    std::vector<double> mean(d);
    for (long r = 0; r < reps; ++r) {
        std::fill(mean.begin(), mean.end(), 0.0);
        for (long i = 0; i < n; ++i)
            for (int k = 0; k < d; ++k) mean[k] += rng.normal();
        double norm2 = 0.0;
        for (int k = 0; k < d; ++k) {
            mean[k] /= static_cast<double>(n);
            norm2 += mean[k] * mean[k];
        }
        if (std::sqrt(norm2) >= radius) ++exceed;
    }
    return static_cast<double>(exceed) / static_cast<double>(reps);
}

double three_se(double delta, long reps) {
    return 3.0 * std::sqrt(delta * (1.0 - delta) / static_cast<double>(reps));
}

} // namespace

TEST_CASE("gamma_gaussian: limits, scaling, monotonicity") {
    // Logarithms vanish as delta -> 1.
    REQUIRE(gamma_gaussian(1, 1, 1.0 - 1e-12) == Catch::Approx(1.0).margin(1e-5));
    // Exact 1/sqrt(n) scaling.
    REQUIRE(gamma_gaussian(400, 3, 0.05) ==
            Catch::Approx(gamma_gaussian(100, 3, 0.05) / 2.0).margin(1e-15));
    REQUIRE(gamma_gaussian(200, 2, 0.05) < gamma_gaussian(100, 2, 0.05));
    REQUIRE(gamma_gaussian(100, 5, 0.05) > gamma_gaussian(100, 2, 0.05));
    REQUIRE(gamma_gaussian(100, 2, 0.01) > gamma_gaussian(100, 2, 0.05));
    REQUIRE_THROWS_AS(gamma_gaussian(100, 2, 0.0), std::invalid_argument);
    REQUIRE_THROWS_AS(gamma_gaussian(100, 2, 1.0), std::invalid_argument);
    REQUIRE_THROWS_AS(gamma_gaussian(0, 2, 0.5), std::invalid_argument);
}

TEST_CASE("gamma_gaussian: simulated exceedance within tolerance") {
    const long reps = 10000;
    for (const auto& [n, d, delta] : std::vector<std::tuple<long, int, double>>{
             {100, 1, 0.05}, {100, 5, 0.2}, {400, 2, 0.1}}) {
        const double freq =
            simulated_exceedance_gaussian_mean(n, d, gamma_gaussian(n, d, delta), reps, 42);
        REQUIRE(freq <= delta + three_se(delta, reps));
    }
}

TEST_CASE("dkw: consistency, monotonicity, simulated level") {
    REQUIRE(dkw(1000000000000L, 0.1) < 1e-5);
    REQUIRE(dkw(200, 0.05) > dkw(200, 0.1));

    // Empirical sup-gap of uniform samples against the bound.
    const long n = 200, reps = 10000;
    const double delta = 0.1;
    const double bound = dkw(n, delta);
    Rng rng(43);
    long exceed = 0;
    std::vector<double> u(n);
    for (long r = 0; r < reps; ++r) {
        for (auto& v : u) v = rng.uniform();
        std::sort(u.begin(), u.end());
        double sup = 0.0;
        for (long i = 0; i < n; ++i) {
            sup = std::max(sup, (i + 1.0) / n - u[i]);
            sup = std::max(sup, u[i] - static_cast<double>(i) / n);
        }
        if (sup >= bound) ++exceed;
    }
    REQUIRE(static_cast<double>(exceed) / reps <= delta + three_se(delta, reps));
}

TEST_CASE("gamma_noise: table rows") {
    // Gaussian row at n = 1 is the exact two-sided quantile.
    for (double delta : {0.05, 0.2}) {
        REQUIRE(gamma_noise(NoiseModel::gaussian(1.0), 1, delta) ==
                Catch::Approx(norm_quantile(1.0 - 0.5 * delta)).margin(1e-12));
    }
    REQUIRE(gamma_noise(NoiseModel::gaussian(2.0), 4, 0.1) ==
            Catch::Approx(2.0 * norm_quantile(0.95) / 2.0).margin(1e-12));
    // Uniform row.
    REQUIRE(gamma_noise(NoiseModel::uniform(1.5), 100, 0.1) ==
            Catch::Approx(1.5 * std::sqrt(2.0 * std::log(20.0) / 100.0)).margin(1e-14));
    // Bounded-support row shares the uniform constant.
    REQUIRE(gamma_bounded(1.5, 100, 0.1) ==
            Catch::Approx(gamma_noise(NoiseModel::uniform(1.5), 100, 0.1)).margin(1e-15));
    // Laplace row approaches 2 sqrt(log(2/delta)/n) from above.
    const double delta = 0.1;
    const long n = 100000000;
    const double asymptote = 2.0 * std::sqrt(std::log(2.0 / delta) / n);
    REQUIRE(gamma_noise(NoiseModel::laplace(1.0), n, delta) ==
            Catch::Approx(asymptote).epsilon(1e-3));
    REQUIRE(gamma_noise(NoiseModel::laplace(1.0), n, delta) > asymptote);
    // Tabulated noise carries no registered bound.
    std::vector<std::pair<double, double>> tab{{-1.0, 0.0}, {0.0, 0.5}, {1.0, 1.0}};
    REQUIRE_THROWS_AS(gamma_noise(NoiseModel::tabulated(tab), 10, 0.1), std::invalid_argument);
}

TEST_CASE("gamma_noise: uniform row simulated exceedance") {
    const long n = 100, reps = 10000;
    const double delta = 0.1;
    const double bound = gamma_noise(NoiseModel::uniform(1.0), n, delta);
    Rng rng(44);
    long exceed = 0;
    for (long r = 0; r < reps; ++r) {
        double s = 0.0;
        for (long i = 0; i < n; ++i) s += rng.uniform(-1.0, 1.0);
        if (std::abs(s / n) >= bound) ++exceed;
    }
    REQUIRE(static_cast<double>(exceed) / reps <= delta + three_se(delta, reps));
}

TEST_CASE("gamma_laplace_median: validity window and asymptotics") {
    const double delta = 0.1;
    // Validity boundary: n = ceil(2 log(4/delta)) - 1 is rejected.
    const long n_bad = static_cast<long>(std::ceil(2.0 * std::log(4.0 / delta))) - 1;
    REQUIRE(n_bad % 2 == 1);
    REQUIRE_THROWS_AS(gamma_laplace_median(n_bad, delta), std::invalid_argument);
    REQUIRE_THROWS_AS(gamma_laplace_median(100, delta), std::invalid_argument); // even
    REQUIRE_NOTHROW(gamma_laplace_median(101, delta));

    // The median bound beats the empirical-mean bound for large n.
    for (long n : {1001L, 10001L, 100001L}) {
        REQUIRE(gamma_laplace_median(n, delta) < gamma_noise(NoiseModel::laplace(1.0), n, delta));
        // And tracks sqrt((2/n) log(2/delta)).
        const double asymptote = std::sqrt(2.0 / n * std::log(2.0 / delta));
        REQUIRE(gamma_laplace_median(n, delta) == Catch::Approx(asymptote).epsilon(0.05));
    }
}

TEST_CASE("gamma_laplace_median: simulated exceedance") {
    const long n = 101, reps = 10000;
    const double delta = 0.1;
    const double bound = gamma_laplace_median(n, delta);
    Rng rng(45);
    long exceed = 0;
    std::vector<double> z(n);
    for (long r = 0; r < reps; ++r) {
        for (auto& v : z) v = rng.laplace(1.0);
        std::nth_element(z.begin(), z.begin() + n / 2, z.end());
        if (std::abs(z[n / 2]) >= bound) ++exceed;
    }
    REQUIRE(static_cast<double>(exceed) / reps <= delta + three_se(delta, reps));
}

TEST_CASE("f1_cdf: closed forms, monotonicity, inverse round trips") {
    // Central folded normal in one dimension.
    for (double t : {0.2, 0.9, 2.3}) {
        REQUIRE(f1_cdf(t, 0.0, 1.5, 1) ==
                Catch::Approx(2.0 * norm_cdf(t / 1.5) - 1.0).margin(1e-13));
    }
    // d = 1, sigma = 1, Delta = 5, t = 5.
    const double direct = static_cast<double>(oracle::norm_cdf_hp(0.0L) - oracle::norm_cdf_hp(-10.0L));
    REQUIRE(f1_cdf(5.0, 5.0, 1.0, 1) == Catch::Approx(direct).margin(1e-13));

    for (int d : {1, 3, 10}) {
        for (double Delta : {0.0, 1.0, 5.0}) {
            double prev = -1.0;
            for (double t = 0.25; t <= 14.0; t += 0.25) {
                const double v = f1_cdf(t, Delta, 1.0, d);
                // Strictly increasing until the value saturates in doubles.
                if (v < 1.0 - 1e-13) {
                    REQUIRE(v > prev);
                } else {
                    REQUIRE(v >= prev);
                }
                prev = v;
                const double q = v;
                if (q < 1.0 - 1e-9) // inversion is ill-conditioned where the density vanishes
                    REQUIRE(f1_inv(q, Delta, 1.0, d) == Catch::Approx(t).margin(1e-8));
            }
            // Decreasing in Delta.
            if (Delta > 0.0)
                REQUIRE(f1_cdf(2.0, Delta, 1.0, d) < f1_cdf(2.0, Delta - 0.5, 1.0, d));
        }
    }
    REQUIRE_THROWS_AS(f1_inv(1.0, 1.0, 1.0, 1), std::domain_error);
    REQUIRE_THROWS_AS(f1_cdf(-0.5, 1.0, 1.0, 1), std::invalid_argument);

    // Struct bundle delegates.
    const DistanceCdf F{2.0, 1.0, 3};
    REQUIRE(F.inv(F.cdf(1.7)) == Catch::Approx(1.7).margin(1e-8));
}

TEST_CASE("f1_cdf matches an empirical distance CDF") {
    const int d = 3;
    const double Delta = 1.0, sigma = 1.0;
    const long n = 100000;
    Rng rng(46);
    std::vector<double> dist(n);
    for (long i = 0; i < n; ++i) {
        double norm2 = 0.0;
        for (int k = 0; k < d; ++k) {
            const double z = sigma * rng.normal() + (k == 0 ? Delta * sigma : 0.0);
            norm2 += z * z;
        }
        dist[i] = std::sqrt(norm2);
    }
    std::sort(dist.begin(), dist.end());
    double sup = 0.0;
    for (int g = 1; g < 200; ++g) {
        const double t = 6.0 * g / 200.0;
        const auto it = std::upper_bound(dist.begin(), dist.end(), t);
        const double emp = static_cast<double>(it - dist.begin()) / static_cast<double>(n);
        sup = std::max(sup, std::abs(emp - f1_cdf(t, Delta, sigma, d)));
    }
    REQUIRE(sup < 0.01);
}

TEST_CASE("convention coherence between the two dkw forms") {
    // The selective certificate's d(n, delta) constant equals the
    // lemma-level bound evaluated at delta/2, exactly.
    for (long n : {50L, 1000L}) {
        for (double delta : {0.05, 0.2}) {
            REQUIRE(dkw(n, 0.5 * delta) ==
                    Catch::Approx(std::sqrt(std::log(4.0 / delta) / (2.0 * n))).margin(1e-16));
        }
    }
}
