#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "unlearn/rng.hpp"
#include "unlearn/tradeoff.hpp"

using namespace unlearn;

namespace {

std::vector<TradeoffCurve> curve_zoo() {
    std::vector<TradeoffCurve> zoo;
    zoo.push_back(TradeoffCurve::identity());
    zoo.push_back(TradeoffCurve::gaussian_shift(0.0));
    zoo.push_back(TradeoffCurve::gaussian_shift(1.0));
    zoo.push_back(TradeoffCurve::gaussian_shift(2.5));
    zoo.push_back(TradeoffCurve::location_shift(NoiseModel::laplace(1.0), 1.3));
    zoo.push_back(TradeoffCurve::location_shift(NoiseModel::uniform(2.0), 1.0));
    zoo.push_back(TradeoffCurve::location_shift(NoiseModel::gaussian(2.0), 3.0));
    zoo.push_back(TradeoffCurve::poisson_pair(1.0, 2.0));
    zoo.push_back(TradeoffCurve::poisson_pair(2.0, 1.0));
    zoo.push_back(TradeoffCurve::poisson_pair(0.5, 5.0));
    zoo.push_back(TradeoffCurve::binomial_pair(1, 0.3, 0.7));
    zoo.push_back(TradeoffCurve::binomial_pair(5, 0.3, 0.7));
    zoo.push_back(TradeoffCurve::binomial_pair(20, 0.6, 0.2));
    zoo.push_back(TradeoffCurve::numeric(detail::poisson_envelope(1.0, 3.0)));
    zoo.push_back(TradeoffCurve::product(
        {TradeoffCurve::poisson_pair(1.0, 2.0), TradeoffCurve::gaussian_shift(1.0)}));
    return zoo;
}

TradeoffCurve tabulated_noise_curve() {
    std::vector<std::pair<double, double>> tab;
    for (int i = 0; i <= 64; ++i) {
        const double t = -4.0 + 8.0 * i / 64.0;
        tab.emplace_back(t, static_cast<double>(oracle::norm_cdf_hp(t)));
    }
    return TradeoffCurve::location_shift(NoiseModel::tabulated(tab), 0.8);
}

void check_class_membership(const TradeoffCurve& curve, double convexity_tol) {
    std::vector<double> vals(201);
    for (int i = 0; i <= 200; ++i) vals[i] = eval_curve(curve, i / 200.0);
    for (int i = 0; i <= 200; ++i) {
        REQUIRE(vals[i] >= -1e-12);
        REQUIRE(vals[i] <= 1.0 - i / 200.0 + 1e-9);
        if (i > 0) REQUIRE(vals[i] <= vals[i - 1] + 1e-10);
    }
    for (int i = 0; i <= 200; ++i) {
        for (int j = i; j <= 200; j += 2) {
            const int m = (i + j) / 2;
            REQUIRE(vals[m] <= 0.5 * (vals[i] + vals[j]) + convexity_tol);
        }
    }
}

} // namespace

TEST_CASE("eval_curve closed-form examples") {
    REQUIRE(eval_curve(TradeoffCurve::gaussian_shift(0.0), 0.3) == Catch::Approx(0.7).margin(1e-15));
    const double phi_m1 = static_cast<double>(oracle::norm_cdf_hp(-1.0L));
    REQUIRE(eval_curve(TradeoffCurve::gaussian_shift(1.0), 0.5) ==
            Catch::Approx(phi_m1).margin(1e-12));
    REQUIRE(eval_curve(TradeoffCurve::binomial_pair(1, 0.4, 0.4), 0.25) ==
            Catch::Approx(0.75).margin(1e-15));
    REQUIRE_THROWS_AS(eval_curve(TradeoffCurve::identity(), -0.01), std::domain_error);
    REQUIRE_THROWS_AS(eval_curve(TradeoffCurve::identity(), 1.01), std::domain_error);
}

TEST_CASE("every constructible curve stays in the trade-off class") {
    for (const auto& curve : curve_zoo()) check_class_membership(curve, 1e-10);
    // A tabulated CDF is a linear interpolation, so its induced curve is
    // convex only up to the grid resolution (only monotonicity is
    // guaranteed for tabulated noise).
    check_class_membership(tabulated_noise_curve(), 2e-3);
}

TEST_CASE("Gaussian curves are monotone in the shift") {
    const double mus[] = {0.0, 0.3, 0.9, 1.7, 3.0, 5.5};
    for (std::size_t k = 0; k + 1 < std::size(mus); ++k) {
        const auto f = TradeoffCurve::gaussian_shift(mus[k]);
        const auto g = TradeoffCurve::gaussian_shift(mus[k + 1]);
        for (int i = 0; i <= 200; ++i) {
            const double x = i / 200.0;
            REQUIRE(eval_curve(f, x) >= eval_curve(g, x) - 1e-12);
        }
        REQUIRE(dominates(g, f) == Dominance::LessEq);
    }
}

TEST_CASE("generalized inverse: examples and Gaussian self-inversion") {
    REQUIRE(invert_curve(TradeoffCurve::identity(), 0.4) == Catch::Approx(0.6).margin(1e-12));

    const auto g1 = TradeoffCurve::gaussian_shift(1.0);
    const double t = eval_curve(g1, 0.37);
    REQUIRE(invert_curve(g1, t) == Catch::Approx(0.37).margin(1e-9));

    const auto g2 = TradeoffCurve::gaussian_shift(2.0);
    for (int i = 0; i <= 100; ++i) {
        const double x = i / 100.0;
        REQUIRE(invert_curve(g2, x) == Catch::Approx(eval_curve(g2, x)).margin(1e-10));
    }
}

TEST_CASE("inverse of a curve with a flat zero tail returns the left edge") {
    // Uniform-noise location curves hit zero strictly before x = 1.
    const auto c = TradeoffCurve::location_shift(NoiseModel::uniform(1.0), 0.5);
    // f(x) = max(0, 0.75 - x): the sublevel set {f <= 0} starts at 0.75.
    REQUIRE(invert_curve(c, 0.0) == Catch::Approx(0.75).margin(1e-9));
    REQUIRE(invert_curve(c, 0.1) == Catch::Approx(0.65).margin(1e-9));
}

TEST_CASE("dominates: Poisson characterization and verdicts") {
    const auto p12 = TradeoffCurve::poisson_pair(1.0, 2.0);
    REQUIRE(dominates(p12, p12) == Dominance::Equal);
    REQUIRE(dominates(TradeoffCurve::poisson_pair(1.0, 4.0), p12) == Dominance::LessEq);
    REQUIRE(dominates(p12, TradeoffCurve::poisson_pair(1.0, 4.0)) == Dominance::GreaterEq);
    REQUIRE(dominates(p12, TradeoffCurve::poisson_pair(2.0, 1.0)) == Dominance::Incomparable);
    // Identity dominates everything.
    REQUIRE(dominates(TradeoffCurve::identity(), p12) == Dominance::GreaterEq);
    REQUIRE(dominates(p12, TradeoffCurve::poisson_pair(3.0, 3.0)) == Dominance::LessEq);
}

TEST_CASE("dominates: location families compare by shift under equal noise") {
    const auto noise = NoiseModel::laplace(1.5);
    const auto f = TradeoffCurve::location_shift(noise, 2.0);
    const auto g = TradeoffCurve::location_shift(noise, 1.0);
    REQUIRE(dominates(f, g) == Dominance::LessEq);
    REQUIRE(dominates(g, f) == Dominance::GreaterEq);
    REQUIRE(dominates(f, f) == Dominance::Equal);
    // Gaussian-noise location curves are Gaussian curves.
    const auto lg = TradeoffCurve::location_shift(NoiseModel::gaussian(2.0), 3.0);
    REQUIRE(dominates(lg, TradeoffCurve::gaussian_shift(1.5)) == Dominance::Equal);
}

TEST_CASE("dominates: grid fallback across families matches pointwise order") {
    const auto f = TradeoffCurve::gaussian_shift(1.0);
    const auto g = TradeoffCurve::poisson_pair(1.0, 2.0);
    const Dominance v = dominates(f, g);
    bool le = true, ge = true;
    for (int i = 0; i <= 200; ++i) {
        const double x = i / 200.0;
        const double fx = eval_curve(f, x), gx = eval_curve(g, x);
        if (fx > gx + 1e-9) le = false;
        if (fx < gx - 1e-9) ge = false;
    }
    const Dominance expected = le && ge   ? Dominance::Equal
                               : le       ? Dominance::LessEq
                               : ge       ? Dominance::GreaterEq
                                          : Dominance::Incomparable;
    REQUIRE(v == expected);
}

TEST_CASE("construct_thinning: examples and agreement with dominates") {
    const auto k1 = construct_thinning(1.0, 4.0, 1.0, 2.0);
    REQUIRE(k1.has_value());
    REQUIRE(k1->s == Catch::Approx(1.0 / 3.0).margin(1e-12));
    REQUIRE(k1->r == Catch::Approx(2.0 / 3.0).margin(1e-12));

    const auto k2 = construct_thinning(1.0, 2.0, 1.0, 2.0);
    REQUIRE(k2.has_value());
    REQUIRE(k2->s == Catch::Approx(1.0).margin(1e-12));
    REQUIRE(k2->r == Catch::Approx(0.0).margin(1e-12));

    REQUIRE_FALSE(construct_thinning(1.0, 2.0, 2.0, 1.0).has_value());
    // Degenerate a = b: kernel exists only when c = d.
    REQUIRE(construct_thinning(2.0, 2.0, 3.0, 3.0).has_value());
    REQUIRE_FALSE(construct_thinning(2.0, 2.0, 1.0, 2.0).has_value());

    Rng rng(7);
    for (int i = 0; i < 400; ++i) {
        const double a = rng.uniform(0.1, 6.0), b = rng.uniform(0.1, 6.0);
        const double c = rng.uniform(0.1, 6.0), d = rng.uniform(0.1, 6.0);
        if (std::abs(a - b) < 1e-6 || std::abs(c - d) < 1e-6) continue;
        const bool kernel = construct_thinning(a, b, c, d).has_value();
        const Dominance v =
            dominates(TradeoffCurve::poisson_pair(a, b), TradeoffCurve::poisson_pair(c, d));
        REQUIRE(kernel == (v == Dominance::LessEq || v == Dominance::Equal));
    }
}

TEST_CASE("tensor: Gaussian closed form, identity absorption, products") {
    const auto g5 = tensor({TradeoffCurve::gaussian_shift(3.0), TradeoffCurve::gaussian_shift(4.0)});
    REQUIRE(g5.get_if<GaussianShiftCurve>() != nullptr);
    REQUIRE(g5.get_if<GaussianShiftCurve>()->mu == 5.0);

    const auto p = TradeoffCurve::poisson_pair(1.0, 2.0);
    const auto same = tensor({p, TradeoffCurve::identity()});
    REQUIRE(same.get_if<PoissonPairCurve>() != nullptr);
    REQUIRE(dominates(same, p) == Dominance::Equal);

    const auto g2 = tensor({TradeoffCurve::gaussian_shift(1.0), TradeoffCurve::gaussian_shift(1.0),
                            TradeoffCurve::gaussian_shift(1.0), TradeoffCurve::gaussian_shift(1.0)});
    REQUIRE(g2.get_if<GaussianShiftCurve>()->mu == Catch::Approx(2.0).margin(1e-15));

    // Order insensitivity for Gaussian factors.
    const auto a = tensor({TradeoffCurve::gaussian_shift(0.6), TradeoffCurve::gaussian_shift(2.2),
                           TradeoffCurve::gaussian_shift(1.1)});
    const auto b = tensor({TradeoffCurve::gaussian_shift(1.1), TradeoffCurve::gaussian_shift(0.6),
                           TradeoffCurve::gaussian_shift(2.2)});
    REQUIRE(a.get_if<GaussianShiftCurve>()->mu ==
            Catch::Approx(b.get_if<GaussianShiftCurve>()->mu).margin(1e-15));

    REQUIRE_THROWS_AS(tensor(std::span<const TradeoffCurve>{}), std::invalid_argument);

    // KL additivity over Gaussian tensors.
    Rng rng(11);
    for (int i = 0; i < 50; ++i) {
        std::vector<TradeoffCurve> factors;
        double kl_sum = 0.0;
        for (int k = 0; k < 4; ++k) {
            const double mu = rng.uniform(0.0, 3.0);
            factors.push_back(TradeoffCurve::gaussian_shift(mu));
            kl_sum += 0.5 * mu * mu;
        }
        REQUIRE(kl_level(tensor(factors)) == Catch::Approx(kl_sum).margin(1e-12));
    }
}

TEST_CASE("product curves evaluated by llr convolution match the product-space envelope") {
    // Independent route: build the 2-D product distributions explicitly and
    // run the exact discrete envelope on the flattened support.
    const double a = 1.0, b = 2.0, c = 1.5, d = 0.8;
    auto [pa, pb] = detail::poisson_pair_pmfs(a, b);
    auto [pc, pd] = detail::poisson_pair_pmfs(c, d);
    std::vector<double> p2, q2;
    for (std::size_t i = 0; i < pa.size(); ++i) {
        for (std::size_t j = 0; j < pc.size(); ++j) {
            p2.push_back(pa[i] * pc[j]);
            q2.push_back(pb[i] * pd[j]);
        }
    }
    const NumericCurve direct = exact_discrete_tof(p2, q2);

    const auto prod = TradeoffCurve::product(
        {TradeoffCurve::poisson_pair(a, b), TradeoffCurve::poisson_pair(c, d)});
    for (int i = 0; i <= 100; ++i) {
        const double x = i / 100.0;
        REQUIRE(eval_curve(prod, x) == Catch::Approx(eval_numeric(direct, x)).margin(1e-9));
    }
}

TEST_CASE("mixed Gaussian-discrete product stays near its Gaussian bracketing") {
    // Sanity for the discretized Gaussian factor: the product of G_1 with an
    // identity-like Poisson pair must reproduce G_1 itself.
    const auto prod = TradeoffCurve::product(
        {TradeoffCurve::gaussian_shift(1.0), TradeoffCurve::poisson_pair(2.0, 2.0)});
    const auto g1 = TradeoffCurve::gaussian_shift(1.0);
    for (int i = 1; i < 100; ++i) {
        const double x = i / 100.0;
        REQUIRE(eval_curve(prod, x) == Catch::Approx(eval_curve(g1, x)).margin(2e-4));
    }
}

TEST_CASE("kl_level closed forms") {
    REQUIRE(kl_level(TradeoffCurve::gaussian_shift(2.0)) == Catch::Approx(2.0).margin(1e-15));
    REQUIRE(kl_level(TradeoffCurve::poisson_pair(1.0, 1.0)) == 0.0);
    const double expected = 2.0 * std::log(2.0) - 1.0;
    REQUIRE(kl_level(TradeoffCurve::poisson_pair(1.0, 2.0)) ==
            Catch::Approx(expected).margin(1e-14));
    REQUIRE(kl_level(TradeoffCurve::poisson_pair(1.0, 2.0)) ==
            Catch::Approx(static_cast<double>(oracle::poisson_kl_sum(1.0L, 2.0L))).margin(1e-12));
    REQUIRE(kl_level(TradeoffCurve::binomial_pair(3, 0.2, 0.6)) ==
            Catch::Approx(3.0 * (0.6 * std::log(3.0) + 0.4 * std::log(0.5))).margin(1e-12));
    REQUIRE_THROWS_AS(kl_level(TradeoffCurve::identity()), std::invalid_argument);
}

TEST_CASE("tv_level closed forms and truncated sums") {
    REQUIRE(tv_level(TradeoffCurve::gaussian_shift(0.0)) == Catch::Approx(0.0).margin(1e-15));
    const double expected = 2.0 * static_cast<double>(oracle::norm_cdf_hp(1.0L)) - 1.0;
    REQUIRE(tv_level(TradeoffCurve::gaussian_shift(2.0)) == Catch::Approx(expected).margin(1e-13));
    REQUIRE(tv_level(TradeoffCurve::poisson_pair(1.0, 1.0)) == 0.0);
    REQUIRE(tv_level(TradeoffCurve::poisson_pair(1.0, 2.0)) ==
            Catch::Approx(static_cast<double>(oracle::poisson_tv_sum(1.0L, 2.0L))).margin(1e-11));
}

TEST_CASE("hellinger_transform endpoints and closed form") {
    REQUIRE(hellinger_transform(3.0, 5.0, 0.0) == Catch::Approx(1.0).margin(1e-12));
    REQUIRE(hellinger_transform(3.0, 5.0, 1.0) == Catch::Approx(1.0).margin(1e-12));
    const double expected = std::exp(-1.5 + std::sqrt(2.0));
    REQUIRE(hellinger_transform(1.0, 2.0, 0.5) == Catch::Approx(expected).margin(1e-14));
    REQUIRE(hellinger_transform(1.0, 2.0, 0.5) ==
            Catch::Approx(static_cast<double>(oracle::poisson_hellinger_sum(1.0L, 2.0L, 0.5L)))
                .margin(1e-12));
}

TEST_CASE("hellinger directions follow the ordering on dominated pairs") {
    Rng rng(23);
    const double t_monotone[] = {0.25, 0.5, 0.75};
    const double t_reversed[] = {-1.0, -0.5, 1.5, 2.0};
    for (int i = 0; i < 100; ++i) {
        const double a = rng.uniform(0.2, 5.0), b = rng.uniform(0.2, 5.0);
        if (std::abs(a - b) < 1e-3) continue;
        const double s = rng.uniform(0.0, 1.0), r = rng.uniform(0.0, 2.0);
        const double c = s * a + r, d = s * b + r;
        if (!(c > 0.0 && d > 0.0)) continue;
        for (double t : t_monotone)
            REQUIRE(hellinger_transform(a, b, t) <= hellinger_transform(c, d, t) + 1e-12);
        for (double t : t_reversed)
            REQUIRE(hellinger_transform(a, b, t) >= hellinger_transform(c, d, t) - 1e-12);
    }
}

TEST_CASE("data-processing consistency of kl and tv with the ordering") {
    Rng rng(31);
    for (int i = 0; i < 200; ++i) {
        const double a = rng.uniform(0.2, 5.0), b = rng.uniform(0.2, 5.0);
        const double c = rng.uniform(0.2, 5.0), d = rng.uniform(0.2, 5.0);
        const auto f = TradeoffCurve::poisson_pair(a, b);
        const auto g = TradeoffCurve::poisson_pair(c, d);
        if (dominates(f, g) == Dominance::LessEq) {
            REQUIRE(kl_level(f) >= kl_level(g) - 1e-10);
            REQUIRE(tv_level(f) >= tv_level(g) - 1e-10);
        }
    }
}

TEST_CASE("exact_discrete_tof: degenerate supports and validation") {
    const std::vector<double> u{0.25, 0.25, 0.25, 0.25};
    const NumericCurve same = exact_discrete_tof(u, u);
    for (int i = 0; i <= 20; ++i) {
        const double x = i / 20.0;
        REQUIRE(eval_numeric(same, x) == Catch::Approx(1.0 - x).margin(1e-12));
    }

    const std::vector<double> p{1.0, 0.0};
    const std::vector<double> q{0.0, 1.0};
    const NumericCurve disjoint = exact_discrete_tof(p, q);
    REQUIRE(eval_numeric(disjoint, 0.0) == Catch::Approx(0.0).margin(1e-12));
    REQUIRE(eval_numeric(disjoint, 0.5) == Catch::Approx(0.0).margin(1e-12));
    REQUIRE(eval_numeric(disjoint, 1.0) == 0.0);

    REQUIRE_THROWS_AS(exact_discrete_tof(std::vector<double>{0.5, 0.4}, std::vector<double>{0.5, 0.5}),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(exact_discrete_tof(std::vector<double>{}, std::vector<double>{}),
                      std::invalid_argument);

    // The envelope is the evaluation path for Poisson pairs; round-trip the
    // two entry points against each other.
    const NumericCurve env = exact_discrete_tof(detail::poisson_pair_pmfs(1.0, 2.0).first,
                                                detail::poisson_pair_pmfs(1.0, 2.0).second);
    const auto pair_curve = TradeoffCurve::poisson_pair(1.0, 2.0);
    for (int i = 0; i <= 100; ++i) {
        const double x = i / 100.0;
        REQUIRE(eval_numeric(env, x) == Catch::Approx(eval_curve(pair_curve, x)).margin(1e-9));
    }
}

TEST_CASE("numeric curve validation rejects malformed input") {
    NumericCurve bad;
    bad.grid = {0.0, 0.7, 0.4, 1.0};
    bad.values = {1.0, 0.5, 0.6, 0.0};
    REQUIRE_THROWS_AS(TradeoffCurve::numeric(bad), std::invalid_argument);
    NumericCurve increasing;
    increasing.grid = {0.0, 0.5, 1.0};
    increasing.values = {0.2, 0.6, 0.0};
    REQUIRE_THROWS_AS(TradeoffCurve::numeric(increasing), std::invalid_argument);
}

TEST_CASE("check_unlearning: Gaussian family examples") {
    const std::vector<double> eye{1.0};
    // p = q1 with identity preservation baseline always preserves.
    {
        const auto removal = gaussian_pair_curve(std::vector<double>{0.0}, std::vector<double>{3.0}, eye, 1);
        const auto preservation = gaussian_pair_curve(std::vector<double>{0.0}, std::vector<double>{0.0}, eye, 1);
        const auto verdict = check_unlearning(removal, TradeoffCurve::gaussian_shift(2.0),
                                              preservation, TradeoffCurve::identity());
        REQUIRE((verdict.preservation == Dominance::Equal ||
                 verdict.preservation == Dominance::GreaterEq));
    }
    // mu1 = 3, nu1 = 0, p centered at 0.5: holds for (alpha, eps) = (2, 1).
    {
        const auto removal = gaussian_pair_curve(std::vector<double>{0.5}, std::vector<double>{3.0}, eye, 1);
        const auto preservation = gaussian_pair_curve(std::vector<double>{0.5}, std::vector<double>{0.0}, eye, 1);
        const auto verdict = check_unlearning(removal, TradeoffCurve::gaussian_shift(2.0),
                                              preservation, TradeoffCurve::gaussian_shift(1.0));
        REQUIRE(verdict.holds);
    }
    // p centered at 2: removal fails (distance 1 < 2).
    {
        const auto removal = gaussian_pair_curve(std::vector<double>{2.0}, std::vector<double>{3.0}, eye, 1);
        const auto preservation = gaussian_pair_curve(std::vector<double>{2.0}, std::vector<double>{0.0}, eye, 1);
        const auto verdict = check_unlearning(removal, TradeoffCurve::gaussian_shift(2.0),
                                              preservation, TradeoffCurve::gaussian_shift(1.0));
        REQUIRE_FALSE(verdict.holds);
        REQUIRE(verdict.removal == Dominance::GreaterEq);
    }
}

TEST_CASE("check_unlearning_multi conjoins the verdicts") {
    const std::vector<TradeoffCurve> removal{TradeoffCurve::gaussian_shift(2.5),
                                             TradeoffCurve::gaussian_shift(3.0)};
    const std::vector<TradeoffCurve> f_d{TradeoffCurve::gaussian_shift(2.0),
                                         TradeoffCurve::gaussian_shift(2.0)};
    const std::vector<TradeoffCurve> preservation{TradeoffCurve::gaussian_shift(0.5)};
    const std::vector<TradeoffCurve> f_c{TradeoffCurve::gaussian_shift(1.0)};
    const auto verdict = check_unlearning_multi(removal, f_d, preservation, f_c);
    REQUIRE(verdict.holds);

    const std::vector<TradeoffCurve> removal_bad{TradeoffCurve::gaussian_shift(2.5),
                                                 TradeoffCurve::gaussian_shift(1.0)};
    REQUIRE_FALSE(check_unlearning_multi(removal_bad, f_d, preservation, f_c).holds);
}

TEST_CASE("noise model invariants: symmetry of the tabulated CDF") {
    std::vector<std::pair<double, double>> tab;
    for (int i = 0; i <= 64; ++i) {
        const double t = -4.0 + 8.0 * i / 64.0;
        tab.emplace_back(t, static_cast<double>(oracle::norm_cdf_hp(t)));
    }
    const auto noise = NoiseModel::tabulated(tab);
    REQUIRE(noise.cdf(0.0) == Catch::Approx(0.5).margin(1e-12));
    for (double t = 0.1; t < 3.9; t += 0.37)
        REQUIRE(noise.cdf(-t) == Catch::Approx(1.0 - noise.cdf(t)).margin(1e-9));
    // Quantile is the functional inverse on the tabulated range.
    for (double u = 0.05; u < 0.96; u += 0.05)
        REQUIRE(noise.cdf(noise.quantile(u)) == Catch::Approx(u).margin(1e-9));
}
