#pragma once

// Finite-sample constants behind the removal certificates: Gaussian norm
// tails, the distribution-free empirical-CDF bound, one-dimensional tail
// constants for symmetric log-concave noise, the Laplace median bound, and
// the noncentral distance CDF F1 with its inverse.
//
// Convention: every function here binds its own failure probability, i.e.
// gamma_gaussian(n, d, delta) is exceeded with probability at most delta,
// and dkw(n, delta) bounds the two-sided empirical-CDF deviation at level
// delta. Union-bound splits across events belong to the callers.

#include <cmath>
#include <stdexcept>

#include "unlearn/noise.hpp"
#include "unlearn/special_functions.hpp"

namespace unlearn {

struct TailBudget {
    long n;       // sample count, >= 1
    int d;        // dimension, >= 1
    double delta; // failure probability in (0,1)

    void validate() const {
        if (n < 1) throw std::invalid_argument("TailBudget: n must be >= 1");
        if (d < 1) throw std::invalid_argument("TailBudget: d must be >= 1");
        if (!(delta > 0.0 && delta < 1.0))
            throw std::invalid_argument("TailBudget: delta must lie in (0,1)");
    }
};

/// High-probability radius for the norm of an averaged standard-Gaussian
/// vector: P[ ||mean of n N(0, I_d)|| >= gamma_gaussian(n, d, delta) ] <= delta.
inline double gamma_gaussian(long n, int d, double delta) {
    TailBudget{n, d, delta}.validate();
    const double log_term = std::log(1.0 / delta);
    return std::sqrt((d + 2.0 * std::sqrt(d * log_term) + 2.0 * log_term) / n);
}

/// Distribution-free uniform empirical-CDF deviation bound:
/// P[ sup_t |F_n(t) - F(t)| >= dkw(n, delta) ] <= delta.
inline double dkw(long n, double delta) {
    TailBudget{n, 1, delta}.validate();
    return std::sqrt(std::log(2.0 / delta) / (2.0 * n));
}

/// Two-sided tail radius for the empirical mean of n draws of a symmetric
/// log-concave noise model: P[ |mean| >= gamma_noise(noise, n, delta) ] <= delta.
/// Gaussian noise uses the exact two-sided quantile; Uniform and Laplace use
/// their Hoeffding / Bernstein-type constants. Tabulated noise carries no
/// registered bound and is refused.
inline double gamma_noise(const NoiseModel& noise, long n, double delta) {
    TailBudget{n, 1, delta}.validate();
    const double log_term = std::log(2.0 / delta);
    switch (noise.kind()) {
        case NoiseModel::Kind::Gaussian:
            return noise.scale() * norm_quantile(1.0 - 0.5 * delta) / std::sqrt(static_cast<double>(n));
        case NoiseModel::Kind::Uniform:
            return noise.scale() * std::sqrt(2.0 * log_term / n);
        case NoiseModel::Kind::Laplace:
            return noise.scale() * (2.0 * std::sqrt(n * log_term) + log_term) / n;
        case NoiseModel::Kind::TabulatedCdf:
            throw std::invalid_argument("gamma_noise: no registered tail bound for tabulated noise");
    }
    throw std::logic_error("gamma_noise: unreachable");
}

/// Tail radius for the empirical mean of any noise with support in [-a, a]:
/// P[ |mean| >= gamma_bounded(a, n, delta) ] <= delta.
inline double gamma_bounded(double half_width, long n, double delta) {
    TailBudget{n, 1, delta}.validate();
    if (!(half_width > 0.0)) throw std::invalid_argument("gamma_bounded: half width must be > 0");
    return half_width * std::sqrt(2.0 * std::log(2.0 / delta) / n);
}

/// Two-sided tail radius for the median of n standard-Laplace draws:
/// P[ |median| >= gamma_laplace_median(n, delta) ] <= delta.
/// Requires odd n (the order-statistic argument assumes n = 2k+1) and
/// n > 2 log(4/delta).
inline double gamma_laplace_median(long n, double delta) {
    TailBudget{n, 1, delta}.validate();
    if (n % 2 == 0) throw std::invalid_argument("gamma_laplace_median: n must be odd");
    if (!(static_cast<double>(n) > 2.0 * std::log(4.0 / delta)))
        throw std::invalid_argument("gamma_laplace_median: n must exceed 2 log(4/delta)");
    const double root = std::sqrt(2.0 / n * std::log(2.0 / delta));
    return -std::log1p(-root);
}

/// CDF of the distance ||sigma Z + offset||_2 from a Gaussian sample to a
/// fixed center, where Z ~ N(0, I_d) and Delta = ||offset|| / sigma. For
/// d = 1 this is a two-sided normal probability; for d >= 2 it is the
/// noncentral chi-squared CDF in the squared, rescaled variable.
inline double f1_cdf(double t, double Delta, double sigma, int d) {
    if (!(sigma > 0.0)) throw std::invalid_argument("f1_cdf: sigma must be > 0");
    if (Delta < 0.0) throw std::invalid_argument("f1_cdf: Delta must be >= 0");
    if (d < 1) throw std::invalid_argument("f1_cdf: d must be >= 1");
    if (t < 0.0) throw std::invalid_argument("f1_cdf: t must be >= 0");
    if (t == 0.0) return 0.0;
    const double u = t / sigma;
    if (d == 1) return norm_cdf(u - Delta) - norm_cdf(-u - Delta);
    return noncentral_chi_squared_cdf(u * u, d, Delta * Delta);
}

/// Inverse of f1_cdf in t, by monotone bisection to 1e-10. The initial
/// bracket is widened geometrically if needed. Requires 0 <= q < 1.
inline double f1_inv(double q, double Delta, double sigma, int d) {
    if (!(q >= 0.0 && q < 1.0)) throw std::domain_error("f1_inv: q must lie in [0,1)");
    if (q == 0.0) return 0.0;
    double hi = sigma * (Delta + std::sqrt(static_cast<double>(d)) + 40.0);
    for (int i = 0; i < 200 && f1_cdf(hi, Delta, sigma, d) < q; ++i) hi *= 2.0;
    double lo = 0.0;
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        (f1_cdf(mid, Delta, sigma, d) < q ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

/// Distance CDF bundle used by the selective certificate.
struct DistanceCdf {
    double Delta; // separation in noise units, >= 0
    double sigma; // scale, > 0
    int d;        // dimension, >= 1

    double cdf(double t) const { return f1_cdf(t, Delta, sigma, d); }
    double inv(double q) const { return f1_inv(q, Delta, sigma, d); }
};

} // namespace unlearn
