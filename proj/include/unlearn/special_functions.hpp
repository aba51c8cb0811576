#pragma once

// Scalar special functions used throughout the library: standard-normal CDF
// and quantile, regularized incomplete gamma, and central / noncentral
// chi-squared CDFs. Double precision, no external dependencies.

#include <cmath>
#include <limits>
#include <stdexcept>

namespace unlearn {

inline constexpr double kInvSqrt2 = 0.70710678118654752440;

/// Standard-normal CDF. Accurate to ~1 ulp via erfc.
inline double norm_cdf(double x) {
    return 0.5 * std::erfc(-x * kInvSqrt2);
}

inline double norm_pdf(double x) {
    static constexpr double inv_sqrt_2pi = 0.39894228040143267794;
    return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

namespace detail {

// Acklam's rational approximation to the normal quantile (~1.15e-9 relative),
// used as the seed for one Halley refinement below.
inline double norm_quantile_seed(double p) {
    static constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                    -2.759285104469687e+02, 1.383577518672690e+02,
                                    -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                    -1.556989798598866e+02, 6.680131188771972e+01,
                                    -1.328068155288572e+01};
    static constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                    -2.400758277161838e+00, -2.549732539343734e+00,
                                    4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                    2.445134137142996e+00, 3.754408661907416e+00};
    static constexpr double p_low = 0.02425;

    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
               (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    }
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

} // namespace detail

/// Standard-normal quantile. Halley-refined to near machine precision.
inline double norm_quantile(double p) {
    if (std::isnan(p) || p < 0.0 || p > 1.0)
        throw std::domain_error("norm_quantile: p must lie in [0,1]");
    if (p == 0.0) return -std::numeric_limits<double>::infinity();
    if (p == 1.0) return std::numeric_limits<double>::infinity();

    double x = detail::norm_quantile_seed(p);
    for (int i = 0; i < 2; ++i) {
        const double e = norm_cdf(x) - p;
        const double u = e / norm_pdf(x);
        x -= u / (1.0 + 0.5 * x * u);
    }
    return x;
}

/// Regularized lower incomplete gamma P(a, x).
inline double gamma_p(double a, double x) {
    if (a <= 0.0 || x < 0.0)
        throw std::domain_error("gamma_p: require a > 0 and x >= 0");
    if (x == 0.0) return 0.0;

    const double log_prefactor = a * std::log(x) - x - std::lgamma(a);
    if (x < a + 1.0) {
        // Power series around x = 0.
        double term = 1.0 / a;
        double sum = term;
        for (int n = 1; n < 10000; ++n) {
            term *= x / (a + n);
            sum += term;
            if (std::abs(term) < std::abs(sum) * 1e-17) break;
        }
        return std::min(1.0, sum * std::exp(log_prefactor));
    }
    // Continued fraction for Q(a, x) (modified Lentz).
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        const double an = -static_cast<double>(i) * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-17) break;
    }
    return 1.0 - std::max(0.0, std::exp(log_prefactor) * h);
}

/// Central chi-squared CDF with k degrees of freedom.
inline double chi_squared_cdf(double x, double k) {
    if (k <= 0.0) throw std::domain_error("chi_squared_cdf: k must be positive");
    if (x <= 0.0) return 0.0;
    return gamma_p(0.5 * k, 0.5 * x);
}

/// Noncentral chi-squared CDF with k degrees of freedom and noncentrality
/// lambda, evaluated as a Poisson mixture of central chi-squared CDFs.
/// The mixture is truncated once its accumulated weight exceeds 1 - 1e-13.
inline double noncentral_chi_squared_cdf(double x, double k, double lambda) {
    if (k <= 0.0) throw std::domain_error("noncentral_chi_squared_cdf: k must be positive");
    if (lambda < 0.0) throw std::domain_error("noncentral_chi_squared_cdf: lambda must be >= 0");
    if (x <= 0.0) return 0.0;
    if (lambda == 0.0) return chi_squared_cdf(x, k);

    const double half_lambda = 0.5 * lambda;
    // Walk outward from the modal Poisson index so large lambda stays cheap.
    const long j0 = static_cast<long>(half_lambda);
    const double log_w0 = j0 * std::log(half_lambda) - half_lambda - std::lgamma(j0 + 1.0);
    double sum = 0.0;
    double weight_acc = 0.0;

    double w = std::exp(log_w0);
    sum += w * chi_squared_cdf(x, k + 2.0 * j0);
    weight_acc += w;

    double w_up = w, w_down = w;
    for (long step = 1; step < 20000 && weight_acc < 1.0 - 1e-13; ++step) {
        const long ju = j0 + step;
        w_up *= half_lambda / static_cast<double>(ju);
        sum += w_up * chi_squared_cdf(x, k + 2.0 * ju);
        weight_acc += w_up;
        const long jd = j0 - step;
        if (jd >= 0) {
            w_down *= static_cast<double>(jd + 1) / half_lambda;
            sum += w_down * chi_squared_cdf(x, k + 2.0 * jd);
            weight_acc += w_down;
        }
    }
    return std::min(1.0, sum);
}

/// log C(n, k) for pmf evaluation.
inline double log_choose(long n, long k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

inline double poisson_log_pmf(long k, double rate) {
    return k * std::log(rate) - rate - std::lgamma(k + 1.0);
}

inline double binomial_log_pmf(long k, long n, double p) {
    if (p <= 0.0) return k == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
    if (p >= 1.0) return k == n ? 0.0 : -std::numeric_limits<double>::infinity();
    return log_choose(n, k) + k * std::log(p) + (n - k) * std::log1p(-p);
}

} // namespace unlearn
