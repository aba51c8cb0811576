#pragma once

// The two removal algorithms (random and selective) with their estimator
// variants, and the high-probability (alpha_M, epsilon_m) certificates
// attached to each configuration.
//
// Certificate bookkeeping: each certificate involves two concentration
// events joined by a union bound, so every per-event constant is evaluated
// at failure level delta/2. The empirical-CDF constant of the selective
// certificate is dkw(n1, delta/2) = sqrt(log(4/delta) / (2 n1)).

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "unlearn/concentration.hpp"
#include "unlearn/linalg.hpp"
#include "unlearn/noise.hpp"
#include "unlearn/rng.hpp"
#include "unlearn/special_functions.hpp"

namespace unlearn {

enum class Algorithm { Random, Selective };
enum class Estimator { WeightedMean, WeightedMedian };

inline const char* to_string(Algorithm a) {
    return a == Algorithm::Random ? "random" : "selective";
}
inline const char* to_string(Estimator e) {
    return e == Estimator::WeightedMean ? "weighted_mean" : "weighted_median";
}

/// Point cloud; every point has the same dimension.
using SampleSet = std::vector<std::vector<double>>;

namespace detail {

inline void check_samples(const SampleSet& s, const char* name) {
    if (s.empty()) throw std::invalid_argument(std::string(name) + ": empty sample set");
    const std::size_t d = s.front().size();
    if (d == 0) throw std::invalid_argument(std::string(name) + ": zero-dimensional samples");
    for (const auto& x : s)
        if (x.size() != d) throw std::invalid_argument(std::string(name) + ": ragged dimensions");
}

inline std::vector<double> mean_point(const SampleSet& s) {
    const std::size_t d = s.front().size();
    std::vector<double> m(d, 0.0);
    for (const auto& x : s)
        for (std::size_t k = 0; k < d; ++k) m[k] += x[k];
    for (auto& v : m) v /= static_cast<double>(s.size());
    return m;
}

inline std::vector<double> median_point(const SampleSet& s) {
    if (s.front().size() != 1)
        throw std::invalid_argument("weighted median: only defined for 1-D samples");
    std::vector<double> vals(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) vals[i] = s[i][0];
    const std::size_t mid = vals.size() / 2;
    std::nth_element(vals.begin(), vals.begin() + mid, vals.end());
    double m = vals[mid];
    if (vals.size() % 2 == 0) {
        std::nth_element(vals.begin(), vals.begin() + mid - 1, vals.begin() + mid);
        m = 0.5 * (m + vals[mid - 1]);
    }
    return {m};
}

} // namespace detail

/// Per-set center estimate: mean, or the coordinate median for 1-D sets.
inline std::vector<double> estimate_center(const SampleSet& s, Estimator est) {
    detail::check_samples(s, "estimate_center");
    return est == Estimator::WeightedMean ? detail::mean_point(s) : detail::median_point(s);
}

namespace detail {

inline std::vector<double> estimate_center(const SampleSet& s, Estimator est) {
    return est == Estimator::WeightedMean ? mean_point(s) : median_point(s);
}

inline std::vector<double> weighted_combination(const std::optional<std::vector<double>>& c1,
                                                std::size_t n1p, const std::vector<double>& c2,
                                                std::size_t n2) {
    if (!c1) return c2; // nothing retained from the unwanted set
    const double w = static_cast<double>(n1p) / static_cast<double>(n1p + n2);
    std::vector<double> out(c2.size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = w * (*c1)[k] + (1.0 - w) * c2[k];
    return out;
}

} // namespace detail

/// Random removal: delete n_r uniformly chosen samples from s1 (without
/// replacement, driven by `seed`), estimate each set's center and return
/// the sample-count-weighted combination.
inline std::vector<double> random_removal_fit(const SampleSet& s1, const SampleSet& s2, long n_r,
                                              std::uint64_t seed,
                                              Estimator estimator = Estimator::WeightedMean) {
    detail::check_samples(s1, "random_removal_fit: s1");
    detail::check_samples(s2, "random_removal_fit: s2");
    if (s1.front().size() != s2.front().size())
        throw std::invalid_argument("random_removal_fit: dimension mismatch between sets");
    if (n_r < 0 || n_r > static_cast<long>(s1.size()))
        throw std::invalid_argument("random_removal_fit: n_r outside [0, n1]");

    // Partial Fisher-Yates: the first n_r slots become the removed indices.
    std::vector<std::uint32_t> idx(s1.size());
    std::iota(idx.begin(), idx.end(), 0u);
    Rng rng(seed);
    for (long i = 0; i < n_r; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.index(idx.size() - i));
        std::swap(idx[i], idx[j]);
    }

    std::optional<std::vector<double>> c1;
    const std::size_t n1p = s1.size() - static_cast<std::size_t>(n_r);
    if (n1p > 0) {
        SampleSet retained;
        retained.reserve(n1p);
        for (std::size_t i = n_r; i < idx.size(); ++i) retained.push_back(s1[idx[i]]);
        c1 = detail::estimate_center(retained, estimator);
    }
    return detail::weighted_combination(c1, n1p, detail::estimate_center(s2, estimator), s2.size());
}

/// Selective removal: score every s1 sample by its distance to the s2
/// center estimate, drop the n_r largest scores (ties broken by ascending
/// original index), and return the weighted combination. Fully
/// deterministic.
inline std::vector<double> selective_removal_fit(const SampleSet& s1, const SampleSet& s2, long n_r,
                                                 Estimator estimator = Estimator::WeightedMean) {
    detail::check_samples(s1, "selective_removal_fit: s1");
    detail::check_samples(s2, "selective_removal_fit: s2");
    if (s1.front().size() != s2.front().size())
        throw std::invalid_argument("selective_removal_fit: dimension mismatch between sets");
    if (n_r < 0 || n_r > static_cast<long>(s1.size()))
        throw std::invalid_argument("selective_removal_fit: n_r outside [0, n1]");

    const std::vector<double> nu_hat = detail::estimate_center(s2, estimator);
    std::vector<std::pair<double, std::size_t>> scored(s1.size());
    for (std::size_t i = 0; i < s1.size(); ++i)
        scored[i] = {euclidean_distance(s1[i], nu_hat), i};
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second; // equal scores: drop the lower index first
    });

    std::optional<std::vector<double>> c1;
    const std::size_t n1p = s1.size() - static_cast<std::size_t>(n_r);
    if (n1p > 0) {
        SampleSet retained;
        retained.reserve(n1p);
        for (std::size_t i = n_r; i < scored.size(); ++i) retained.push_back(s1[scored[i].second]);
        c1 = detail::estimate_center(retained, estimator);
    }
    return detail::weighted_combination(c1, n1p, nu_hat, s2.size());
}

// ---------------------------------------------------------------------------
// Certificates
// ---------------------------------------------------------------------------

/// High-probability unlearning certificate for one algorithm configuration.
/// Both algorithms satisfy alpha_max = Delta - epsilon_min by construction;
/// all distances are in noise-scale units.
struct RemovalCertificate {
    Algorithm algorithm;
    long n1, n2, n_r;
    int d;
    double delta;
    double sigma;
    double Delta; // true separation in sigma units (analysis input)
    Estimator estimator;
    std::string variant; // "displayed" or "tight"
    double epsilon_min;
    double alpha_max;
    std::map<std::string, double> constants;
};

namespace detail {

/// Per-set tail radius at per-event level delta_event, in sigma units.
inline double certificate_gamma(long n, int d, double delta_event, double sigma,
                                const std::optional<NoiseModel>& noise, Estimator estimator) {
    if (estimator == Estimator::WeightedMedian &&
        (!noise || noise->kind() != NoiseModel::Kind::Laplace))
        throw std::invalid_argument("certificate: weighted median is analyzed for Laplace noise only");
    if (!noise || noise->kind() == NoiseModel::Kind::Gaussian) {
        const double scale = noise ? noise->scale() : sigma;
        return gamma_gaussian(n, d, delta_event) * scale / sigma;
    }
    if (d != 1)
        throw std::invalid_argument("certificate: non-Gaussian noise requires d = 1");
    if (estimator == Estimator::WeightedMedian)
        return noise->scale() * gamma_laplace_median(n, delta_event) / sigma;
    return gamma_noise(*noise, n, delta_event) / sigma;
}

inline void check_certificate_inputs(long n1, long n2, long n_r, int d, double delta, double Delta,
                                     double sigma) {
    if (n1 < 1 || n2 < 1) throw std::invalid_argument("certificate: need n1 >= 1 and n2 >= 1");
    if (n_r < 0 || n_r > n1) throw std::invalid_argument("certificate: n_r outside [0, n1]");
    if (d < 1) throw std::invalid_argument("certificate: d must be >= 1");
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("certificate: delta in (0,1)");
    if (!(Delta >= 0.0)) throw std::invalid_argument("certificate: Delta must be >= 0");
    if (!(sigma > 0.0)) throw std::invalid_argument("certificate: sigma must be > 0");
}

} // namespace detail

/// Certificate of the random-removal algorithm:
///   epsilon_m = w Delta + w gamma(n1') + (1-w) gamma(n2),  w = n1'/(n1'+n2),
/// with each gamma at per-event level delta/2. Gaussian configurations use
/// the chi-square norm bound; 1-D noise models substitute their own tail
/// constants (median fits use the Laplace median bound).
inline RemovalCertificate random_removal_certificate(long n1, long n2, long n_r, int d, double delta,
                                                     double Delta, double sigma = 1.0,
                                                     std::optional<NoiseModel> noise = std::nullopt,
                                                     Estimator estimator = Estimator::WeightedMean) {
    detail::check_certificate_inputs(n1, n2, n_r, d, delta, Delta, sigma);
    const long n1p = n1 - n_r;
    const double delta_event = 0.5 * delta;
    const double g2 = detail::certificate_gamma(n2, d, delta_event, sigma, noise, estimator);
    const double g1 =
        n1p > 0 ? detail::certificate_gamma(n1p, d, delta_event, sigma, noise, estimator) : 0.0;
    const double w = static_cast<double>(n1p) / static_cast<double>(n1p + n2);

    RemovalCertificate cert;
    cert.algorithm = Algorithm::Random;
    cert.n1 = n1;
    cert.n2 = n2;
    cert.n_r = n_r;
    cert.d = d;
    cert.delta = delta;
    cert.sigma = sigma;
    cert.Delta = Delta;
    cert.estimator = estimator;
    cert.variant = "displayed";
    cert.epsilon_min = w * Delta + w * g1 + (1.0 - w) * g2;
    cert.alpha_max = Delta - cert.epsilon_min;
    cert.constants = {{"weight_unwanted", w},
                      {"gamma_n1_prime", g1},
                      {"gamma_n2", g2},
                      {"per_event_delta", delta_event}};
    return cert;
}

/// Certificate of the selective-removal algorithm. The displayed bound is
///   epsilon_m = w F1^{-1}(n1'/n1 + dkw(n1, delta/2)) / sigma + 2 gamma(n2),
/// and the tight variant replaces 2 gamma(n2) by (1 + w) gamma(n2).
/// Throws when the quantile argument reaches 1 (certificate undefined).
inline RemovalCertificate selective_removal_certificate(
    long n1, long n2, long n_r, int d, double delta, double Delta, double sigma = 1.0,
    std::optional<NoiseModel> noise = std::nullopt, Estimator estimator = Estimator::WeightedMean,
    const std::string& variant = "tight") {
    detail::check_certificate_inputs(n1, n2, n_r, d, delta, Delta, sigma);
    if (variant != "tight" && variant != "displayed")
        throw std::invalid_argument("selective certificate: variant must be 'tight' or 'displayed'");
    const long n1p = n1 - n_r;
    const double delta_event = 0.5 * delta;
    const double q = static_cast<double>(n1p) / static_cast<double>(n1) + dkw(n1, delta_event);
    if (q >= 1.0)
        throw std::invalid_argument(
            "selective certificate: quantile argument n1'/n1 + d(n1,delta) reaches 1");

    const double g2 = detail::certificate_gamma(n2, d, delta_event, sigma, noise, estimator);
    const double w = static_cast<double>(n1p) / static_cast<double>(n1p + n2);

    // Distance quantile of an unwanted sample from the desired center, in
    // sigma units. Non-Gaussian 1-D noise models use their own distance CDF.
    double quantile_sigma_units = 0.0;
    if (n1p > 0) {
        if (!noise || noise->kind() == NoiseModel::Kind::Gaussian) {
            const double scale = noise ? noise->scale() : sigma;
            quantile_sigma_units = f1_inv(q, Delta * sigma / scale, scale, d) / sigma;
        } else {
            const NoiseModel& nm = *noise;
            const double offset = Delta * sigma; // separation in data units
            auto cdf = [&nm, offset](double t) {
                return nm.cdf(t - offset) - nm.cdf(-t - offset);
            };
            double hi = offset + 40.0 * nm.scale();
            for (int i = 0; i < 200 && cdf(hi) < q; ++i) hi *= 2.0;
            double lo = 0.0;
            while (hi - lo > 1e-10) {
                const double mid = 0.5 * (lo + hi);
                (cdf(mid) < q ? lo : hi) = mid;
            }
            quantile_sigma_units = 0.5 * (lo + hi) / sigma;
        }
    }

    RemovalCertificate cert;
    cert.algorithm = Algorithm::Selective;
    cert.n1 = n1;
    cert.n2 = n2;
    cert.n_r = n_r;
    cert.d = d;
    cert.delta = delta;
    cert.sigma = sigma;
    cert.Delta = Delta;
    cert.estimator = estimator;
    cert.variant = variant;
    const double base = w * quantile_sigma_units;
    const double eps_displayed = base + 2.0 * g2;
    const double eps_tight = base + (1.0 + w) * g2;
    cert.epsilon_min = variant == "tight" ? eps_tight : eps_displayed;
    cert.alpha_max = Delta - cert.epsilon_min;
    cert.constants = {{"weight_unwanted", w},
                      {"gamma_n2", g2},
                      {"dkw_n1", dkw(n1, delta_event)},
                      {"quantile_argument", q},
                      {"f1_inverse_sigma_units", quantile_sigma_units},
                      {"epsilon_min_displayed", eps_displayed},
                      {"epsilon_min_tight", eps_tight},
                      {"per_event_delta", delta_event}};
    return cert;
}

// ---------------------------------------------------------------------------
// Selective-vs-random comparison threshold (d = 1, sigma = 1)
// ---------------------------------------------------------------------------

/// Feasibility and minimal separation for the selective algorithm to
/// certify a smaller preservation level than random removal (tight
/// selective variant). Feasible iff n_r > n1 Phi(A) + sqrt(n1 log(2/delta));
/// when feasible, epsilon_m(S) <= epsilon_m(R) holds exactly for all
/// Delta >= Delta_m.
struct ComparisonResult {
    double A;
    double q;
    double n_r_threshold;
    bool feasible;
    std::optional<double> Delta_m;
};

inline ComparisonResult comparison_threshold(long n1, long n2, long n_r, double delta) {
    detail::check_certificate_inputs(n1, n2, n_r, 1, delta, 0.0, 1.0);
    const long n1p = n1 - n_r;
    const double delta_event = 0.5 * delta;
    const double g2 = gamma_gaussian(n2, 1, delta_event);
    const double g1 = n1p > 0 ? gamma_gaussian(n1p, 1, delta_event) : 0.0;

    ComparisonResult out;
    out.A = 2.0 * g2 - g1;
    out.q = static_cast<double>(n1p) / static_cast<double>(n1) + dkw(n1, delta_event);
    out.n_r_threshold = n1 * norm_cdf(out.A) + std::sqrt(n1 * std::log(2.0 / delta));
    out.feasible = static_cast<double>(n_r) > out.n_r_threshold;
    if (out.feasible) {
        const double arg = norm_cdf(out.A) + out.q;
        if (arg < 1.0) {
            out.Delta_m = 0.5 * (out.A + norm_quantile(arg));
        } else {
            out.feasible = false; // quantile undefined: treat as infeasible
        }
    }
    return out;
}

} // namespace unlearn
