#pragma once

// Minimal dense SPD helpers for the whitened-coordinate computations.
// Dimensions here are small (statistical parameter spaces), so a plain
// O(d^3) Cholesky is all that is needed.

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace unlearn {

/// Cholesky factor L (row-major lower triangle) of a symmetric
/// positive-definite matrix given row-major. Throws if not SPD.
inline std::vector<double> cholesky_lower(std::span<const double> a, int d) {
    if (d <= 0 || a.size() != static_cast<std::size_t>(d) * d)
        throw std::invalid_argument("cholesky_lower: bad dimensions");
    std::vector<double> L(static_cast<std::size_t>(d) * d, 0.0);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j <= i; ++j) {
            double s = a[static_cast<std::size_t>(i) * d + j];
            for (int k = 0; k < j; ++k)
                s -= L[static_cast<std::size_t>(i) * d + k] * L[static_cast<std::size_t>(j) * d + k];
            if (i == j) {
                if (!(s > 0.0))
                    throw std::invalid_argument("cholesky_lower: matrix is not positive definite");
                L[static_cast<std::size_t>(i) * d + i] = std::sqrt(s);
            } else {
                L[static_cast<std::size_t>(i) * d + j] = s / L[static_cast<std::size_t>(j) * d + j];
            }
        }
    }
    return L;
}

/// Solve L z = b by forward substitution.
inline std::vector<double> solve_lower(std::span<const double> L, int d, std::span<const double> b) {
    if (b.size() != static_cast<std::size_t>(d))
        throw std::invalid_argument("solve_lower: dimension mismatch");
    std::vector<double> z(d);
    for (int i = 0; i < d; ++i) {
        double s = b[i];
        for (int k = 0; k < i; ++k) s -= L[static_cast<std::size_t>(i) * d + k] * z[k];
        z[i] = s / L[static_cast<std::size_t>(i) * d + i];
    }
    return z;
}

inline double euclidean_norm(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

inline double euclidean_distance(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("euclidean_distance: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        s += d * d;
    }
    return std::sqrt(s);
}

/// Mahalanobis distance ||L^{-1}(x - y)|| for a precomputed Cholesky factor.
inline double whitened_distance(std::span<const double> L, int d, std::span<const double> x,
                                std::span<const double> y) {
    if (x.size() != static_cast<std::size_t>(d) || y.size() != static_cast<std::size_t>(d))
        throw std::invalid_argument("whitened_distance: dimension mismatch");
    std::vector<double> diff(d);
    for (int i = 0; i < d; ++i) diff[i] = x[i] - y[i];
    return euclidean_norm(solve_lower(L, d, diff));
}

} // namespace unlearn
