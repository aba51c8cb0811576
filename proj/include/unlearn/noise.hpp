#pragma once

// Symmetric log-concave noise models for the one-dimensional location family.
// Each model exposes its CDF and quantile; all are symmetric about zero.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "unlearn/rng.hpp"
#include "unlearn/special_functions.hpp"

namespace unlearn {

class NoiseModel {
  public:
    enum class Kind { Gaussian, Laplace, Uniform, TabulatedCdf };

    static NoiseModel gaussian(double sigma) {
        if (!(sigma > 0.0)) throw std::invalid_argument("NoiseModel: sigma must be > 0");
        NoiseModel m;
        m.kind_ = Kind::Gaussian;
        m.scale_ = sigma;
        return m;
    }

    static NoiseModel laplace(double scale) {
        if (!(scale > 0.0)) throw std::invalid_argument("NoiseModel: scale must be > 0");
        NoiseModel m;
        m.kind_ = Kind::Laplace;
        m.scale_ = scale;
        return m;
    }

    static NoiseModel uniform(double half_width) {
        if (!(half_width > 0.0)) throw std::invalid_argument("NoiseModel: half width must be > 0");
        NoiseModel m;
        m.kind_ = Kind::Uniform;
        m.scale_ = half_width;
        return m;
    }

    /// Tabulated CDF given as (t, F(t)) pairs. The grid must be strictly
    /// increasing in both coordinates and symmetric: F(-t) = 1 - F(t).
    static NoiseModel tabulated(std::vector<std::pair<double, double>> grid) {
        if (grid.size() < 2) throw std::invalid_argument("NoiseModel: tabulated grid needs >= 2 points");
        for (std::size_t i = 1; i < grid.size(); ++i) {
            if (!(grid[i].first > grid[i - 1].first) || !(grid[i].second > grid[i - 1].second))
                throw std::invalid_argument("NoiseModel: tabulated grid must be strictly increasing");
        }
        for (const auto& [t, F] : grid) {
            if (F < 0.0 || F > 1.0)
                throw std::invalid_argument("NoiseModel: tabulated CDF values must lie in [0,1]");
        }
        NoiseModel m;
        m.kind_ = Kind::TabulatedCdf;
        m.grid_ = std::move(grid);
        return m;
    }

    Kind kind() const { return kind_; }
    double scale() const { return scale_; }
    const std::vector<std::pair<double, double>>& grid() const { return grid_; }

    double cdf(double t) const {
        switch (kind_) {
            case Kind::Gaussian:
                return norm_cdf(t / scale_);
            case Kind::Laplace:
                return t < 0.0 ? 0.5 * std::exp(t / scale_) : 1.0 - 0.5 * std::exp(-t / scale_);
            case Kind::Uniform: {
                if (t <= -scale_) return 0.0;
                if (t >= scale_) return 1.0;
                return 0.5 * (t / scale_ + 1.0);
            }
            case Kind::TabulatedCdf: {
                if (t <= grid_.front().first) return grid_.front().second;
                if (t >= grid_.back().first) return grid_.back().second;
                auto it = std::upper_bound(grid_.begin(), grid_.end(), t,
                                           [](double v, const auto& p) { return v < p.first; });
                const auto& [t1, f1] = *it;
                const auto& [t0, f0] = *(it - 1);
                return f0 + (f1 - f0) * (t - t0) / (t1 - t0);
            }
        }
        return 0.0;
    }

    /// Generalized quantile. Monotone linear interpolation on tabulated
    /// grids, with a bisection fallback when interpolation misbehaves.
    double quantile(double u) const {
        if (u < 0.0 || u > 1.0) throw std::domain_error("NoiseModel::quantile: u outside [0,1]");
        switch (kind_) {
            case Kind::Gaussian:
                return scale_ * norm_quantile(u);
            case Kind::Laplace:
                if (u == 0.0) return -std::numeric_limits<double>::infinity();
                if (u == 1.0) return std::numeric_limits<double>::infinity();
                return u < 0.5 ? scale_ * std::log(2.0 * u) : -scale_ * std::log(2.0 * (1.0 - u));
            case Kind::Uniform:
                return scale_ * (2.0 * u - 1.0);
            case Kind::TabulatedCdf: {
                if (u <= grid_.front().second) return grid_.front().first;
                if (u >= grid_.back().second) return grid_.back().first;
                auto it = std::upper_bound(grid_.begin(), grid_.end(), u,
                                           [](double v, const auto& p) { return v < p.second; });
                const auto& [t1, f1] = *it;
                const auto& [t0, f0] = *(it - 1);
                double t = t0 + (t1 - t0) * (u - f0) / (f1 - f0);
                if (!(cdf(t) >= f0 && cdf(t) <= f1)) {
                    // Interpolation fell outside the bracket; bisect instead.
                    double lo = t0, hi = t1;
                    for (int i = 0; i < 200 && hi - lo > 1e-14 * (1.0 + std::abs(lo)); ++i) {
                        const double mid = 0.5 * (lo + hi);
                        (cdf(mid) < u ? lo : hi) = mid;
                    }
                    t = 0.5 * (lo + hi);
                }
                return t;
            }
        }
        return 0.0;
    }

    double sample(Rng& rng) const {
        switch (kind_) {
            case Kind::Gaussian:
                return scale_ * rng.normal();
            case Kind::Laplace:
                return rng.laplace(scale_);
            case Kind::Uniform:
                return rng.uniform(-scale_, scale_);
            case Kind::TabulatedCdf:
                return quantile(rng.uniform());
        }
        return 0.0;
    }

    bool same_as(const NoiseModel& other) const {
        if (kind_ != other.kind_) return false;
        if (kind_ == Kind::TabulatedCdf) return grid_ == other.grid_;
        return scale_ == other.scale_;
    }

  private:
    Kind kind_ = Kind::Gaussian;
    double scale_ = 1.0;
    std::vector<std::pair<double, double>> grid_;
};

} // namespace unlearn
