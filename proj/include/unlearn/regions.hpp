#pragma once

// Exact feasible regions and Pareto frontiers for the supported
// distribution families. Each region bundles a classification, the family's
// separation Delta, the geometric parameters, and an exact membership
// predicate over candidate parameters.
//
// Classification boundaries are evaluated with exact comparisons: a region
// is Empty iff alpha > Delta + eps, and a full ball/interval iff
// Delta - eps >= alpha.

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "unlearn/linalg.hpp"
#include "unlearn/rng.hpp"
#include "unlearn/tradeoff.hpp"

namespace unlearn {

enum class RegionKind {
    Empty,
    FullBall,
    AnnularCap,
    FullInterval,
    SubInterval,
    IntervalSet,
    PoissonInterval,
    SampledSet,
};

inline const char* to_string(RegionKind k) {
    switch (k) {
        case RegionKind::Empty: return "empty";
        case RegionKind::FullBall: return "full_ball";
        case RegionKind::AnnularCap: return "annular_cap";
        case RegionKind::FullInterval: return "full_interval";
        case RegionKind::SubInterval: return "sub_interval";
        case RegionKind::IntervalSet: return "interval_set";
        case RegionKind::PoissonInterval: return "poisson_interval";
        case RegionKind::SampledSet: return "sampled_set";
    }
    return "?";
}

struct Interval {
    double lo, hi;
    bool contains(double x) const { return x >= lo && x <= hi; }
    bool empty() const { return lo > hi; }
};

/// Ball-geometry region (Gaussian, white-noise, Hilbert families): the
/// closed eps-ball around the desired center minus the open alpha-ball
/// around the unwanted one, in the family's own metric.
struct BallRegion {
    RegionKind kind;
    double delta;
    double alpha, eps;
    std::function<bool(std::span<const double>)> member;

    double pareto(double eps_level) const { return delta + eps_level; }
};

/// One-dimensional region represented as a finite union of closed intervals.
struct IntervalRegion {
    RegionKind kind;
    double delta;
    std::vector<Interval> intervals;
    std::function<bool(double)> member;
    std::optional<double> alpha, eps;

    double pareto(double eps_level) const { return delta + eps_level; }
};

/// Outcome of randomized membership search for multi-population Gaussian
/// regions in d >= 2. An empty `members_found` is NOT an emptiness
/// certificate; exact certification is out of scope there.
struct SampledRegion {
    RegionKind kind = RegionKind::SampledSet;
    bool emptiness_certified = false;
    long samples_drawn = 0;
    std::vector<std::vector<double>> members_found;
};

namespace detail {

inline RegionKind classify_ball(double delta, double alpha, double eps, bool one_dimensional) {
    if (alpha > delta + eps) return RegionKind::Empty;
    if (delta - eps >= alpha) return one_dimensional ? RegionKind::FullInterval : RegionKind::FullBall;
    return one_dimensional ? RegionKind::SubInterval : RegionKind::AnnularCap;
}

inline void require_nonneg_levels(double alpha, double eps) {
    if (!(alpha >= 0.0) || !(eps >= 0.0))
        throw std::invalid_argument("region: alpha and eps must be >= 0");
}

} // namespace detail

// ---------------------------------------------------------------------------
// Gaussian family (arbitrary SPD covariance)
// ---------------------------------------------------------------------------

inline BallRegion gaussian_region(std::span<const double> mu1, std::span<const double> nu1,
                                  std::span<const double> covariance, int dim, double alpha,
                                  double eps) {
    detail::require_nonneg_levels(alpha, eps);
    if (mu1.size() != static_cast<std::size_t>(dim) || nu1.size() != static_cast<std::size_t>(dim))
        throw std::invalid_argument("gaussian_region: center dimension mismatch");
    const auto L = cholesky_lower(covariance, dim);
    const double delta = whitened_distance(L, dim, mu1, nu1);

    BallRegion out;
    out.kind = detail::classify_ball(delta, alpha, eps, false);
    out.delta = delta;
    out.alpha = alpha;
    out.eps = eps;
    out.member = [L, dim, mu1v = std::vector<double>(mu1.begin(), mu1.end()),
                  nu1v = std::vector<double>(nu1.begin(), nu1.end()), alpha,
                  eps](std::span<const double> mu) {
        const double a = whitened_distance(L, dim, mu1v, mu);
        const double e = whitened_distance(L, dim, nu1v, mu);
        return a >= alpha && e <= eps;
    };
    return out;
}

inline std::vector<double> identity_matrix(int dim) {
    std::vector<double> m(static_cast<std::size_t>(dim) * dim, 0.0);
    for (int i = 0; i < dim; ++i) m[static_cast<std::size_t>(i) * dim + i] = 1.0;
    return m;
}

inline std::vector<double> isotropic_matrix(int dim, double variance) {
    if (!(variance > 0.0)) throw std::invalid_argument("isotropic_matrix: variance must be > 0");
    std::vector<double> m = identity_matrix(dim);
    for (int i = 0; i < dim; ++i) m[static_cast<std::size_t>(i) * dim + i] = variance;
    return m;
}

// ---------------------------------------------------------------------------
// One-dimensional location family
// ---------------------------------------------------------------------------

/// Region of the 1-D location family. The geometry depends only on the
/// shifts, not on the (symmetric log-concave) noise model. In the middle
/// regime the region is the eps-interval minus the open alpha-interval
/// around mu1; when the removal interval sits strictly inside the
/// preservation one this set difference has two pieces.
inline IntervalRegion location1d_region(double mu1, double nu1, double alpha, double eps) {
    detail::require_nonneg_levels(alpha, eps);
    const double delta = std::abs(mu1 - nu1);

    IntervalRegion out;
    out.kind = detail::classify_ball(delta, alpha, eps, true);
    out.delta = delta;
    out.alpha = alpha;
    out.eps = eps;
    if (out.kind == RegionKind::FullInterval) {
        out.intervals = {{nu1 - eps, nu1 + eps}};
    } else if (out.kind == RegionKind::SubInterval) {
        if (alpha == 0.0) {
            out.intervals = {{nu1 - eps, nu1 + eps}};
        } else {
            const Interval left{nu1 - eps, std::min(nu1 + eps, mu1 - alpha)};
            const Interval right{std::max(nu1 - eps, mu1 + alpha), nu1 + eps};
            if (!left.empty()) out.intervals.push_back(left);
            if (!right.empty()) out.intervals.push_back(right);
        }
    }
    out.member = [mu1, nu1, alpha, eps](double mu) {
        return std::abs(mu - mu1) >= alpha && std::abs(mu - nu1) <= eps;
    };
    return out;
}

// ---------------------------------------------------------------------------
// Multiple unwanted / retained populations
// ---------------------------------------------------------------------------

/// 1-D multi-population region: the intersection of all preservation
/// intervals minus the union of open removal intervals, as up to two closed
/// intervals.
inline IntervalRegion multi_region_1d(std::span<const double> mus, std::span<const double> alphas,
                                      std::span<const double> nus, std::span<const double> epss) {
    if (mus.empty() || nus.empty() || mus.size() != alphas.size() || nus.size() != epss.size())
        throw std::invalid_argument("multi_region_1d: empty or mismatched population lists");
    for (double a : alphas) detail::require_nonneg_levels(a, 0.0);
    for (double e : epss) detail::require_nonneg_levels(0.0, e);

    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < nus.size(); ++j) {
        lo = std::max(lo, nus[j] - epss[j]);
        hi = std::min(hi, nus[j] + epss[j]);
    }
    double cut_lo = std::numeric_limits<double>::infinity();  // min_i (mu_i - alpha_i)
    double cut_hi = -std::numeric_limits<double>::infinity(); // max_i (mu_i + alpha_i)
    for (std::size_t i = 0; i < mus.size(); ++i) {
        cut_lo = std::min(cut_lo, mus[i] - alphas[i]);
        cut_hi = std::max(cut_hi, mus[i] + alphas[i]);
    }

    IntervalRegion out;
    out.delta = std::abs(mus[0] - nus[0]);
    if (lo <= hi) {
        if (cut_lo >= cut_hi) {
            out.intervals = {{lo, hi}}; // the removal cut is vacuous
        } else {
            if (lo <= std::min(hi, cut_lo)) out.intervals.push_back({lo, std::min(hi, cut_lo)});
            if (std::max(lo, cut_hi) <= hi) out.intervals.push_back({std::max(lo, cut_hi), hi});
        }
    }
    out.kind = out.intervals.empty() ? RegionKind::Empty : RegionKind::IntervalSet;
    out.member = [mv = std::vector<double>(mus.begin(), mus.end()),
                  av = std::vector<double>(alphas.begin(), alphas.end()),
                  nv = std::vector<double>(nus.begin(), nus.end()),
                  ev = std::vector<double>(epss.begin(), epss.end())](double mu) {
        for (std::size_t i = 0; i < mv.size(); ++i)
            if (!(std::abs(mu - mv[i]) >= av[i])) return false;
        for (std::size_t j = 0; j < nv.size(); ++j)
            if (!(std::abs(mu - nv[j]) <= ev[j])) return false;
        return true;
    };
    return out;
}

/// Exact membership in the multi-population Gaussian region (conjunction of
/// ball constraints in whitened coordinates).
inline bool multi_gaussian_member(std::span<const double> mu,
                                  std::span<const std::vector<double>> mus,
                                  std::span<const double> alphas,
                                  std::span<const std::vector<double>> nus,
                                  std::span<const double> epss, std::span<const double> covariance,
                                  int dim) {
    if (mus.size() != alphas.size() || nus.size() != epss.size() || mus.empty() || nus.empty())
        throw std::invalid_argument("multi_gaussian_member: mismatched population lists");
    const auto L = cholesky_lower(covariance, dim);
    for (std::size_t i = 0; i < mus.size(); ++i)
        if (!(whitened_distance(L, dim, mu, mus[i]) >= alphas[i])) return false;
    for (std::size_t j = 0; j < nus.size(); ++j)
        if (!(whitened_distance(L, dim, mu, nus[j]) <= epss[j])) return false;
    return true;
}

/// Randomized membership search over the bounding box of the preservation
/// balls (in whitened coordinates). Deterministic for a fixed seed and
/// budget. Finding no member certifies nothing.
inline SampledRegion multi_gaussian_sample_region(std::span<const std::vector<double>> mus,
                                                  std::span<const double> alphas,
                                                  std::span<const std::vector<double>> nus,
                                                  std::span<const double> epss,
                                                  std::span<const double> covariance, int dim,
                                                  long sample_budget, std::uint64_t seed) {
    if (sample_budget < 1) throw std::invalid_argument("multi_gaussian_sample_region: budget >= 1");
    const auto L = cholesky_lower(covariance, dim);

    // Bounding box of the intersection of preservation balls, coordinatewise
    // in whitened space.
    std::vector<double> box_lo(dim, -std::numeric_limits<double>::infinity());
    std::vector<double> box_hi(dim, std::numeric_limits<double>::infinity());
    for (std::size_t j = 0; j < nus.size(); ++j) {
        const auto w = solve_lower(L, dim, nus[j]);
        for (int k = 0; k < dim; ++k) {
            box_lo[k] = std::max(box_lo[k], w[k] - epss[j]);
            box_hi[k] = std::min(box_hi[k], w[k] + epss[j]);
        }
    }
    SampledRegion out;
    out.samples_drawn = sample_budget;
    for (int k = 0; k < dim; ++k)
        if (box_lo[k] > box_hi[k]) return out; // disjoint boxes: nothing to search

    Rng rng(seed);
    std::vector<double> w(dim), x(dim);
    for (long s = 0; s < sample_budget; ++s) {
        for (int k = 0; k < dim; ++k) w[k] = rng.uniform(box_lo[k], box_hi[k]);
        // Map back: x = L w.
        for (int i_ = 0; i_ < dim; ++i_) {
            double acc = 0.0;
            for (int k = 0; k <= i_; ++k) acc += L[static_cast<std::size_t>(i_) * dim + k] * w[k];
            x[i_] = acc;
        }
        if (multi_gaussian_member(x, mus, alphas, nus, epss, covariance, dim))
            out.members_found.push_back(x);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Poisson family
// ---------------------------------------------------------------------------

namespace detail {

/// Membership in the Poisson feasible set via the characterization of the
/// Blackwell order between Poisson pairs.
inline bool poisson_member_check(double mu, double mu1, double nu1, double alpha, double eps) {
    return mu > 0.0 && poisson_le(mu, mu1, 1.0, alpha) && poisson_le(1.0, eps, mu, nu1);
}

} // namespace detail

/// Feasible interval of the Poisson family with baselines at rates
/// (1, alpha) and (1, eps). The four (alpha, eps) quadrants around 1 each
/// have their own closed-form endpoints; alpha = 1 and eps = 1 are rejected
/// (callers probe 1 +- 1e-9 instead).
inline IntervalRegion poisson_region(double mu1, double nu1, double alpha, double eps) {
    if (!(mu1 > 0.0 && nu1 > 0.0 && alpha > 0.0 && eps > 0.0))
        throw std::invalid_argument("poisson_region: all parameters must be > 0");
    if (alpha == 1.0 || eps == 1.0)
        throw std::invalid_argument("poisson_region: alpha = 1 and eps = 1 are excluded");

    double lo, hi;
    if (alpha > 1.0 && eps > 1.0) {
        lo = std::max(nu1 / eps, nu1 - eps + 1.0);
        hi = std::min({nu1, mu1 / alpha, mu1 - alpha + 1.0});
    } else if (alpha > 1.0 && eps < 1.0) {
        lo = nu1;
        hi = std::min({mu1 / alpha, mu1 - alpha + 1.0, nu1 / eps, nu1 + 1.0 - eps});
    } else if (alpha < 1.0 && eps > 1.0) {
        lo = std::max({mu1 / alpha, mu1 + 1.0 - alpha, nu1 / eps, nu1 - eps + 1.0});
        hi = nu1;
    } else {
        lo = std::max({mu1 / alpha, mu1 + 1.0 - alpha, nu1});
        hi = std::min(nu1 / eps, nu1 + 1.0 - eps);
    }

    IntervalRegion out;
    out.delta = std::abs(mu1 - nu1);
    out.alpha = alpha;
    out.eps = eps;
    if (lo > hi) {
        out.kind = RegionKind::Empty;
    } else {
        out.kind = RegionKind::PoissonInterval;
        out.intervals = {{lo, hi}};
    }
    out.member = [mu1, nu1, alpha, eps, iv = Interval{lo, hi}](double mu) {
        return !iv.empty() && iv.contains(mu) &&
               detail::poisson_member_check(mu, mu1, nu1, alpha, eps);
    };
    return out;
}

/// Half-open alpha interval of the Poisson Pareto table.
struct AlphaInterval {
    double lo, hi;
    bool lo_closed, hi_closed;
    bool empty() const { return lo > hi || (lo == hi && !(lo_closed && hi_closed)); }
};

/// Allowed removal levels alpha for a fixed preservation level eps != 1:
/// up to two intervals around alpha = 1, empty pieces dropped.
inline std::vector<AlphaInterval> poisson_pareto(double mu1, double nu1, double eps) {
    if (!(mu1 > 0.0 && nu1 > 0.0 && eps > 0.0))
        throw std::invalid_argument("poisson_pareto: parameters must be > 0");
    if (eps == 1.0) throw std::invalid_argument("poisson_pareto: eps = 1 is excluded");

    std::vector<AlphaInterval> out;
    if (eps > 1.0) {
        const double L_eps = std::max(nu1 / eps, nu1 - eps + 1.0);
        AlphaInterval below{std::max(mu1 / nu1, mu1 + 1.0 - nu1), 1.0, true, false};
        AlphaInterval above{1.0, (L_eps > 0.0)
                                     ? std::min(mu1 / L_eps, mu1 + 1.0 - L_eps)
                                     : -std::numeric_limits<double>::infinity(),
                            false, true};
        if (!below.empty() && below.lo < below.hi) out.push_back(below);
        if (!above.empty() && above.lo < above.hi) out.push_back(above);
    } else {
        const double U_eps = std::min(nu1 / eps, nu1 + 1.0 - eps);
        AlphaInterval below{std::max(mu1 / U_eps, mu1 + 1.0 - U_eps), 1.0, true, false};
        AlphaInterval above{1.0, std::min(mu1 / nu1, mu1 + 1.0 - nu1), false, true};
        if (!below.empty() && below.lo < below.hi) out.push_back(below);
        if (!above.empty() && above.lo < above.hi) out.push_back(above);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Binomial / Bernoulli family
// ---------------------------------------------------------------------------

namespace detail {

/// Exact membership in the Binomial feasible set with baselines
/// T(B(n,1/2), B(n,alpha)) and T(B(n,1/2), B(n,eps)); n drops out of the
/// characterization.
inline bool binomial_member_check(double p, double mu1, double nu1, double alpha, double eps) {
    return p > 0.0 && p < 1.0 && binomial_le(p, mu1, 0.5, alpha) && binomial_le(0.5, eps, p, nu1);
}

/// Largest p in [lo, hi] with pred(p) true, given pred true at lo and
/// monotone (true then false). Bisection to 1e-10.
inline double bisect_upper(const std::function<bool(double)>& pred, double lo, double hi) {
    if (pred(hi)) return hi;
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        (pred(mid) ? lo : hi) = mid;
    }
    return lo;
}

/// Smallest p in [lo, hi] with pred(p) true, given pred true at hi and
/// monotone (false then true).
inline double bisect_lower(const std::function<bool(double)>& pred, double lo, double hi) {
    if (pred(lo)) return lo;
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        (pred(mid) ? hi : lo) = mid;
    }
    return hi;
}

} // namespace detail

/// Feasible set of the Binomial family as a finite union of intervals in
/// (0,1). Interval endpoints are located by bisection on the monotone
/// pieces of the ratio constraints; membership uses the exact
/// characterization. Because relabeling maps B(n,p) to B(n,1-p) without
/// changing the curve, the preservation set is a two-sided interval around
/// nu1 and the removal set keeps both far sides of mu1, so the region can
/// have up to two pieces.
inline IntervalRegion binomial_region(long n, double mu1, double nu1, double alpha, double eps) {
    if (n < 1) throw std::invalid_argument("binomial_region: n must be >= 1");
    for (double v : {mu1, nu1, alpha, eps})
        if (!(v > 0.0 && v < 1.0))
            throw std::invalid_argument("binomial_region: probabilities must lie in (0,1)");

    constexpr double lo_edge = 1e-9, hi_edge = 1.0 - 1e-9;

    // Preservation: T(B(n,1/2), B(n,eps)) <= T(B(n,p), B(n,nu1)) holds at
    // p = nu1 and breaks monotonically as p moves away on either side.
    const auto preservation_ok = [nu1, eps](double p) { return detail::binomial_le(0.5, eps, p, nu1); };
    const Interval pres{detail::bisect_lower(preservation_ok, lo_edge, nu1),
                        detail::bisect_upper(preservation_ok, nu1, hi_edge)};

    // Removal: T(B(n,p), B(n,mu1)) <= T(B(n,1/2), B(n,alpha)) fails at
    // p = mu1 (unless alpha = 1/2, the identity baseline) and holds far
    // enough away on one or both sides.
    const auto removal_ok = [mu1, alpha](double p) { return detail::binomial_le(p, mu1, 0.5, alpha); };
    std::vector<Interval> pieces;
    if (removal_ok(mu1)) {
        // Identity removal baseline: unconstrained.
        if (!pres.empty()) pieces.push_back(pres);
    } else {
        if (removal_ok(lo_edge)) {
            const Interval left{std::max(pres.lo, lo_edge),
                                std::min(pres.hi, detail::bisect_upper(removal_ok, lo_edge, mu1))};
            if (!left.empty()) pieces.push_back(left);
        }
        if (removal_ok(hi_edge)) {
            const Interval right{std::max(pres.lo, detail::bisect_lower(removal_ok, mu1, hi_edge)),
                                 std::min(pres.hi, hi_edge)};
            if (!right.empty()) pieces.push_back(right);
        }
    }

    IntervalRegion out;
    out.delta = std::abs(mu1 - nu1);
    out.alpha = alpha;
    out.eps = eps;
    out.intervals = pieces;
    out.kind = pieces.empty() ? RegionKind::Empty : RegionKind::IntervalSet;
    out.member = [mu1, nu1, alpha, eps](double p) {
        return detail::binomial_member_check(p, mu1, nu1, alpha, eps);
    };
    return out;
}

// ---------------------------------------------------------------------------
// Gaussian white noise model
// ---------------------------------------------------------------------------

namespace detail {

/// Composite-trapezoid L2 norm of (f - g) on the shared uniform grid.
inline double trapezoid_l2_distance(std::span<const double> f, std::span<const double> g) {
    if (f.size() != g.size() || f.size() < 2)
        throw std::invalid_argument("white noise: grids must match and have >= 2 points");
    const std::size_t n = f.size();
    const double h = 1.0 / static_cast<double>(n - 1);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = f[i] - g[i];
        const double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
        acc += w * d * d;
    }
    return std::sqrt(acc * h);
}

} // namespace detail

/// Region of the white-noise model for signals sampled on a shared uniform
/// grid over [0,1]; identical geometry to the Gaussian case with Delta the
/// quadrature L2 distance.
inline BallRegion whitenoise_region(std::span<const double> f, std::span<const double> g,
                                    double alpha, double eps) {
    detail::require_nonneg_levels(alpha, eps);
    const double delta = detail::trapezoid_l2_distance(f, g);

    BallRegion out;
    out.kind = detail::classify_ball(delta, alpha, eps, false);
    out.delta = delta;
    out.alpha = alpha;
    out.eps = eps;
    out.member = [fv = std::vector<double>(f.begin(), f.end()),
                  gv = std::vector<double>(g.begin(), g.end()), alpha,
                  eps](std::span<const double> h) {
        return detail::trapezoid_l2_distance(fv, h) >= alpha &&
               detail::trapezoid_l2_distance(gv, h) <= eps;
    };
    return out;
}

// ---------------------------------------------------------------------------
// Shifted Gaussians on a Hilbert space (spectral form)
// ---------------------------------------------------------------------------

/// Region of the Hilbert-space shifted-Gaussian family, where Delta is the
/// Cameron-Martin norm of the coefficient difference.
inline BallRegion hilbert_region(std::span<const double> lambda, std::span<const double> mu1,
                                 std::span<const double> nu1, double alpha, double eps) {
    detail::require_nonneg_levels(alpha, eps);
    if (lambda.size() != mu1.size() || lambda.size() != nu1.size() || lambda.empty())
        throw std::invalid_argument("hilbert_region: coefficient length mismatch");
    for (double l : lambda)
        if (!(l > 0.0)) throw std::invalid_argument("hilbert_region: eigenvalues must be > 0");

    auto cm_distance = [](std::span<const double> lam, std::span<const double> x,
                          std::span<const double> y) {
        double acc = 0.0;
        for (std::size_t j = 0; j < lam.size(); ++j) {
            const double d = x[j] - y[j];
            acc += d * d / lam[j];
        }
        return std::sqrt(acc);
    };
    const double delta = cm_distance(lambda, mu1, nu1);

    BallRegion out;
    out.kind = detail::classify_ball(delta, alpha, eps, false);
    out.delta = delta;
    out.alpha = alpha;
    out.eps = eps;
    out.member = [lam = std::vector<double>(lambda.begin(), lambda.end()),
                  mu1v = std::vector<double>(mu1.begin(), mu1.end()),
                  nu1v = std::vector<double>(nu1.begin(), nu1.end()), alpha, eps,
                  cm_distance](std::span<const double> h) {
        if (h.size() != lam.size()) throw std::invalid_argument("hilbert member: length mismatch");
        return cm_distance(lam, mu1v, h) >= alpha && cm_distance(lam, nu1v, h) <= eps;
    };
    return out;
}

} // namespace unlearn
