#pragma once

// Trade-off function algebra: representation, evaluation, generalized
// inversion, Blackwell-order comparison, tensor products, divergence levels
// of baseline pairs, and the exact Neyman-Pearson curve for finite discrete
// distributions.
//
// A trade-off curve f maps a type-I error budget x in [0,1] to the smallest
// achievable type-II error. Every curve here is convex, continuous,
// non-increasing and satisfies f(x) <= 1 - x.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

#include "unlearn/linalg.hpp"
#include "unlearn/noise.hpp"
#include "unlearn/special_functions.hpp"

namespace unlearn {

// ---------------------------------------------------------------------------
// Curve representation
// ---------------------------------------------------------------------------

/// Piecewise-linear curve given by vertices (grid[i], values[i]).
/// The grid is strictly increasing with grid.front() == 0, grid.back() == 1.
struct NumericCurve {
    std::vector<double> grid;
    std::vector<double> values;
};

inline void validate_numeric_curve(const NumericCurve& c) {
    if (c.grid.size() != c.values.size() || c.grid.size() < 2)
        throw std::invalid_argument("NumericCurve: need >= 2 matching grid/value entries");
    if (c.grid.front() != 0.0 || c.grid.back() != 1.0)
        throw std::invalid_argument("NumericCurve: grid must span [0,1]");
    for (std::size_t i = 0; i < c.grid.size(); ++i) {
        if (i > 0 && !(c.grid[i] > c.grid[i - 1]))
            throw std::invalid_argument("NumericCurve: grid must be strictly increasing");
        if (i > 0 && c.values[i] > c.values[i - 1] + 1e-12)
            throw std::invalid_argument("NumericCurve: values must be non-increasing");
        if (c.values[i] < -1e-12 || c.values[i] > 1.0 - c.grid[i] + 1e-9)
            throw std::invalid_argument("NumericCurve: values must satisfy 0 <= f(x) <= 1-x");
    }
}

inline double eval_numeric(const NumericCurve& c, double x) {
    if (x <= c.grid.front()) return c.values.front();
    if (x >= c.grid.back()) return c.values.back();
    const auto it = std::upper_bound(c.grid.begin(), c.grid.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - c.grid.begin());
    const double t = (x - c.grid[i - 1]) / (c.grid[i] - c.grid[i - 1]);
    return c.values[i - 1] + t * (c.values[i] - c.values[i - 1]);
}

struct TradeoffCurve;

struct IdentityCurve {};
struct GaussianShiftCurve {
    double mu; // shift in standard-normal units, >= 0
};
struct LocationShiftCurve {
    NoiseModel noise;
    double delta; // location shift, >= 0
};
struct PoissonPairCurve {
    double a, b; // the two rates, > 0
};
struct BinomialPairCurve {
    long n;      // trials, >= 1
    double a, b; // success probabilities in (0,1)
};
struct ProductCurve {
    std::vector<TradeoffCurve> factors;
};

using CurveVariant = std::variant<IdentityCurve, GaussianShiftCurve, LocationShiftCurve,
                                  PoissonPairCurve, BinomialPairCurve, ProductCurve, NumericCurve>;

struct TradeoffCurve {
    CurveVariant node;

    static TradeoffCurve identity() { return {IdentityCurve{}}; }

    static TradeoffCurve gaussian_shift(double mu) {
        if (!(mu >= 0.0)) throw std::invalid_argument("gaussian_shift: mu must be >= 0");
        return {GaussianShiftCurve{mu}};
    }

    static TradeoffCurve location_shift(NoiseModel noise, double delta) {
        if (!(delta >= 0.0)) throw std::invalid_argument("location_shift: delta must be >= 0");
        return {LocationShiftCurve{std::move(noise), delta}};
    }

    static TradeoffCurve poisson_pair(double a, double b) {
        if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("poisson_pair: rates must be > 0");
        return {PoissonPairCurve{a, b}};
    }

    static TradeoffCurve binomial_pair(long n, double a, double b) {
        if (n < 1) throw std::invalid_argument("binomial_pair: n must be >= 1");
        if (!(a > 0.0 && a < 1.0 && b > 0.0 && b < 1.0))
            throw std::invalid_argument("binomial_pair: probabilities must lie in (0,1)");
        return {BinomialPairCurve{n, a, b}};
    }

    static TradeoffCurve product(std::vector<TradeoffCurve> factors) {
        if (factors.empty()) throw std::invalid_argument("product: empty factor list");
        return {ProductCurve{std::move(factors)}};
    }

    static TradeoffCurve numeric(NumericCurve c) {
        validate_numeric_curve(c);
        return {CurveVariant{std::move(c)}};
    }

    template <class T> const T* get_if() const { return std::get_if<T>(&node); }
};

// ---------------------------------------------------------------------------
// Exact Neyman-Pearson curve for finite discrete distributions
// ---------------------------------------------------------------------------

/// Exact trade-off curve of two pmf vectors over a shared support, built as
/// the lower envelope of likelihood-ratio tests. Support points with equal
/// ratio q/p are merged into one linear segment, which reproduces the effect
/// of randomized tests. Both vectors must sum to 1 within 1e-12.
inline NumericCurve exact_discrete_tof(std::span<const double> p, std::span<const double> q) {
    if (p.empty() || p.size() != q.size())
        throw std::invalid_argument("exact_discrete_tof: empty or mismatched supports");
    double sp = 0.0, sq = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] < 0.0 || q[i] < 0.0)
            throw std::invalid_argument("exact_discrete_tof: negative probability mass");
        sp += p[i];
        sq += q[i];
    }
    if (std::abs(sp - 1.0) > 1e-12 || std::abs(sq - 1.0) > 1e-12)
        throw std::invalid_argument("exact_discrete_tof: inputs must each sum to 1 within 1e-12");

    // Rejecting the q-only atoms first costs no type-I error at all.
    double q_free = 0.0;
    struct Cell {
        double ratio, pm, qm;
    };
    std::vector<Cell> cells;
    cells.reserve(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double pm = p[i] / sp, qm = q[i] / sq;
        if (pm == 0.0) {
            q_free += qm;
        } else {
            cells.push_back({qm / pm, pm, qm});
        }
    }
    std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) { return a.ratio > b.ratio; });

    NumericCurve out;
    out.grid.reserve(cells.size() + 2);
    out.values.reserve(cells.size() + 2);
    out.grid.push_back(0.0);
    out.values.push_back(1.0 - q_free);

    double x = 0.0, y = 1.0 - q_free;
    std::size_t i = 0;
    while (i < cells.size()) {
        double pm = cells[i].pm, qm = cells[i].qm;
        std::size_t j = i + 1;
        while (j < cells.size() && cells[j].ratio == cells[i].ratio) {
            pm += cells[j].pm;
            qm += cells[j].qm;
            ++j;
        }
        x += pm;
        y -= qm;
        out.grid.push_back(x);
        out.values.push_back(std::max(0.0, y));
        i = j;
    }
    // All mass is accounted for, so the envelope ends at (1, 0) exactly.
    out.grid.back() = 1.0;
    out.values.back() = 0.0;
    return out;
}

// ---------------------------------------------------------------------------
// Closed forms
// ---------------------------------------------------------------------------

namespace detail {

inline double gaussian_tof(double mu, double x) {
    if (x <= 0.0) return 1.0;
    if (x >= 1.0) return 0.0;
    return norm_cdf(norm_quantile(1.0 - x) - mu);
}

inline double location_tof(const NoiseModel& noise, double delta, double x) {
    if (x >= 1.0) return 0.0;
    return noise.cdf(noise.quantile(1.0 - x) - delta);
}

inline double bernoulli_tof(double a, double b, double x) {
    if (a == b) return 1.0 - x;
    if (b > a) {
        if (x <= a) return 1.0 - (b / a) * x;
        return (1.0 - b) / (1.0 - a) * (1.0 - x);
    }
    if (x <= 1.0 - a) return 1.0 - (1.0 - b) / (1.0 - a) * x;
    return (b / a) * (1.0 - x);
}

/// Truncated pmf vectors of P(a), P(b) over the shared support {0..N},
/// where N leaves both tails below 1e-13.
inline std::pair<std::vector<double>, std::vector<double>> poisson_pair_pmfs(double a, double b) {
    const double hi_rate = std::max(a, b);
    long cap = static_cast<long>(std::ceil(hi_rate + 12.0 * std::sqrt(hi_rate) + 40.0));
    std::vector<double> pa, pb;
    pa.reserve(cap + 1);
    pb.reserve(cap + 1);
    double ca = 0.0, cb = 0.0;
    double ta = std::exp(-a), tb = std::exp(-b);
    for (long k = 0; k <= cap; ++k) {
        if (k > 0) {
            ta *= a / k;
            tb *= b / k;
        }
        pa.push_back(ta);
        pb.push_back(tb);
        ca += ta;
        cb += tb;
        if (ca >= 1.0 - 1e-13 && cb >= 1.0 - 1e-13) break;
    }
    return {std::move(pa), std::move(pb)};
}

inline std::pair<std::vector<double>, std::vector<double>> binomial_pair_pmfs(long n, double a,
                                                                              double b) {
    std::vector<double> pa(n + 1), pb(n + 1);
    for (long k = 0; k <= n; ++k) {
        pa[k] = std::exp(binomial_log_pmf(k, n, a));
        pb[k] = std::exp(binomial_log_pmf(k, n, b));
    }
    return {std::move(pa), std::move(pb)};
}

inline NumericCurve poisson_envelope(double a, double b) {
    auto [pa, pb] = poisson_pair_pmfs(a, b);
    return exact_discrete_tof(pa, pb);
}

inline NumericCurve binomial_envelope(long n, double a, double b) {
    auto [pa, pb] = binomial_pair_pmfs(n, a, b);
    return exact_discrete_tof(pa, pb);
}

/// The Gaussian shift parameter of a curve, when it is exactly a Gaussian
/// trade-off function (GaussianShift, Identity, or Gaussian-noise location).
inline std::optional<double> as_gaussian_mu(const TradeoffCurve& c) {
    if (c.get_if<IdentityCurve>()) return 0.0;
    if (const auto* g = c.get_if<GaussianShiftCurve>()) return g->mu;
    if (const auto* l = c.get_if<LocationShiftCurve>()) {
        if (l->noise.kind() == NoiseModel::Kind::Gaussian) return l->delta / l->noise.scale();
    }
    return std::nullopt;
}

inline bool is_identity_like(const TradeoffCurve& c) {
    if (const auto mu = as_gaussian_mu(c)) return *mu == 0.0;
    if (const auto* l = c.get_if<LocationShiftCurve>()) return l->delta == 0.0;
    if (const auto* p = c.get_if<PoissonPairCurve>()) return p->a == p->b;
    if (const auto* b = c.get_if<BinomialPairCurve>()) return b->a == b->b;
    return false;
}

NumericCurve product_envelope(const std::vector<TradeoffCurve>& factors, int bins);

} // namespace detail

// ---------------------------------------------------------------------------
// Evaluation and inversion
// ---------------------------------------------------------------------------

inline double eval_curve(const TradeoffCurve& curve, double x) {
    if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("eval_curve: x outside [0,1]");
    return std::visit(
        [x](const auto& node) -> double {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, IdentityCurve>) {
                return 1.0 - x;
            } else if constexpr (std::is_same_v<T, GaussianShiftCurve>) {
                return detail::gaussian_tof(node.mu, x);
            } else if constexpr (std::is_same_v<T, LocationShiftCurve>) {
                return detail::location_tof(node.noise, node.delta, x);
            } else if constexpr (std::is_same_v<T, PoissonPairCurve>) {
                if (node.a == node.b) return 1.0 - x;
                return eval_numeric(detail::poisson_envelope(node.a, node.b), x);
            } else if constexpr (std::is_same_v<T, BinomialPairCurve>) {
                if (node.n == 1 || node.a == node.b) return detail::bernoulli_tof(node.a, node.b, x);
                return eval_numeric(detail::binomial_envelope(node.n, node.a, node.b), x);
            } else if constexpr (std::is_same_v<T, ProductCurve>) {
                double ss = 0.0;
                bool all_gaussian = true;
                for (const auto& f : node.factors) {
                    if (const auto mu = detail::as_gaussian_mu(f)) {
                        ss += *mu * *mu;
                    } else {
                        all_gaussian = false;
                        break;
                    }
                }
                if (all_gaussian) return detail::gaussian_tof(std::sqrt(ss), x);
                return eval_numeric(detail::product_envelope(node.factors, 4096), x);
            } else {
                return eval_numeric(node, x);
            }
        },
        curve.node);
}

/// Generalized left inverse f^{-1}(t) = inf{x : f(x) <= t} (inf of the empty
/// set taken as 1). Computed by monotone bisection; plateaus resolve to the
/// left edge.
inline double invert_curve(const TradeoffCurve& curve, double t) {
    if (!(t >= 0.0 && t <= 1.0)) throw std::domain_error("invert_curve: t outside [0,1]");
    if (eval_curve(curve, 0.0) <= t) return 0.0;
    double lo = 0.0, hi = 1.0; // f(lo) > t, f(hi) <= t
    for (int i = 0; i < 100; ++i) {
        const double mid = 0.5 * (lo + hi);
        (eval_curve(curve, mid) > t ? lo : hi) = mid;
    }
    return hi;
}

// ---------------------------------------------------------------------------
// Blackwell-order comparison
// ---------------------------------------------------------------------------

enum class Dominance { LessEq, GreaterEq, Equal, Incomparable };

inline const char* to_string(Dominance d) {
    switch (d) {
        case Dominance::LessEq: return "less_eq";
        case Dominance::GreaterEq: return "greater_eq";
        case Dominance::Equal: return "equal";
        case Dominance::Incomparable: return "incomparable";
    }
    return "?";
}

namespace detail {

inline constexpr double kConditionTol = 1e-12;

/// Poisson characterization: T(P(a),P(b)) <= T(P(c),P(d)) iff the pairs are
/// similarly ordered, |c-d| <= |a-b|, and the rate ratio of (a,b) dominates
/// that of (c,d).
inline bool poisson_le(double a, double b, double c, double d) {
    const bool similarly_ordered = (a <= b + kConditionTol && c <= d + kConditionTol) ||
                                   (a >= b - kConditionTol && c >= d - kConditionTol);
    if (!similarly_ordered) return false;
    if (!(std::abs(c - d) <= std::abs(a - b) + kConditionTol)) return false;
    const double r_ab = std::max(a, b) / std::min(a, b);
    const double r_cd = std::max(c, d) / std::min(c, d);
    return r_ab >= r_cd - kConditionTol;
}

/// Binomial characterization (any fixed n): T(B(n,a),B(n,b)) <= T(B(n,c),B(n,d))
/// iff, after orienting both pairs the same way, the two outer ratio
/// inequalities hold. Relabeling successes and failures maps B(n,p) to
/// B(n,1-p) without changing the curve, so each pair is canonicalized to
/// its increasing representative first.
inline bool binomial_le(double a, double b, double c, double d) {
    if (a > b) {
        a = 1.0 - a;
        b = 1.0 - b;
    }
    if (c > d) {
        c = 1.0 - c;
        d = 1.0 - d;
    }
    // Now a <= b and c <= d: similarly ordered by construction.
    const double l_ab = (1.0 - b) / (1.0 - a);
    const double l_cd = (1.0 - d) / (1.0 - c);
    if (!(l_ab <= l_cd + kConditionTol)) return false;
    const double r_ab = b / a;
    const double r_cd = d / c;
    return r_cd <= r_ab + kConditionTol;
}

inline Dominance verdict_from(bool le, bool ge) {
    if (le && ge) return Dominance::Equal;
    if (le) return Dominance::LessEq;
    if (ge) return Dominance::GreaterEq;
    return Dominance::Incomparable;
}

struct CompiledCurve {
    const TradeoffCurve* curve;
    std::optional<NumericCurve> materialized;
    double operator()(double x) const {
        return materialized ? eval_numeric(*materialized, x) : eval_curve(*curve, x);
    }
};

inline CompiledCurve compile_for_grid(const TradeoffCurve& c) {
    CompiledCurve cc{&c, std::nullopt};
    if (const auto* p = c.get_if<PoissonPairCurve>()) {
        if (p->a != p->b) cc.materialized = poisson_envelope(p->a, p->b);
    } else if (const auto* b = c.get_if<BinomialPairCurve>()) {
        if (b->n > 1 && b->a != b->b) cc.materialized = binomial_envelope(b->n, b->a, b->b);
    } else if (const auto* pr = c.get_if<ProductCurve>()) {
        bool all_gaussian = true;
        for (const auto& f : pr->factors)
            if (!as_gaussian_mu(f)) all_gaussian = false;
        if (!all_gaussian) cc.materialized = product_envelope(pr->factors, 4096);
    } else if (const auto* n = c.get_if<NumericCurve>()) {
        cc.materialized = *n;
    }
    return cc;
}

} // namespace detail

/// Pointwise Blackwell comparison with closed-form rules inside each family
/// and a 201-point-plus-breakpoints grid comparison (tolerance 1e-9) across
/// families.
inline Dominance dominates(const TradeoffCurve& f, const TradeoffCurve& g) {
    using detail::verdict_from;

    const auto fmu = detail::as_gaussian_mu(f);
    const auto gmu = detail::as_gaussian_mu(g);
    if (fmu && gmu) {
        // Larger shift means a lower curve.
        if (*fmu == *gmu) return Dominance::Equal;
        return *fmu > *gmu ? Dominance::LessEq : Dominance::GreaterEq;
    }

    const bool f_id = detail::is_identity_like(f);
    const bool g_id = detail::is_identity_like(g);
    if (f_id || g_id) {
        if (f_id && g_id) return Dominance::Equal;
        // The identity curve is the pointwise maximum of the whole class.
        return f_id ? Dominance::GreaterEq : Dominance::LessEq;
    }

    if (const auto* lf = f.get_if<LocationShiftCurve>()) {
        if (const auto* lg = g.get_if<LocationShiftCurve>()) {
            if (lf->noise.same_as(lg->noise)) {
                if (lf->delta == lg->delta) return Dominance::Equal;
                return lf->delta > lg->delta ? Dominance::LessEq : Dominance::GreaterEq;
            }
        }
    }
    if (const auto* pf = f.get_if<PoissonPairCurve>()) {
        if (const auto* pg = g.get_if<PoissonPairCurve>()) {
            return verdict_from(detail::poisson_le(pf->a, pf->b, pg->a, pg->b),
                                detail::poisson_le(pg->a, pg->b, pf->a, pf->b));
        }
    }
    if (const auto* bf = f.get_if<BinomialPairCurve>()) {
        if (const auto* bg = g.get_if<BinomialPairCurve>()) {
            if (bf->n == bg->n) {
                return verdict_from(detail::binomial_le(bf->a, bf->b, bg->a, bg->b),
                                    detail::binomial_le(bg->a, bg->b, bf->a, bf->b));
            }
        }
    }

    // Cross-family fallback: pointwise comparison on a shared grid.
    constexpr double tol = 1e-9;
    const auto cf = detail::compile_for_grid(f);
    const auto cg = detail::compile_for_grid(g);
    std::vector<double> xs;
    xs.reserve(512);
    for (int i = 0; i <= 200; ++i) xs.push_back(i / 200.0);
    if (cf.materialized)
        xs.insert(xs.end(), cf.materialized->grid.begin(), cf.materialized->grid.end());
    if (cg.materialized)
        xs.insert(xs.end(), cg.materialized->grid.begin(), cg.materialized->grid.end());
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    bool le = true, ge = true;
    for (const double x : xs) {
        const double fx = cf(x), gx = cg(x);
        if (fx > gx + tol) le = false;
        if (fx < gx - tol) ge = false;
        if (!le && !ge) return Dominance::Incomparable;
    }
    return verdict_from(le, ge);
}

// ---------------------------------------------------------------------------
// Poisson thinning-superposition witness
// ---------------------------------------------------------------------------

struct ThinningKernel {
    double s; // thinning probability in [0,1]
    double r; // superposed rate, >= 0
};

/// Kernel parameters (s, r) with c = s*a + r and d = s*b + r, when they
/// exist. Existence coincides with T(P(a),P(b)) <= T(P(c),P(d)).
inline std::optional<ThinningKernel> construct_thinning(double a, double b, double c, double d) {
    if (!(a > 0.0 && b > 0.0 && c > 0.0 && d > 0.0))
        throw std::invalid_argument("construct_thinning: rates must be > 0");
    constexpr double tol = 1e-12;
    if (std::abs(a - b) <= tol) {
        if (std::abs(c - d) <= tol) return ThinningKernel{0.0, c};
        return std::nullopt;
    }
    const double s = std::abs(c - d) / std::abs(a - b);
    const double r = d - s * b;
    if (s > 1.0 + tol || r < -tol) return std::nullopt;
    if (std::abs(c - (s * a + r)) > 1e-12 * std::max(1.0, std::abs(c))) return std::nullopt;
    return ThinningKernel{std::min(s, 1.0), std::max(r, 0.0)};
}

// ---------------------------------------------------------------------------
// Tensor products
// ---------------------------------------------------------------------------

namespace detail {
inline void flatten_into(const TradeoffCurve& c, std::vector<TradeoffCurve>& out) {
    if (const auto* p = c.get_if<ProductCurve>()) {
        for (const auto& f : p->factors) flatten_into(f, out);
    } else {
        out.push_back(c);
    }
}
} // namespace detail

/// Tensor product of trade-off functions. Identity factors drop out; an
/// all-Gaussian list collapses to the root-sum-square shift. Anything else
/// becomes a Product node evaluated by log-likelihood-ratio convolution.
inline TradeoffCurve tensor(std::span<const TradeoffCurve> curves) {
    if (curves.empty()) throw std::invalid_argument("tensor: empty curve list");
    std::vector<TradeoffCurve> flat;
    for (const auto& c : curves) detail::flatten_into(c, flat);

    std::vector<TradeoffCurve> kept;
    for (auto& c : flat)
        if (!detail::is_identity_like(c)) kept.push_back(std::move(c));
    if (kept.empty()) return TradeoffCurve::identity();

    bool all_gaussian = true;
    double ss = 0.0;
    for (const auto& c : kept) {
        if (const auto mu = detail::as_gaussian_mu(c)) {
            ss += *mu * *mu;
        } else {
            all_gaussian = false;
            break;
        }
    }
    if (all_gaussian) return TradeoffCurve::gaussian_shift(std::sqrt(ss));
    if (kept.size() == 1) return kept.front();
    return TradeoffCurve::product(std::move(kept));
}

inline TradeoffCurve tensor(std::initializer_list<TradeoffCurve> curves) {
    return tensor(std::span<const TradeoffCurve>(curves.begin(), curves.size()));
}

// ---------------------------------------------------------------------------
// Divergence levels of baseline pairs
// ---------------------------------------------------------------------------

/// KL(Q, P) of the baseline pair represented by the curve.
inline double kl_level(const TradeoffCurve& curve) {
    if (const auto* g = curve.get_if<GaussianShiftCurve>()) return 0.5 * g->mu * g->mu;
    if (const auto* p = curve.get_if<PoissonPairCurve>()) {
        if (p->a == p->b) return 0.0;
        return p->b * std::log(p->b / p->a) - p->b + p->a;
    }
    if (const auto* b = curve.get_if<BinomialPairCurve>()) {
        if (b->a == b->b) return 0.0;
        return b->n * (b->b * std::log(b->b / b->a) +
                       (1.0 - b->b) * std::log((1.0 - b->b) / (1.0 - b->a)));
    }
    throw std::invalid_argument("kl_level: supported for GaussianShift, PoissonPair, BinomialPair");
}

/// Total variation distance of the baseline pair.
inline double tv_level(const TradeoffCurve& curve) {
    if (const auto* g = curve.get_if<GaussianShiftCurve>()) return 2.0 * norm_cdf(0.5 * g->mu) - 1.0;
    if (const auto* p = curve.get_if<PoissonPairCurve>()) {
        if (p->a == p->b) return 0.0;
        auto [pa, pb] = detail::poisson_pair_pmfs(p->a, p->b);
        double s = 0.0;
        for (std::size_t k = 0; k < pa.size(); ++k) s += std::abs(pa[k] - pb[k]);
        return 0.5 * s;
    }
    if (const auto* b = curve.get_if<BinomialPairCurve>()) {
        if (b->a == b->b) return 0.0;
        auto [pa, pb] = detail::binomial_pair_pmfs(b->n, b->a, b->b);
        double s = 0.0;
        for (std::size_t k = 0; k < pa.size(); ++k) s += std::abs(pa[k] - pb[k]);
        return 0.5 * s;
    }
    throw std::invalid_argument("tv_level: supported for GaussianShift, PoissonPair, BinomialPair");
}

/// Hellinger transform H_t(P(a), P(b)) = exp{-(1-t)a - t b + b^t a^{1-t}}.
inline double hellinger_transform(double a, double b, double t) {
    if (!(a > 0.0 && b > 0.0)) throw std::invalid_argument("hellinger_transform: rates must be > 0");
    const double cross = std::exp(t * std::log(b) + (1.0 - t) * std::log(a));
    return std::exp(-(1.0 - t) * a - t * b + cross);
}

// ---------------------------------------------------------------------------
// Product-curve evaluation via log-likelihood-ratio convolution
// ---------------------------------------------------------------------------

namespace detail {

/// Distribution of the log-likelihood ratio log(dQ/dP) under P, plus the two
/// degenerate masses: P-mass on {dQ/dP = 0} and Q-mass on {dP = 0}.
struct LlrAtoms {
    std::vector<std::pair<double, double>> finite; // (llr, P-mass)
    double p_zero_ratio = 0.0;
    double q_infinite_ratio = 0.0;

    void normalize() {
        double tot = p_zero_ratio;
        for (const auto& [llr, m] : finite) tot += m;
        if (tot <= 0.0) throw std::logic_error("LlrAtoms: vanishing P mass");
        p_zero_ratio /= tot;
        for (auto& [llr, m] : finite) m /= tot;
    }
};

inline LlrAtoms atoms_from_numeric(const NumericCurve& c) {
    LlrAtoms out;
    out.q_infinite_ratio = std::clamp(1.0 - c.values.front(), 0.0, 1.0);
    for (std::size_t i = 0; i + 1 < c.grid.size(); ++i) {
        const double dx = c.grid[i + 1] - c.grid[i];
        const double dy = c.values[i] - c.values[i + 1];
        if (dx <= 0.0) continue;
        const double ratio = dy / dx;
        if (ratio <= 0.0) {
            out.p_zero_ratio += dx;
        } else {
            out.finite.emplace_back(std::log(ratio), dx);
        }
    }
    out.normalize();
    return out;
}

inline LlrAtoms atoms_from_discrete(const std::vector<double>& p, const std::vector<double>& q) {
    LlrAtoms out;
    for (std::size_t k = 0; k < p.size(); ++k) {
        if (p[k] <= 0.0) {
            out.q_infinite_ratio += q[k];
        } else if (q[k] <= 0.0) {
            out.p_zero_ratio += p[k];
        } else {
            out.finite.emplace_back(std::log(q[k] / p[k]), p[k]);
        }
    }
    out.normalize();
    return out;
}

inline LlrAtoms atoms_from_gaussian(double mu, int bins) {
    LlrAtoms out;
    if (mu == 0.0) {
        out.finite.emplace_back(0.0, 1.0);
        return out;
    }
    // Under P the llr is mu*Z - mu^2/2 with Z standard normal.
    const double z_max = 8.75;
    double prev_cdf = 0.0;
    for (int i = 0; i < bins; ++i) {
        const double z0 = -z_max + 2.0 * z_max * i / bins;
        const double z1 = -z_max + 2.0 * z_max * (i + 1) / bins;
        const double hi_cdf = (i == bins - 1) ? 1.0 : norm_cdf(z1);
        const double mass = hi_cdf - prev_cdf;
        prev_cdf = hi_cdf;
        if (mass <= 0.0) continue;
        const double z_mid = 0.5 * (z0 + z1);
        out.finite.emplace_back(mu * z_mid - 0.5 * mu * mu, mass);
    }
    out.normalize();
    return out;
}

inline LlrAtoms curve_llr_atoms(const TradeoffCurve& c, int bins) {
    if (const auto mu = as_gaussian_mu(c)) return atoms_from_gaussian(*mu, bins);
    if (const auto* p = c.get_if<PoissonPairCurve>()) {
        auto [pa, pb] = poisson_pair_pmfs(p->a, p->b);
        return atoms_from_discrete(pa, pb);
    }
    if (const auto* b = c.get_if<BinomialPairCurve>()) {
        auto [pa, pb] = binomial_pair_pmfs(b->n, b->a, b->b);
        return atoms_from_discrete(pa, pb);
    }
    if (const auto* n = c.get_if<NumericCurve>()) return atoms_from_numeric(*n);
    if (const auto* l = c.get_if<LocationShiftCurve>()) {
        // Sample the closed form and read atoms off the piecewise-linear slopes.
        NumericCurve sampled;
        sampled.grid.resize(bins + 1);
        sampled.values.resize(bins + 1);
        for (int i = 0; i <= bins; ++i) {
            const double x = static_cast<double>(i) / bins;
            sampled.grid[i] = x;
            sampled.values[i] = location_tof(l->noise, l->delta, x);
        }
        return atoms_from_numeric(sampled);
    }
    if (const auto* pr = c.get_if<ProductCurve>())
        return atoms_from_numeric(product_envelope(pr->factors, bins));
    return atoms_from_numeric(NumericCurve{{0.0, 1.0}, {1.0, 0.0}}); // identity
}

inline LlrAtoms combine_atoms(const LlrAtoms& a, const LlrAtoms& b, int bins) {
    LlrAtoms out;
    out.p_zero_ratio = 1.0 - (1.0 - a.p_zero_ratio) * (1.0 - b.p_zero_ratio);
    out.q_infinite_ratio = 1.0 - (1.0 - a.q_infinite_ratio) * (1.0 - b.q_infinite_ratio);

    const std::size_t n_products = a.finite.size() * b.finite.size();
    if (n_products == 0) {
        out.normalize();
        return out;
    }
    if (n_products <= static_cast<std::size_t>(bins)) {
        out.finite.reserve(n_products);
        for (const auto& [la, ma] : a.finite)
            for (const auto& [lb, mb] : b.finite) out.finite.emplace_back(la + lb, ma * mb);
    } else {
        // Bucket the convolution on a fixed llr grid, keeping the
        // mass-weighted mean llr of each bucket.
        auto minmax_llr = [](const LlrAtoms& x) {
            double lo = x.finite.front().first, hi = lo;
            for (const auto& [l, m] : x.finite) {
                lo = std::min(lo, l);
                hi = std::max(hi, l);
            }
            return std::pair{lo, hi};
        };
        const auto [alo, ahi] = minmax_llr(a);
        const auto [blo, bhi] = minmax_llr(b);
        const double lo = alo + blo, hi = ahi + bhi;
        const double width = std::max(hi - lo, 1e-12);
        std::vector<double> mass(bins, 0.0), wllr(bins, 0.0);
        for (const auto& [la, ma] : a.finite) {
            for (const auto& [lb, mb] : b.finite) {
                const double l = la + lb, m = ma * mb;
                int idx = static_cast<int>((l - lo) / width * bins);
                idx = std::clamp(idx, 0, bins - 1);
                mass[idx] += m;
                wllr[idx] += m * l;
            }
        }
        for (int i = 0; i < bins; ++i)
            if (mass[i] > 0.0) out.finite.emplace_back(wllr[i] / mass[i], mass[i]);
    }
    out.normalize();
    return out;
}

inline NumericCurve envelope_from_atoms(const LlrAtoms& atoms) {
    std::vector<double> p, q;
    p.reserve(atoms.finite.size() + 2);
    q.reserve(atoms.finite.size() + 2);
    double q_finite = 0.0;
    for (const auto& [llr, m] : atoms.finite) {
        p.push_back(m);
        q.push_back(m * std::exp(llr));
        q_finite += q.back();
    }
    // Under Q the finite part must carry exactly 1 - q_infinite; rescale away
    // the discretization drift.
    const double target = 1.0 - atoms.q_infinite_ratio;
    if (q_finite > 0.0) {
        const double scale = target / q_finite;
        for (auto& v : q) v *= scale;
    }
    p.push_back(atoms.p_zero_ratio);
    q.push_back(0.0);
    p.push_back(0.0);
    q.push_back(atoms.q_infinite_ratio);
    return exact_discrete_tof(p, q);
}

inline NumericCurve product_envelope(const std::vector<TradeoffCurve>& factors, int bins) {
    LlrAtoms acc = curve_llr_atoms(factors.front(), bins);
    acc.normalize();
    for (std::size_t i = 1; i < factors.size(); ++i) {
        LlrAtoms next = curve_llr_atoms(factors[i], bins);
        acc = combine_atoms(acc, next, bins);
    }
    return envelope_from_atoms(acc);
}

} // namespace detail

/// Piecewise-linear snapshot of any curve on an n-point uniform grid
/// (discrete and product curves use their exact envelope vertices instead).
inline NumericCurve curve_to_numeric(const TradeoffCurve& curve, int n_points = 201) {
    if (n_points < 2) throw std::invalid_argument("curve_to_numeric: need >= 2 points");
    if (const auto* p = curve.get_if<PoissonPairCurve>()) {
        if (p->a != p->b) return detail::poisson_envelope(p->a, p->b);
    }
    if (const auto* b = curve.get_if<BinomialPairCurve>()) {
        if (b->a != b->b) return detail::binomial_envelope(b->n, b->a, b->b);
    }
    if (const auto* pr = curve.get_if<ProductCurve>()) {
        bool all_gaussian = true;
        for (const auto& f : pr->factors)
            if (!detail::as_gaussian_mu(f)) all_gaussian = false;
        if (!all_gaussian) return detail::product_envelope(pr->factors, 4096);
    }
    if (const auto* n = curve.get_if<NumericCurve>()) return *n;
    NumericCurve out;
    out.grid.resize(n_points);
    out.values.resize(n_points);
    for (int i = 0; i < n_points; ++i) {
        const double x = static_cast<double>(i) / (n_points - 1);
        out.grid[i] = x;
        out.values[i] = eval_curve(curve, x);
    }
    out.grid.back() = 1.0;
    return out;
}

// ---------------------------------------------------------------------------
// Unlearning checks against baselines
// ---------------------------------------------------------------------------

struct UnlearningVerdict {
    bool holds;
    Dominance removal;
    Dominance preservation;
};

/// Core check: removal requires T(p, p1) <= f_d, preservation requires
/// T(p, q1) >= f_c.
inline UnlearningVerdict check_unlearning(const TradeoffCurve& removal_curve,
                                          const TradeoffCurve& f_d,
                                          const TradeoffCurve& preservation_curve,
                                          const TradeoffCurve& f_c) {
    const Dominance r = dominates(removal_curve, f_d);
    const Dominance p = dominates(preservation_curve, f_c);
    const bool removal_ok = r == Dominance::LessEq || r == Dominance::Equal;
    const bool preservation_ok = p == Dominance::GreaterEq || p == Dominance::Equal;
    return {removal_ok && preservation_ok, r, p};
}

struct MultiUnlearningVerdict {
    bool holds;
    std::vector<Dominance> removal;
    std::vector<Dominance> preservation;
};

inline MultiUnlearningVerdict check_unlearning_multi(std::span<const TradeoffCurve> removal_curves,
                                                     std::span<const TradeoffCurve> f_d,
                                                     std::span<const TradeoffCurve> preservation_curves,
                                                     std::span<const TradeoffCurve> f_c) {
    if (removal_curves.size() != f_d.size() || preservation_curves.size() != f_c.size())
        throw std::invalid_argument("check_unlearning_multi: list size mismatch");
    MultiUnlearningVerdict out{true, {}, {}};
    for (std::size_t i = 0; i < removal_curves.size(); ++i) {
        const Dominance r = dominates(removal_curves[i], f_d[i]);
        out.removal.push_back(r);
        if (!(r == Dominance::LessEq || r == Dominance::Equal)) out.holds = false;
    }
    for (std::size_t j = 0; j < preservation_curves.size(); ++j) {
        const Dominance p = dominates(preservation_curves[j], f_c[j]);
        out.preservation.push_back(p);
        if (!(p == Dominance::GreaterEq || p == Dominance::Equal)) out.holds = false;
    }
    return out;
}

// Family-specific trade-off curves between two members (first argument is
// the P side of T(P, Q)).

inline TradeoffCurve gaussian_pair_curve(std::span<const double> center_p,
                                         std::span<const double> center_q,
                                         std::span<const double> covariance, int dim) {
    const auto L = cholesky_lower(covariance, dim);
    return TradeoffCurve::gaussian_shift(whitened_distance(L, dim, center_p, center_q));
}

inline TradeoffCurve location_pair_curve(const NoiseModel& noise, double center_p, double center_q) {
    return TradeoffCurve::location_shift(noise, std::abs(center_p - center_q));
}

inline TradeoffCurve poisson_pair_curve(double rate_p, double rate_q) {
    return TradeoffCurve::poisson_pair(rate_p, rate_q);
}

inline TradeoffCurve binomial_pair_curve(long n, double prob_p, double prob_q) {
    return TradeoffCurve::binomial_pair(n, prob_p, prob_q);
}

} // namespace unlearn
