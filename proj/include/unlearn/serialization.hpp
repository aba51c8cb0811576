#pragma once

// JSON and CSV emitters for the public artifact types. All JSON artifacts
// carry {"schema": "v1"}; verdicts and classifications serialize as
// lowercase strings. CSV numbers use %.17g so artifacts are byte-stable.

#include <cstdio>
#include <string>

#include <json.hpp>

#include "unlearn/montecarlo.hpp"
#include "unlearn/regions.hpp"
#include "unlearn/removal.hpp"
#include "unlearn/tradeoff.hpp"

namespace unlearn {

using json = nlohmann::json;

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// Numeric curves
// ---------------------------------------------------------------------------

inline json to_json(const NumericCurve& c) {
    return json{{"schema", "v1"}, {"grid", c.grid}, {"values", c.values}};
}

inline NumericCurve numeric_curve_from_json(const json& j) {
    NumericCurve c;
    c.grid = j.at("grid").get<std::vector<double>>();
    c.values = j.at("values").get<std::vector<double>>();
    validate_numeric_curve(c);
    return c;
}

inline std::string to_csv(const NumericCurve& c) {
    std::string out = "x,f_x\n";
    for (std::size_t i = 0; i < c.grid.size(); ++i)
        out += format_double(c.grid[i]) + "," + format_double(c.values[i]) + "\n";
    return out;
}

// ---------------------------------------------------------------------------
// Regions
// ---------------------------------------------------------------------------

inline json to_json(const BallRegion& r, const std::string& family, int pareto_samples = 21) {
    json pareto = json::array();
    for (int i = 0; i < pareto_samples; ++i) {
        const double eps = r.eps * 2.0 * i / std::max(1, pareto_samples - 1);
        pareto.push_back({eps, r.pareto(eps)});
    }
    return json{{"schema", "v1"},
                {"family", family},
                {"classification", to_string(r.kind)},
                {"delta", r.delta},
                {"params", {{"alpha", r.alpha}, {"eps", r.eps}}},
                {"pareto_samples", pareto}};
}

inline json to_json(const IntervalRegion& r, const std::string& family) {
    json intervals = json::array();
    for (const auto& iv : r.intervals) intervals.push_back({iv.lo, iv.hi});
    json params = json::object();
    if (r.alpha) params["alpha"] = *r.alpha;
    if (r.eps) params["eps"] = *r.eps;
    params["intervals"] = intervals;
    json out{{"schema", "v1"},
             {"family", family},
             {"classification", to_string(r.kind)},
             {"delta", r.delta},
             {"params", params}};
    if (family != "poisson" && family != "binomial") {
        json pareto = json::array();
        for (int i = 0; i < 21; ++i) {
            const double eps = r.eps.value_or(1.0) * 2.0 * i / 20.0;
            pareto.push_back({eps, r.pareto(eps)});
        }
        out["pareto_samples"] = pareto;
    }
    return out;
}

inline json to_json(const SampledRegion& r, const std::string& family) {
    return json{{"schema", "v1"},
                {"family", family},
                {"classification", to_string(r.kind)},
                {"samples_drawn", r.samples_drawn},
                {"emptiness_certified", r.emptiness_certified},
                {"members_found", r.members_found}};
}

inline json to_json(std::span<const AlphaInterval> intervals) {
    json arr = json::array();
    for (const auto& iv : intervals) {
        arr.push_back({{"lo", iv.lo},
                       {"hi", iv.hi},
                       {"lo_closed", iv.lo_closed},
                       {"hi_closed", iv.hi_closed}});
    }
    return json{{"schema", "v1"}, {"alpha_intervals", arr}};
}

inline std::string to_csv(std::span<const AlphaInterval> intervals) {
    std::string out = "alpha_lo,alpha_hi,lo_closed,hi_closed\n";
    for (const auto& iv : intervals) {
        out += format_double(iv.lo) + "," + format_double(iv.hi) + "," +
               (iv.lo_closed ? "1" : "0") + "," + (iv.hi_closed ? "1" : "0") + "\n";
    }
    return out;
}

/// Sampled (eps, alpha_max) Pareto frontier as CSV.
inline std::string pareto_csv(double delta, double eps_max, int samples) {
    std::string out = "eps,alpha_max\n";
    for (int i = 0; i < samples; ++i) {
        const double eps = eps_max * i / std::max(1, samples - 1);
        out += format_double(eps) + "," + format_double(delta + eps) + "\n";
    }
    return out;
}

// ---------------------------------------------------------------------------
// Certificates, comparisons, trial reports, sweeps
// ---------------------------------------------------------------------------

inline json to_json(const RemovalCertificate& c) {
    return json{{"schema", "v1"},
                {"algorithm", to_string(c.algorithm)},
                {"n1", c.n1},
                {"n2", c.n2},
                {"n_r", c.n_r},
                {"d", c.d},
                {"delta", c.delta},
                {"sigma", c.sigma},
                {"Delta", c.Delta},
                {"estimator", to_string(c.estimator)},
                {"variant", c.variant},
                {"epsilon_min", c.epsilon_min},
                {"alpha_max", c.alpha_max},
                {"constants", c.constants}};
}

inline json to_json(const ComparisonResult& c) {
    json out{{"schema", "v1"},
             {"A", c.A},
             {"q", c.q},
             {"n_r_threshold", c.n_r_threshold},
             {"feasible", c.feasible}};
    out["Delta_m"] = c.Delta_m ? json(*c.Delta_m) : json(nullptr);
    return out;
}

inline json to_json(const DistanceQuantiles& q) {
    return json{{"min", q.min}, {"q25", q.q25}, {"median", q.median}, {"q75", q.q75}, {"max", q.max}};
}

inline json to_json(const TrialReport& r) {
    // wall_seconds is intentionally not serialized: artifacts must be
    // byte-identical across runs with the same seed.
    return json{{"schema", "v1"},
                {"trials", r.trials},
                {"removal_freq", r.removal_freq},
                {"preservation_freq", r.preservation_freq},
                {"joint_freq", r.joint_freq},
                {"removal_distance", to_json(r.removal_distance)},
                {"preservation_distance", to_json(r.preservation_distance)},
                {"alpha_max_nonpositive", r.alpha_max_nonpositive},
                {"certificate", to_json(r.certificate)}};
}

inline std::string to_csv(const SweepReport& r) {
    std::string out = "a,b,c,d,verdict_closed_form,verdict_oracle\n";
    for (const auto& row : r.rows) {
        out += format_double(row.a) + "," + format_double(row.b) + "," + format_double(row.c) +
               "," + format_double(row.d) + "," + to_string(row.closed_form) + "," +
               to_string(row.oracle) + "\n";
    }
    return out;
}

inline json to_json(const SweepReport& r) {
    json rows = json::array();
    for (const auto& row : r.disagreements) {
        rows.push_back({{"a", row.a},
                        {"b", row.b},
                        {"c", row.c},
                        {"d", row.d},
                        {"closed_form", to_string(row.closed_form)},
                        {"oracle", to_string(row.oracle)}});
    }
    return json{{"schema", "v1"},
                {"compared", r.compared},
                {"agreed", r.agreed},
                {"agreement", r.agreement()},
                {"disagreements", rows}};
}

} // namespace unlearn
