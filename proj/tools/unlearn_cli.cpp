// Command-line front end: feasible regions, Pareto frontiers, trade-off
// curves, removal certificates, coverage simulations, the selective-vs-
// random comparison, and ordering-oracle sweeps. All artifacts are
// machine-readable (JSON or CSV) and byte-stable for a fixed seed.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "unlearn/serialization.hpp"
#include "unlearn/unlearn.hpp"

namespace {

using unlearn::json;

std::vector<double> parse_vector(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        out.push_back(std::stod(tok));
    }
    if (out.empty()) throw std::invalid_argument("empty numeric list: '" + text + "'");
    return out;
}

std::vector<std::vector<double>> parse_vector_list(const std::string& text) {
    std::vector<std::vector<double>> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ';')) {
        if (tok.empty()) continue;
        out.push_back(parse_vector(tok));
    }
    if (out.empty()) throw std::invalid_argument("empty vector list: '" + text + "'");
    return out;
}

/// Row-major matrix given as semicolon-separated rows of comma-separated
/// entries.
std::vector<double> parse_matrix(const std::string& text, int dim) {
    const auto rows = parse_vector_list(text);
    if (static_cast<int>(rows.size()) != dim)
        throw std::invalid_argument("covariance must have " + std::to_string(dim) + " rows");
    std::vector<double> flat;
    for (const auto& row : rows) {
        if (static_cast<int>(row.size()) != dim)
            throw std::invalid_argument("covariance rows must have " + std::to_string(dim) +
                                        " entries");
        flat.insert(flat.end(), row.begin(), row.end());
    }
    return flat;
}

unlearn::NoiseModel make_noise(const std::string& kind, double scale) {
    if (kind == "gaussian") return unlearn::NoiseModel::gaussian(scale);
    if (kind == "laplace") return unlearn::NoiseModel::laplace(scale);
    if (kind == "uniform") return unlearn::NoiseModel::uniform(scale);
    throw std::invalid_argument("unknown noise model '" + kind + "'");
}

unlearn::SampleSet read_sample_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open sample file '" + path + "'");
    unlearn::SampleSet out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        out.push_back(parse_vector(line));
    }
    if (out.empty()) throw std::invalid_argument("sample file '" + path + "' is empty");
    return out;
}

std::vector<double> read_values_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open values file '" + path + "'");
    std::vector<double> out;
    double v;
    while (in >> v) out.push_back(v);
    if (out.empty()) throw std::invalid_argument("values file '" + path + "' is empty");
    return out;
}

void emit(const std::string& payload, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << payload;
        if (payload.empty() || payload.back() != '\n') std::cout << '\n';
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open output file '" + out_path + "'");
        out << payload;
        if (payload.empty() || payload.back() != '\n') out << '\n';
    }
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("UNLEARN_SEED")) return std::strtoull(env, nullptr, 10);
    return 0;
}

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"distributional unlearning toolkit"};
    app.require_subcommand(1);
    app.fallthrough(); // global flags may follow the subcommand name

    std::string format;
    std::string out_path;
    std::optional<std::uint64_t> seed_flag;
    app.add_option("--format", format, "output format: json or csv");
    app.add_option("--out", out_path, "write the artifact to this file instead of stdout");
    app.add_option("--seed", seed_flag, "seed for all randomness (fallback: UNLEARN_SEED)");

    // --- region ---------------------------------------------------------
    auto* region = app.add_subcommand("region", "feasible region of a family instance");
    std::string r_family, r_mu1, r_nu1, r_cov, r_f, r_g, r_ffile, r_gfile, r_lambda, r_alpha_list,
        r_eps_list, r_noise = "gaussian", r_member;
    int r_d = 1;
    long r_n = 1, r_budget = 10000;
    double r_alpha = 0.0, r_eps = 0.0, r_sigma2 = 1.0, r_noise_scale = 1.0;
    region->add_option("--family", r_family,
                       "gaussian|location|poisson|binomial|whitenoise|hilbert|"
                       "multilocation|multigaussian")
        ->required();
    region->add_option("--d", r_d, "dimension");
    region->add_option("--n", r_n, "binomial trials");
    region->add_option("--mu1", r_mu1, "unwanted center(s)");
    region->add_option("--nu1", r_nu1, "desired center(s)");
    region->add_option("--alpha", r_alpha, "removal level");
    region->add_option("--eps", r_eps, "preservation level");
    region->add_option("--alpha-list", r_alpha_list, "per-population removal levels");
    region->add_option("--eps-list", r_eps_list, "per-population preservation levels");
    region->add_option("--cov", r_cov, "covariance rows 'a,b;c,d'");
    region->add_option("--sigma2", r_sigma2, "isotropic variance");
    region->add_option("--noise", r_noise, "location noise: gaussian|laplace|uniform");
    region->add_option("--noise-scale", r_noise_scale, "noise scale parameter");
    region->add_option("--f", r_f, "white-noise signal f values");
    region->add_option("--g", r_g, "white-noise signal g values");
    region->add_option("--f-file", r_ffile, "file with f values (whitespace separated)");
    region->add_option("--g-file", r_gfile, "file with g values (whitespace separated)");
    region->add_option("--lambda", r_lambda, "Hilbert eigenvalues");
    region->add_option("--budget", r_budget, "sample budget for multigaussian search");
    region->add_option("--member", r_member, "also test membership of this point");

    // --- pareto ---------------------------------------------------------
    auto* pareto = app.add_subcommand("pareto", "Pareto frontier of (eps, alpha) pairs");
    std::string p_family, p_mu1, p_nu1, p_cov, p_f, p_g, p_lambda;
    int p_d = 1, p_samples = 21;
    double p_eps = 0.5, p_eps_max = 2.0, p_sigma2 = 1.0;
    pareto->add_option("--family", p_family, "gaussian|location|whitenoise|hilbert|poisson")
        ->required();
    pareto->add_option("--d", p_d, "dimension");
    pareto->add_option("--mu1", p_mu1, "unwanted center");
    pareto->add_option("--nu1", p_nu1, "desired center");
    pareto->add_option("--cov", p_cov, "covariance rows");
    pareto->add_option("--sigma2", p_sigma2, "isotropic variance");
    pareto->add_option("--f", p_f, "white-noise signal f");
    pareto->add_option("--g", p_g, "white-noise signal g");
    pareto->add_option("--lambda", p_lambda, "Hilbert eigenvalues");
    pareto->add_option("--eps", p_eps, "preservation level (poisson table)");
    pareto->add_option("--eps-max", p_eps_max, "largest sampled eps");
    pareto->add_option("--samples", p_samples, "number of sampled eps values");

    // --- curve ----------------------------------------------------------
    auto* curve = app.add_subcommand("curve", "trade-off curve samples for plotting");
    std::string c_poisson, c_binomial, c_location;
    double c_gaussian = -1.0;
    int c_points = 101;
    curve->add_option("--gaussian-shift", c_gaussian, "Gaussian shift parameter");
    curve->add_option("--poisson", c_poisson, "Poisson rates 'a,b'");
    curve->add_option("--binomial", c_binomial, "Binomial 'n,a,b'");
    curve->add_option("--location", c_location, "location curve 'kind,scale,shift'");
    curve->add_option("--points", c_points, "grid resolution");

    // --- bounds ---------------------------------------------------------
    auto* bounds = app.add_subcommand("bounds", "removal certificate for one configuration");
    std::string b_algorithm = "random", b_noise, b_estimator = "mean", b_variant = "tight",
                b_s1, b_s2;
    long b_n1 = 0, b_n2 = 0, b_nr = 0;
    int b_d = 1;
    double b_delta = 0.1, b_Delta = -1.0, b_sigma = 1.0, b_noise_scale = 1.0;
    bool b_estimate = false;
    bounds->add_option("--algorithm", b_algorithm, "random|selective")->required();
    bounds->add_option("--n1", b_n1)->required();
    bounds->add_option("--n2", b_n2)->required();
    bounds->add_option("--nr", b_nr)->required();
    bounds->add_option("--d", b_d);
    bounds->add_option("--delta", b_delta);
    bounds->add_option("--Delta", b_Delta, "true separation in sigma units");
    bounds->add_option("--sigma", b_sigma);
    bounds->add_option("--noise", b_noise, "gaussian|laplace|uniform location noise");
    bounds->add_option("--noise-scale", b_noise_scale);
    bounds->add_option("--estimator", b_estimator, "mean|median");
    bounds->add_option("--variant", b_variant, "tight|displayed (selective only)");
    bounds->add_flag("--estimate-delta", b_estimate,
                     "plug in Delta estimated from sample files (not covered by the guarantees)");
    bounds->add_option("--s1", b_s1, "unwanted samples CSV (one point per row)");
    bounds->add_option("--s2", b_s2, "desired samples CSV (one point per row)");

    // --- simulate -------------------------------------------------------
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo certificate coverage");
    std::string s_algorithm = "random", s_family = "gaussian", s_mu1 = "0", s_nu1 = "0",
                s_noise = "gaussian", s_estimator = "mean", s_variant = "tight";
    long s_n1 = 0, s_n2 = 0, s_nr = 0, s_trials = 1000;
    int s_d = 1;
    double s_delta = 0.1, s_sigma = 1.0, s_noise_scale = 1.0;
    simulate->add_option("--algorithm", s_algorithm, "random|selective")->required();
    simulate->add_option("--family", s_family, "gaussian|location");
    simulate->add_option("--d", s_d);
    simulate->add_option("--sigma", s_sigma);
    simulate->add_option("--mu1", s_mu1, "unwanted center");
    simulate->add_option("--nu1", s_nu1, "desired center");
    simulate->add_option("--noise", s_noise);
    simulate->add_option("--noise-scale", s_noise_scale);
    simulate->add_option("--n1", s_n1)->required();
    simulate->add_option("--n2", s_n2)->required();
    simulate->add_option("--nr", s_nr)->required();
    simulate->add_option("--delta", s_delta);
    simulate->add_option("--trials", s_trials);
    simulate->add_option("--estimator", s_estimator, "mean|median");
    simulate->add_option("--variant", s_variant, "tight|displayed");

    // --- compare --------------------------------------------------------
    auto* compare = app.add_subcommand("compare", "selective-vs-random threshold");
    long x_n1 = 0, x_n2 = 0, x_nr = 0;
    double x_delta = 0.05;
    compare->add_option("--n1", x_n1)->required();
    compare->add_option("--n2", x_n2)->required();
    compare->add_option("--nr", x_nr)->required();
    compare->add_option("--delta", x_delta);

    // --- sweep ----------------------------------------------------------
    auto* sweep = app.add_subcommand("sweep", "ordering-oracle agreement sweep");
    std::string w_family = "poisson";
    long w_count = 100, w_n = 5;
    sweep->add_option("--family", w_family, "poisson|bernoulli|binomial");
    sweep->add_option("--count", w_count, "number of quadruples");
    sweep->add_option("--n", w_n, "binomial trials");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    const std::uint64_t seed = resolve_seed(seed_flag);

    try {
        if (*region) {
            json payload;
            std::string csv;
            if (r_family == "gaussian") {
                const auto mu1 = parse_vector(r_mu1);
                const auto nu1 = parse_vector(r_nu1);
                const auto cov = r_cov.empty() ? unlearn::isotropic_matrix(r_d, r_sigma2)
                                               : parse_matrix(r_cov, r_d);
                const auto r = unlearn::gaussian_region(mu1, nu1, cov, r_d, r_alpha, r_eps);
                payload = unlearn::to_json(r, "gaussian");
                if (!r_member.empty()) payload["member_result"] = r.member(parse_vector(r_member));
            } else if (r_family == "location") {
                const auto r = unlearn::location1d_region(std::stod(r_mu1), std::stod(r_nu1),
                                                          r_alpha, r_eps);
                payload = unlearn::to_json(r, "location");
                if (!r_member.empty()) payload["member_result"] = r.member(std::stod(r_member));
            } else if (r_family == "poisson") {
                const auto r = unlearn::poisson_region(std::stod(r_mu1), std::stod(r_nu1), r_alpha,
                                                       r_eps);
                payload = unlearn::to_json(r, "poisson");
                if (!r_member.empty()) payload["member_result"] = r.member(std::stod(r_member));
            } else if (r_family == "binomial") {
                const auto r = unlearn::binomial_region(r_n, std::stod(r_mu1), std::stod(r_nu1),
                                                        r_alpha, r_eps);
                payload = unlearn::to_json(r, "binomial");
                if (!r_member.empty()) payload["member_result"] = r.member(std::stod(r_member));
            } else if (r_family == "whitenoise") {
                const auto f = r_ffile.empty() ? parse_vector(r_f) : read_values_file(r_ffile);
                const auto g = r_gfile.empty() ? parse_vector(r_g) : read_values_file(r_gfile);
                const auto r = unlearn::whitenoise_region(f, g, r_alpha, r_eps);
                payload = unlearn::to_json(r, "whitenoise");
                if (!r_member.empty()) payload["member_result"] = r.member(parse_vector(r_member));
            } else if (r_family == "hilbert") {
                const auto r = unlearn::hilbert_region(parse_vector(r_lambda), parse_vector(r_mu1),
                                                       parse_vector(r_nu1), r_alpha, r_eps);
                payload = unlearn::to_json(r, "hilbert");
                if (!r_member.empty()) payload["member_result"] = r.member(parse_vector(r_member));
            } else if (r_family == "multilocation") {
                const auto r = unlearn::multi_region_1d(parse_vector(r_mu1),
                                                        parse_vector(r_alpha_list),
                                                        parse_vector(r_nu1),
                                                        parse_vector(r_eps_list));
                payload = unlearn::to_json(r, "multilocation");
                if (!r_member.empty()) payload["member_result"] = r.member(std::stod(r_member));
            } else if (r_family == "multigaussian") {
                const auto mus = parse_vector_list(r_mu1);
                const auto nus = parse_vector_list(r_nu1);
                const auto alphas = parse_vector(r_alpha_list);
                const auto epss = parse_vector(r_eps_list);
                const auto cov = r_cov.empty() ? unlearn::isotropic_matrix(r_d, r_sigma2)
                                               : parse_matrix(r_cov, r_d);
                const auto r = unlearn::multi_gaussian_sample_region(mus, alphas, nus, epss, cov,
                                                                     r_d, r_budget, seed);
                payload = unlearn::to_json(r, "multigaussian");
                if (!r_member.empty())
                    payload["member_result"] = unlearn::multi_gaussian_member(
                        parse_vector(r_member), mus, alphas, nus, epss, cov, r_d);
            } else {
                throw ValidationError("unknown region family '" + r_family + "'");
            }
            emit(payload.dump(2), out_path);
        } else if (*pareto) {
            if (p_family == "poisson") {
                const auto intervals =
                    unlearn::poisson_pareto(std::stod(p_mu1), std::stod(p_nu1), p_eps);
                emit(format == "json" ? unlearn::to_json(intervals).dump(2)
                                      : unlearn::to_csv(intervals),
                     out_path);
            } else {
                double delta = 0.0;
                if (p_family == "gaussian") {
                    const auto cov = p_cov.empty() ? unlearn::isotropic_matrix(p_d, p_sigma2)
                                                   : parse_matrix(p_cov, p_d);
                    delta = unlearn::gaussian_region(parse_vector(p_mu1), parse_vector(p_nu1), cov,
                                                     p_d, 0.0, 0.0)
                                .delta;
                } else if (p_family == "location") {
                    delta = std::abs(std::stod(p_mu1) - std::stod(p_nu1));
                } else if (p_family == "whitenoise") {
                    delta = unlearn::whitenoise_region(parse_vector(p_f), parse_vector(p_g), 0.0, 0.0)
                                .delta;
                } else if (p_family == "hilbert") {
                    delta = unlearn::hilbert_region(parse_vector(p_lambda), parse_vector(p_mu1),
                                                    parse_vector(p_nu1), 0.0, 0.0)
                                .delta;
                } else {
                    throw ValidationError("unknown pareto family '" + p_family + "'");
                }
                if (format == "json") {
                    json samples = json::array();
                    for (int i = 0; i < p_samples; ++i) {
                        const double e = p_eps_max * i / std::max(1, p_samples - 1);
                        samples.push_back({e, delta + e});
                    }
                    emit(json{{"schema", "v1"}, {"family", p_family}, {"delta", delta},
                              {"pareto_samples", samples}}
                             .dump(2),
                         out_path);
                } else {
                    emit(unlearn::pareto_csv(delta, p_eps_max, p_samples), out_path);
                }
            }
        } else if (*curve) {
            unlearn::TradeoffCurve c = unlearn::TradeoffCurve::identity();
            if (c_gaussian >= 0.0) {
                c = unlearn::TradeoffCurve::gaussian_shift(c_gaussian);
            } else if (!c_poisson.empty()) {
                const auto ab = parse_vector(c_poisson);
                if (ab.size() != 2) throw ValidationError("--poisson expects 'a,b'");
                c = unlearn::TradeoffCurve::poisson_pair(ab[0], ab[1]);
            } else if (!c_binomial.empty()) {
                const auto nab = parse_vector(c_binomial);
                if (nab.size() != 3) throw ValidationError("--binomial expects 'n,a,b'");
                c = unlearn::TradeoffCurve::binomial_pair(static_cast<long>(nab[0]), nab[1], nab[2]);
            } else if (!c_location.empty()) {
                std::stringstream ss(c_location);
                std::string kind, scale, shift;
                std::getline(ss, kind, ',');
                std::getline(ss, scale, ',');
                std::getline(ss, shift, ',');
                c = unlearn::TradeoffCurve::location_shift(make_noise(kind, std::stod(scale)),
                                                           std::stod(shift));
            } else {
                throw ValidationError("curve: choose one of --gaussian-shift/--poisson/--binomial/--location");
            }
            const auto numeric = unlearn::curve_to_numeric(c, c_points);
            emit(format == "json" ? unlearn::to_json(numeric).dump(2) : unlearn::to_csv(numeric),
                 out_path);
        } else if (*bounds) {
            std::optional<unlearn::NoiseModel> noise;
            if (!b_noise.empty()) noise = make_noise(b_noise, b_noise_scale);
            const auto estimator = b_estimator == "median" ? unlearn::Estimator::WeightedMedian
                                                           : unlearn::Estimator::WeightedMean;
            bool delta_estimated = false;
            if (b_estimate) {
                if (b_s1.empty() || b_s2.empty())
                    throw ValidationError("--estimate-delta requires --s1 and --s2 sample files");
                const auto m1 = unlearn::estimate_center(read_sample_csv(b_s1), estimator);
                const auto m2 = unlearn::estimate_center(read_sample_csv(b_s2), estimator);
                b_Delta = unlearn::euclidean_distance(m1, m2) / b_sigma;
                delta_estimated = true;
            }
            if (b_Delta < 0.0) throw ValidationError("bounds: provide --Delta or --estimate-delta");
            const auto cert =
                b_algorithm == "selective"
                    ? unlearn::selective_removal_certificate(b_n1, b_n2, b_nr, b_d, b_delta, b_Delta,
                                                             b_sigma, noise, estimator, b_variant)
                    : unlearn::random_removal_certificate(b_n1, b_n2, b_nr, b_d, b_delta, b_Delta,
                                                          b_sigma, noise, estimator);
            json payload = unlearn::to_json(cert);
            if (delta_estimated) {
                payload["Delta_estimated"] = true;
                payload["Delta_note"] = "plug-in estimate; not covered by the guarantees";
            }
            emit(payload.dump(2), out_path);
        } else if (*simulate) {
            unlearn::TrialConfig cfg;
            if (s_family == "gaussian") {
                cfg.family = unlearn::GaussianPairSpec{s_d, s_sigma, parse_vector(s_mu1),
                                                       parse_vector(s_nu1)};
            } else if (s_family == "location") {
                cfg.family = unlearn::LocationPairSpec{make_noise(s_noise, s_noise_scale),
                                                       std::stod(s_mu1), std::stod(s_nu1)};
            } else {
                throw ValidationError("unknown simulate family '" + s_family + "'");
            }
            cfg.n1 = s_n1;
            cfg.n2 = s_n2;
            cfg.n_r = s_nr;
            cfg.delta = s_delta;
            cfg.algorithm = s_algorithm == "selective" ? unlearn::Algorithm::Selective
                                                       : unlearn::Algorithm::Random;
            cfg.estimator = s_estimator == "median" ? unlearn::Estimator::WeightedMedian
                                                    : unlearn::Estimator::WeightedMean;
            cfg.selective_variant = s_variant;
            cfg.trials = s_trials;
            cfg.root_seed = seed;
            emit(unlearn::to_json(unlearn::run_trials(cfg)).dump(2), out_path);
        } else if (*compare) {
            emit(unlearn::to_json(unlearn::comparison_threshold(x_n1, x_n2, x_nr, x_delta)).dump(2),
                 out_path);
        } else if (*sweep) {
            unlearn::SweepFamily family = unlearn::SweepFamily::Poisson;
            if (w_family == "bernoulli") family = unlearn::SweepFamily::Bernoulli;
            else if (w_family == "binomial") family = unlearn::SweepFamily::Binomial;
            else if (w_family != "poisson")
                throw ValidationError("unknown sweep family '" + w_family + "'");
            const auto report = unlearn::domination_oracle_sweep(family, w_count, seed, w_n);
            emit(format == "json" ? unlearn::to_json(report).dump(2) : unlearn::to_csv(report),
                 out_path);
        }
    } catch (const ValidationError& e) {
        if (format == "json") {
            std::cout << json{{"schema", "v1"}, {"error", e.what()}}.dump(2) << '\n';
        } else {
            std::cerr << "error: " << e.what() << '\n';
        }
        return 2;
    } catch (const std::invalid_argument& e) {
        if (format == "json") {
            std::cout << json{{"schema", "v1"}, {"error", e.what()}}.dump(2) << '\n';
        } else {
            std::cerr << "error: " << e.what() << '\n';
        }
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
