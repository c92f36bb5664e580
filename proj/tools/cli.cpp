#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "sdbf/bayes.hpp"
#include "sdbf/datasets.hpp"
#include "sdbf/design.hpp"
#include "sdbf/errors.hpp"
#include "sdbf/posterior.hpp"
#include "sdbf/quadrature.hpp"
#include "sdbf/sensitivity.hpp"
#include "sdbf/summaries.hpp"

namespace sdbf::cli {

namespace {

using json = nlohmann::ordered_json;

enum class Format { text, json, csv };

std::string fmt(double v) {
    if (std::isnan(v)) return "NA";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

json jnum(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) parts.push_back(cur);
    if (!s.empty() && s.back() == sep) parts.emplace_back();
    return parts;
}

double parse_real(const std::string& text, const std::string& what) {
    const char* begin = text.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (text.empty() || end != begin + text.size() || std::isnan(v))
        throw DomainError("invalid number '" + text + "' for " + what);
    return v;
}

std::size_t parse_count(const std::string& text, const std::string& what) {
    const double v = parse_real(text, what);
    if (!(v >= 0.0) || v != std::floor(v) || v > 1e15) throw DomainError("invalid count '" + text + "' for " + what);
    return static_cast<std::size_t>(v);
}

Format parse_format(const std::string& name) {
    if (name == "text") return Format::text;
    if (name == "json") return Format::json;
    if (name == "csv") return Format::csv;
    throw DomainError("unknown format '" + name + "' (expected text, json or csv)");
}

std::vector<Method> parse_methods(const std::string& list) {
    if (list == "all") {
        return {Method::savage_dickey_quadrature, Method::savage_dickey_ratio, Method::closed_form_normal,
                Method::jeffreys_unit_info, Method::jeffreys_general, Method::laplace};
    }
    std::vector<Method> methods;
    for (const std::string& name : split(list, ',')) {
        const auto m = parse_method(name);
        if (!m) throw DomainError("unknown method '" + name + "'");
        methods.push_back(*m);
    }
    if (methods.empty()) throw DomainError("no methods given");
    return methods;
}

// family:location:scale[:df]
PriorSpec parse_prior(const std::string& text, const std::string& lower, const std::string& upper) {
    const std::vector<std::string> parts = split(text, ':');
    if (parts.size() < 3 || parts.size() > 4)
        throw DomainError("prior must look like family:location:scale[:df], got '" + text + "'");
    const Family family = parse_family(parts[0]);
    const double location = parse_real(parts[1], "prior location");
    const double scale = parse_real(parts[2], "prior scale");
    double df = family == Family::cauchy ? 1.0 : kInf;
    if (family == Family::student_t) {
        if (parts.size() != 4) throw DomainError("student_t prior needs a df: student_t:location:scale:df");
        df = parse_real(parts[3], "prior df");
    } else if (parts.size() == 4) {
        throw DomainError("only student_t priors take a df");
    }
    return PriorSpec(family, location, scale, df, parse_real(lower, "--lower"), parse_real(upper, "--upper"));
}

json prior_json(const PriorSpec& p) {
    return json{{"family", to_string(p.family())}, {"location", p.location()}, {"scale", p.scale()},
                {"df", jnum(p.df())}, {"lower", jnum(p.lower())}, {"upper", jnum(p.upper())}};
}

std::vector<MetaDatum> read_meta(const std::string& source) {
    if (source == "power_pose") return datasets::power_pose();
    std::ifstream in(source);
    if (!in) throw DomainError("cannot open meta-analysis file '" + source + "'");
    std::string line;
    if (!std::getline(in, line)) throw DomainError("meta-analysis file is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "y,se,x") throw DomainError("meta-analysis CSV header must be 'y,se,x'");
    std::vector<MetaDatum> data;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto f = split(line, ',');
        if (f.size() != 3) throw DomainError("meta-analysis row needs three fields: '" + line + "'");
        data.push_back({parse_real(f[0], "y"), parse_real(f[1], "se"), parse_real(f[2], "x")});
    }
    return data;
}

struct Observed {
    std::vector<EffectEstimate> estimates;
    std::vector<std::optional<double>> sample_sizes;
};

Observed read_observed(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open observed-sequence file '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw DomainError("observed-sequence file is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const bool with_n = line == "theta_hat,se,n";
    if (line != "theta_hat,se" && !with_n) throw DomainError("observed-sequence header must be 'theta_hat,se[,n]'");
    Observed obs;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto f = split(line, ',');
        if (f.size() != (with_n ? 3u : 2u)) throw DomainError("malformed observed-sequence row: '" + line + "'");
        obs.estimates.push_back({parse_real(f[0], "theta_hat"), parse_real(f[1], "se")});
        obs.sample_sizes.push_back(with_n ? std::optional<double>(parse_real(f[2], "n")) : std::nullopt);
    }
    return obs;
}

// "log:lo:hi:n", "lin:lo:hi:n" or a comma-separated list.
std::vector<double> parse_grid(const std::string& text) {
    const auto parts = split(text, ':');
    if (parts.size() == 4 && (parts[0] == "log" || parts[0] == "lin")) {
        const double lo = parse_real(parts[1], "grid start");
        const double hi = parse_real(parts[2], "grid end");
        const std::size_t n = parse_count(parts[3], "grid size");
        return parts[0] == "log" ? log_spaced(lo, hi, n) : linear_spaced(lo, hi, n);
    }
    if (parts.size() != 1) throw DomainError("grid must be log:lo:hi:n, lin:lo:hi:n or a comma list");
    std::vector<double> grid;
    for (const auto& v : split(text, ',')) grid.push_back(parse_real(v, "grid value"));
    return grid;
}

// "start:stop:step" or a comma-separated list.
std::vector<std::size_t> parse_looks(const std::string& text) {
    const auto parts = split(text, ':');
    std::vector<std::size_t> looks;
    if (parts.size() == 3) {
        const std::size_t start = parse_count(parts[0], "looks start");
        const std::size_t stop = parse_count(parts[1], "looks stop");
        const std::size_t step = parse_count(parts[2], "looks step");
        if (step == 0 || stop < start) throw DomainError("looks need start <= stop and a positive step");
        for (std::size_t n = start; n <= stop; n += step) looks.push_back(n);
        return looks;
    }
    if (parts.size() != 1) throw DomainError("looks must be start:stop:step or a comma list");
    for (const auto& v : split(text, ',')) looks.push_back(parse_count(v, "look"));
    return looks;
}

[[noreturn]] void raise(const MethodOutcome& o) {
    const std::string msg = std::string(to_string(o.method)) + ": " + o.message;
    switch (o.status) {
        case OutcomeStatus::ill_posed: throw IllPosedTestError(msg);
        case OutcomeStatus::undefined_laplace: throw UndefinedLaplaceError(msg);
        case OutcomeStatus::numerical_failure: throw ConvergenceError(msg, {});
        default: throw DomainError(msg);
    }
}

struct CommonArgs {
    std::string format = "text";
    std::string output;
    std::string config;

    void attach(CLI::App* app, const std::string& formats) {
        app->add_option("--format", format, "Output format: " + formats);
        app->add_option("--output", output, "Write output to this file instead of stdout");
        app->add_option("--config", config, "JSON file of flag values; explicit flags win");
    }
};

struct EstimateArgs {
    std::optional<double> theta_hat;
    std::optional<double> se;
    std::optional<double> p_value;
    std::string direction = "two_sided";
    double sign = 1.0;
    std::string meta;
    std::string coefficient = "alpha";
    std::vector<double> summary;

    void attach(CLI::App* app) {
        app->add_option("--theta-hat", theta_hat, "Estimate of the focal parameter");
        app->add_option("--se", se, "Standard error of the estimate");
        app->add_option("--p-value", p_value, "Derive the estimate as z(p) * se");
        app->add_option("--direction", direction, "p-value direction: two_sided, greater or less");
        app->add_option("--sign", sign, "Sign of z for two-sided p-values");
        app->add_option("--meta", meta, "Meta-regression data: 'power_pose' or a CSV with header y,se,x");
        app->add_option("--coefficient", coefficient, "Meta-regression coefficient: alpha or beta");
        app->add_option("--summary", summary, "Two-sample summary mean1,sd1,n1,mean2,sd2,n2 (Cohen's d)")
            ->delimiter(',')
            ->expected(6);
    }

    std::pair<EffectEstimate, json> resolve() const {
        const int sources = (theta_hat ? 1 : 0) + (p_value ? 1 : 0) + (!meta.empty() ? 1 : 0) +
                            (!summary.empty() ? 1 : 0);
        if (sources != 1)
            throw DomainError("give exactly one of --theta-hat, --p-value, --meta or --summary");
        if (theta_hat) {
            if (!se) throw DomainError("--theta-hat needs --se");
            return {{*theta_hat, *se}, json{{"theta_hat", *theta_hat}, {"se", *se}}};
        }
        if (p_value) {
            if (!se) throw DomainError("--p-value needs --se");
            Direction d;
            if (direction == "two_sided") d = Direction::two_sided;
            else if (direction == "greater") d = Direction::greater;
            else if (direction == "less") d = Direction::less;
            else throw DomainError("unknown direction '" + direction + "'");
            const double z = p_value_to_z(*p_value, d, sign);
            return {{z * *se, *se},
                    json{{"p_value", *p_value}, {"direction", direction}, {"z", z}, {"theta_hat", z * *se}, {"se", *se}}};
        }
        if (!meta.empty()) {
            if (coefficient != "alpha" && coefficient != "beta")
                throw DomainError("--coefficient must be alpha or beta");
            const WlsFit fit = wls_fit(read_meta(meta));
            const EffectEstimate e =
                sdbf::coefficient(fit, coefficient == "alpha" ? Coefficient::alpha : Coefficient::beta);
            return {e, json{{"meta", meta}, {"coefficient", coefficient}, {"theta_hat", e.estimate}, {"se", e.se}}};
        }
        const TwoSampleSummary s{summary[0], summary[1], summary[2], summary[3], summary[4], summary[5]};
        const EffectEstimate e = cohen_d_mle(s);
        return {e, json{{"summary", summary}, {"theta_hat", e.estimate}, {"se", e.se}}};
    }
};

struct PriorArgs {
    std::string prior;
    std::string lower = "-inf";
    std::string upper = "inf";
    double theta0 = 0.0;

    void attach(CLI::App* app, bool required = true) {
        auto* opt = app->add_option("--prior", prior, "H1 prior family:location:scale[:df]");
        if (required) opt->required();
        app->add_option("--lower", lower, "Lower truncation bound of the prior");
        app->add_option("--upper", upper, "Upper truncation bound of the prior");
        app->add_option("--theta0", theta0, "Test value under H0");
    }

    HypothesisTest test() const { return HypothesisTest(theta0, parse_prior(prior, lower, upper)); }
};

void emit(const std::string& text, const CommonArgs& common, std::ostream& out) {
    if (common.output.empty()) {
        out << text;
        return;
    }
    std::ofstream file(common.output);
    if (!file) throw DomainError("cannot write '" + common.output + "'");
    file << text;
}

json result_json(const BayesFactorResult& r, const json& inputs) {
    return json{{"method", to_string(r.method)},       {"log_bf10", r.log_bf10}, {"bf10", jnum(r.bf10)},
                {"bf01", jnum(r.bf01)},                {"numerical_error", r.numerical_error},
                {"inputs", inputs}};
}

// ---------------------------------------------------------------- bf

struct BfCommand {
    CommonArgs common;
    EstimateArgs estimate;
    PriorArgs prior;
    std::string methods = "savage_dickey";
    std::optional<double> n;
    double jeffreys_a = 1.0;
    bool ignore_truncation = false;

    void attach(CLI::App* app) {
        common.attach(app, "text, json or csv");
        estimate.attach(app);
        prior.attach(app);
        app->add_option("--method", methods,
                        "Comma list of savage_dickey, savage_dickey_ratio, closed_form_normal, "
                        "jeffreys_unit_info, jeffreys_general, laplace, or 'all'");
        app->add_option("--n", n, "Sample size for the Jeffreys approximations");
        app->add_option("--jeffreys-a", jeffreys_a, "Constant A of the general Jeffreys approximation");
        app->add_flag("--ignore-truncation", ignore_truncation,
                      "Laplace: use the untruncated prior density at the estimate");
    }

    int run(std::ostream& out) const {
        const Format format = parse_format(common.format);
        const auto [est, est_inputs] = estimate.resolve();
        const HypothesisTest test = prior.test();
        const std::vector<Method> ms = parse_methods(methods);
        EvaluationOptions opts;
        opts.laplace_ignore_truncation = ignore_truncation;
        opts.sample_size = n;
        opts.jeffreys_a = jeffreys_a;

        json inputs = est_inputs;
        inputs["theta0"] = test.theta0;
        inputs["prior"] = prior_json(test.prior);
        if (n) inputs["n"] = *n;

        std::vector<BayesFactorResult> results;
        for (Method m : ms) {
            const MethodOutcome o = evaluate(m, est.likelihood(), test, opts);
            if (!o.ok()) raise(o);
            results.push_back(*o.result);
        }

        std::ostringstream s;
        if (format == Format::json) {
            if (results.size() == 1) {
                s << result_json(results[0], inputs).dump(2) << '\n';
            } else {
                json arr = json::array();
                for (const auto& r : results) arr.push_back(result_json(r, inputs));
                s << arr.dump(2) << '\n';
            }
        } else if (format == Format::csv) {
            s << "method,log_bf10,bf10,bf01,numerical_error\n";
            for (const auto& r : results)
                s << to_string(r.method) << ',' << fmt(r.log_bf10) << ',' << fmt(r.bf10) << ',' << fmt(r.bf01)
                  << ',' << fmt(r.numerical_error) << '\n';
        } else {
            s << "estimate " << fmt(est.estimate) << " (se " << fmt(est.se) << "), theta0 " << fmt(test.theta0)
              << ", prior " << describe(test.prior) << '\n';
            for (const auto& r : results) {
                s << "\nmethod           " << to_string(r.method) << '\n'
                  << "BF10             " << fmt(r.bf10) << '\n'
                  << "BF01             " << fmt(r.bf01) << '\n'
                  << "log BF10         " << fmt(r.log_bf10) << '\n'
                  << "numerical error  " << fmt(r.numerical_error) << '\n';
                if (r.saturated) s << "note             |log BF10| > 700; natural-scale values saturated\n";
            }
        }
        emit(s.str(), common, out);
        return kSuccess;
    }
};

// ---------------------------------------------------------------- posterior

struct PosteriorCommand {
    CommonArgs common;
    EstimateArgs estimate;
    PriorArgs prior;
    std::size_t points = 200;
    std::vector<double> quantiles{0.025, 0.5, 0.975};

    void attach(CLI::App* app) {
        common.attach(app, "text, json or csv (theta,density)");
        estimate.attach(app);
        prior.attach(app);
        app->add_option("--points", points, "Initial number of grid points (refined where needed)");
        app->add_option("--quantiles", quantiles, "Posterior quantiles to report")->delimiter(',');
    }

    int run(std::ostream& out) const {
        const Format format = parse_format(common.format);
        const auto [est, est_inputs] = estimate.resolve();
        const HypothesisTest test = prior.test();
        const ApproxLikelihood lik = est.likelihood();
        const PosteriorGrid grid = posterior_grid(lik, test.prior, points);

        std::ostringstream s;
        if (format == Format::csv) {
            s << "theta,density\n";
            for (std::size_t i = 0; i < grid.theta.size(); ++i)
                s << fmt(grid.theta[i]) << ',' << fmt(grid.density[i]) << '\n';
            emit(s.str(), common, out);
            return kSuccess;
        }
        const ApproxPosterior post(lik, test.prior);
        std::vector<std::pair<double, double>> qs;
        for (double p : quantiles) qs.emplace_back(p, post.quantile(p));
        if (format == Format::json) {
            json inputs = est_inputs;
            inputs["prior"] = prior_json(test.prior);
            json jq = json::array();
            for (const auto& [p, q] : qs) jq.push_back(json{{"p", p}, {"theta", q}});
            json doc{{"inputs", inputs},
                     {"log_normalizer", grid.log_normalizer},
                     {"normalizer", grid.normalizer},
                     {"quantiles", jq},
                     {"grid", json{{"theta", grid.theta}, {"density", grid.density}}}};
            s << doc.dump(2) << '\n';
        } else {
            s << "posterior under H1: estimate " << fmt(est.estimate) << " (se " << fmt(est.se) << "), prior "
              << describe(test.prior) << '\n'
              << "log marginal likelihood  " << fmt(grid.log_normalizer) << '\n'
              << "grid points              " << grid.theta.size() << " on [" << fmt(grid.theta.front()) << ", "
              << fmt(grid.theta.back()) << "]\n"
              << "trapezoid mass           " << fmt(trapezoid_mass(grid)) << '\n';
            for (const auto& [p, q] : qs) s << "quantile " << fmt(p) << "  " << fmt(q) << '\n';
        }
        emit(s.str(), common, out);
        return kSuccess;
    }
};

// ---------------------------------------------------------------- sensitivity

struct SensitivityCommand {
    CommonArgs common;
    EstimateArgs estimate;
    PriorArgs prior;
    std::string vary = "scale";
    std::string grid = "log:0.05:2:40";
    std::string methods = "savage_dickey";
    bool ignore_truncation = false;
    std::size_t threads = 1;

    void attach(CLI::App* app) {
        common.attach(app, "text, json or csv (varied_value,method,log_bf10,bf10,status)");
        estimate.attach(app);
        prior.attach(app);
        app->add_option("--vary", vary, "Prior field to vary: scale, location or df");
        app->add_option("--grid", grid, "log:lo:hi:n, lin:lo:hi:n or a comma list of values");
        app->add_option("--method", methods, "Comma list of methods (see bf)");
        app->add_flag("--ignore-truncation", ignore_truncation,
                      "Laplace: use the untruncated prior density at the estimate");
        app->add_option("--threads", threads, "Worker threads (0 = all cores); output does not depend on it");
    }

    int run(std::ostream& out) const {
        const Format format = parse_format(common.format);
        const auto [est, est_inputs] = estimate.resolve();
        SensitivitySpec spec{prior.test(), parse_varied_field(vary), parse_grid(grid), parse_methods(methods),
                             EvaluationOptions{ignore_truncation, std::nullopt, 1.0}, threads};
        const auto rows = sweep(est.likelihood(), spec);

        std::ostringstream s;
        if (format == Format::csv) {
            s << "varied_value,method,log_bf10,bf10,status\n";
            for (const auto& row : rows)
                for (const auto& o : row.outcomes)
                    s << fmt(row.varied_value) << ',' << to_string(o.method) << ','
                      << (o.ok() ? fmt(o.result->log_bf10) : "NA") << ',' << (o.ok() ? fmt(o.result->bf10) : "NA")
                      << ',' << to_string(o.status) << '\n';
        } else if (format == Format::json) {
            json inputs = est_inputs;
            inputs["theta0"] = spec.base.theta0;
            inputs["prior"] = prior_json(spec.base.prior);
            inputs["vary"] = vary;
            json jrows = json::array();
            for (const auto& row : rows) {
                json cells = json::array();
                for (const auto& o : row.outcomes) {
                    json c{{"method", to_string(o.method)}, {"status", to_string(o.status)}};
                    c["log_bf10"] = o.ok() ? jnum(o.result->log_bf10) : json(nullptr);
                    c["bf10"] = o.ok() ? jnum(o.result->bf10) : json(nullptr);
                    if (!o.ok()) c["message"] = o.message;
                    cells.push_back(c);
                }
                jrows.push_back(json{{"varied_value", row.varied_value}, {"results", cells}});
            }
            s << json{{"inputs", inputs}, {"rows", jrows}}.dump(2) << '\n';
        } else {
            s << "sensitivity of BF10 to the prior " << vary << ": estimate " << fmt(est.estimate) << " (se "
              << fmt(est.se) << "), base prior " << describe(spec.base.prior) << '\n';
            char line[160];
            std::snprintf(line, sizeof line, "%14s", vary.c_str());
            s << line;
            for (Method m : spec.methods) {
                std::snprintf(line, sizeof line, "  %24s", std::string(to_string(m)).c_str());
                s << line;
            }
            s << '\n';
            for (const auto& row : rows) {
                std::snprintf(line, sizeof line, "%14s", fmt(row.varied_value).c_str());
                s << line;
                for (const auto& o : row.outcomes) {
                    const std::string cell = o.ok() ? fmt(o.result->bf10) : std::string(to_string(o.status));
                    std::snprintf(line, sizeof line, "  %24s", cell.c_str());
                    s << line;
                }
                s << '\n';
            }
        }
        emit(s.str(), common, out);
        return kSuccess;
    }
};

// ---------------------------------------------------------------- design

struct DesignCommand {
    CommonArgs common;
    PriorArgs prior;
    double true_effect = 0.0;
    double sd = 1.0;
    std::string looks = "20:200:20";
    std::string bounds = "0.1:10";
    std::size_t reps = 1000;
    std::uint64_t seed = 1;
    std::string method = "savage_dickey";
    std::size_t threads = 1;

    void attach(CLI::App* app) {
        common.attach(app, "text, json or csv (one row per replicate)");
        prior.attach(app);
        app->add_option("--true-effect", true_effect, "True mean of the simulated observations");
        app->add_option("--sd", sd, "Per-observation standard deviation");
        app->add_option("--looks", looks, "Cumulative sample sizes: start:stop:step or a comma list");
        app->add_option("--bf-bounds", bounds, "BF10 stopping thresholds lower:upper");
        app->add_option("--reps", reps, "Number of simulated replicates");
        app->add_option("--seed", seed, "Random seed");
        app->add_option("--method", method, "Bayes factor method at each look");
        app->add_option("--threads", threads, "Worker threads (0 = all cores); output does not depend on it");
    }

    int run(std::ostream& out) const {
        const Format format = parse_format(common.format);
        const auto b = split(bounds, ':');
        if (b.size() != 2) throw DomainError("--bf-bounds must be lower:upper");
        const auto ms = parse_methods(method);
        if (ms.size() != 1) throw DomainError("design takes a single --method");
        DesignSpec spec{.true_effect = true_effect,
                        .unit_sd = sd,
                        .looks = parse_looks(looks),
                        .test = prior.test(),
                        .upper_threshold = parse_real(b[1], "upper bound"),
                        .lower_threshold = parse_real(b[0], "lower bound"),
                        .replications = reps,
                        .seed = seed,
                        .method = ms[0],
                        .effect_prior = std::nullopt,
                        .threads = threads};
        const DesignResult res = run_design(spec);

        std::ostringstream s;
        if (format == Format::csv) {
            s << "replicate,stop_look,stop_n,boundary,terminal_log_bf10\n";
            for (std::size_t i = 0; i < res.replicates.size(); ++i) {
                const auto& r = res.replicates[i];
                s << i << ',' << r.stop_look << ',' << r.stop_n << ',' << to_string(r.boundary) << ','
                  << fmt(r.terminal_log_bf10) << '\n';
            }
        } else if (format == Format::json) {
            json q = json::object();
            for (std::size_t i = 0; i < res.quantile_levels.size(); ++i)
                q[fmt(res.quantile_levels[i])] = res.stopping_n_quantiles[i];
            json inputs{{"true_effect", true_effect}, {"sd", sd},       {"looks", spec.looks},
                        {"theta0", spec.test.theta0}, {"prior", prior_json(spec.test.prior)},
                        {"lower_threshold", spec.lower_threshold}, {"upper_threshold", spec.upper_threshold},
                        {"replications", reps},       {"seed", seed},   {"method", to_string(spec.method)}};
            json doc{{"inputs", inputs},
                     {"p_h1", res.p_h1},
                     {"p_h0", res.p_h0},
                     {"p_max_n", res.p_max_n},
                     {"stopping_n_quantiles", q},
                     {"mean_stopping_n", res.mean_stopping_n},
                     {"mean_terminal_log_bf10", res.mean_terminal_log_bf10}};
            s << doc.dump(2) << '\n';
        } else {
            s << "design analysis: " << reps << " replicates, true effect " << fmt(true_effect) << ", sd " << fmt(sd)
              << ", looks " << spec.looks.front() << ".." << spec.looks.back() << " (" << spec.looks.size()
              << "), stop at BF10 <= " << fmt(spec.lower_threshold) << " or >= " << fmt(spec.upper_threshold)
              << '\n'
              << "P(stop for H1)         " << fmt(res.p_h1) << '\n'
              << "P(stop for H0)         " << fmt(res.p_h0) << '\n'
              << "P(reach max n)         " << fmt(res.p_max_n) << '\n'
              << "mean stopping n        " << fmt(res.mean_stopping_n) << '\n'
              << "mean terminal log BF10 " << fmt(res.mean_terminal_log_bf10) << '\n'
              << "stopping n quantiles  ";
            for (std::size_t i = 0; i < res.quantile_levels.size(); ++i)
                s << ' ' << fmt(res.quantile_levels[i]) << ':' << res.stopping_n_quantiles[i];
            s << '\n';
        }
        emit(s.str(), common, out);
        return kSuccess;
    }
};

// ---------------------------------------------------------------- sequential

struct SequentialCommand {
    CommonArgs common;
    PriorArgs prior;
    std::string input;
    std::string methods = "savage_dickey";
    bool ignore_truncation = false;

    void attach(CLI::App* app) {
        common.attach(app, "text, json or csv (look,n,method,log_bf10,status)");
        prior.attach(app);
        app->add_option("--input", input, "CSV with header theta_hat,se or theta_hat,se,n")->required();
        app->add_option("--method", methods, "Comma list of methods (see bf)");
        app->add_flag("--ignore-truncation", ignore_truncation,
                      "Laplace: use the untruncated prior density at the estimate");
    }

    int run(std::ostream& out) const {
        const Format format = parse_format(common.format);
        const Observed obs = read_observed(input);
        const HypothesisTest test = prior.test();
        const auto ms = parse_methods(methods);
        std::vector<std::vector<MethodOutcome>> per_look;
        for (std::size_t k = 0; k < obs.estimates.size(); ++k) {
            EvaluationOptions opts{ignore_truncation, obs.sample_sizes[k], 1.0};
            auto looks = sequential_bf_from_observed(std::span(&obs.estimates[k], 1), test, ms, opts);
            per_look.push_back(std::move(looks.front()));
        }

        std::ostringstream s;
        auto n_text = [&](std::size_t k) { return obs.sample_sizes[k] ? fmt(*obs.sample_sizes[k]) : "NA"; };
        if (format == Format::csv) {
            s << "look,n,method,log_bf10,status\n";
            for (std::size_t k = 0; k < per_look.size(); ++k)
                for (const auto& o : per_look[k])
                    s << k + 1 << ',' << n_text(k) << ',' << to_string(o.method) << ','
                      << (o.ok() ? fmt(o.result->log_bf10) : "NA") << ',' << to_string(o.status) << '\n';
        } else if (format == Format::json) {
            json looks = json::array();
            for (std::size_t k = 0; k < per_look.size(); ++k) {
                json cells = json::array();
                for (const auto& o : per_look[k]) {
                    json c{{"method", to_string(o.method)}, {"status", to_string(o.status)}};
                    c["log_bf10"] = o.ok() ? jnum(o.result->log_bf10) : json(nullptr);
                    cells.push_back(c);
                }
                looks.push_back(json{{"look", k + 1},
                                     {"n", obs.sample_sizes[k] ? json(*obs.sample_sizes[k]) : json(nullptr)},
                                     {"theta_hat", obs.estimates[k].estimate},
                                     {"se", obs.estimates[k].se},
                                     {"results", cells}});
            }
            s << json{{"inputs", json{{"theta0", test.theta0}, {"prior", prior_json(test.prior)}}},
                      {"looks", looks}}
                     .dump(2)
              << '\n';
        } else {
            s << "sequential Bayes factors, prior " << describe(test.prior) << '\n';
            for (std::size_t k = 0; k < per_look.size(); ++k) {
                s << "look " << k + 1 << " (n " << n_text(k) << ", estimate " << fmt(obs.estimates[k].estimate)
                  << ", se " << fmt(obs.estimates[k].se) << ")";
                for (const auto& o : per_look[k])
                    s << "  " << to_string(o.method) << '='
                      << (o.ok() ? fmt(o.result->bf10) : std::string(to_string(o.status)));
                s << '\n';
            }
        }
        emit(s.str(), common, out);
        return kSuccess;
    }
};

// ---------------------------------------------------------------- reproduce

struct ReproRow {
    std::string label;
    double computed;
    std::optional<datasets::ReferenceValue> reference;
};

std::vector<ReproRow> reproduce_example(datasets::Example example) {
    using datasets::Example;
    const auto refs = datasets::reference_values(example);
    auto ref = [&](const std::string& label) -> std::optional<datasets::ReferenceValue> {
        for (const auto& r : refs)
            if (r.label == label) return r;
        return std::nullopt;
    };
    std::vector<ReproRow> rows;
    switch (example) {
        case Example::t_test: {
            const auto est = datasets::facial_feedback_estimate();
            const HypothesisTest test(0.0, datasets::facial_feedback_prior());
            const auto r = sd_bf(est.likelihood(), test);
            const auto d = cohen_d_mle(datasets::facial_feedback_summary());
            rows.push_back({"BF10", r.bf10, ref("BF10")});
            rows.push_back({"BF01", r.bf01, ref("BF01")});
            rows.push_back({"d from summaries", d.estimate, std::nullopt});
            rows.push_back({"se(d) from summaries", d.se, std::nullopt});
            rows.push_back({"BF10 from summaries", sd_bf(d.likelihood(), test).bf10, std::nullopt});
            break;
        }
        case Example::survival_weak: {
            const auto est = datasets::survival_estimate();
            const HypothesisTest test(0.0, datasets::survival_weak_prior());
            rows.push_back({"BF10", sd_bf(est.likelihood(), test).bf10, ref("BF10")});
            rows.push_back({"BF10 closed form", closed_form_normal_bf(est.likelihood(), 0.0, 1.0, 0.0).bf10, ref("BF10")});
            rows.push_back({"Laplace BF10", laplace_bf(est.likelihood(), test).bf10, std::nullopt});
            break;
        }
        case Example::survival_informed: {
            const auto est = datasets::survival_estimate();
            const HypothesisTest test(0.0, datasets::survival_informed_prior());
            rows.push_back({"BF01", sd_bf(est.likelihood(), test).bf01, ref("BF01")});
            rows.push_back({"Laplace BF01 (untruncated density)", laplace_bf(est.likelihood(), test, true).bf01,
                            ref("Laplace BF01 (untruncated density)")});
            break;
        }
        case Example::power_pose: {
            const WlsFit fit = wls_fit(datasets::power_pose());
            const PriorSpec p = datasets::power_pose_prior();
            const auto a = coefficient(fit, Coefficient::alpha);
            const auto b = coefficient(fit, Coefficient::beta);
            rows.push_back({"alpha estimate", a.estimate, std::nullopt});
            rows.push_back({"alpha se", a.se, std::nullopt});
            rows.push_back({"beta estimate", b.estimate, std::nullopt});
            rows.push_back({"beta se", b.se, std::nullopt});
            rows.push_back({"BF10 alpha", sd_bf(a.likelihood(), HypothesisTest(0.0, p)).bf10, ref("BF10 alpha")});
            rows.push_back({"BF10 beta", sd_bf(b.likelihood(), HypothesisTest(0.0, p)).bf10, ref("BF10 beta")});
            rows.push_back({"Laplace BF10 alpha", meta_regression_laplace_bf(fit, Coefficient::alpha, p, p).bf10,
                            ref("Laplace BF10 alpha")});
            rows.push_back({"Laplace BF10 beta", meta_regression_laplace_bf(fit, Coefficient::beta, p, p).bf10,
                            ref("Laplace BF10 beta")});
            rows.push_back({"one-parameter Laplace BF10 alpha",
                            laplace_bf(a.likelihood(), HypothesisTest(0.0, p)).bf10, std::nullopt});
            rows.push_back({"one-parameter Laplace BF10 beta",
                            laplace_bf(b.likelihood(), HypothesisTest(0.0, p)).bf10, std::nullopt});
            break;
        }
    }
    return rows;
}

struct ReproduceCommand {
    CommonArgs common;
    std::string example = "all";

    void attach(CLI::App* app) {
        common.attach(app, "text or json");
        app->add_option("example", example, "t_test, survival_weak, survival_informed, power_pose or all");
    }

    int run(std::ostream& out) const {
        const Format format = parse_format(common.format);
        if (format == Format::csv) throw DomainError("reproduce supports text and json output");
        std::vector<datasets::Example> examples;
        if (example == "all") {
            examples = {datasets::Example::t_test, datasets::Example::survival_weak,
                        datasets::Example::survival_informed, datasets::Example::power_pose};
        } else {
            examples.push_back(datasets::parse_example(example));
        }
        std::ostringstream s;
        json doc = json::array();
        for (auto e : examples) {
            const auto rows = reproduce_example(e);
            json jrows = json::array();
            if (format == Format::text) s << to_string(e) << '\n';
            for (const auto& r : rows) {
                const double dev = r.reference ? (r.computed - r.reference->value) / r.reference->value : NAN;
                if (format == Format::json) {
                    json jr{{"label", r.label}, {"computed", jnum(r.computed)}};
                    jr["reference"] = r.reference ? json(r.reference->value) : json(nullptr);
                    jr["relative_deviation"] = r.reference ? json(dev) : json(nullptr);
                    if (r.reference && !r.reference->note.empty()) jr["note"] = r.reference->note;
                    jrows.push_back(jr);
                    continue;
                }
                char line[256];
                std::snprintf(line, sizeof line, "  %-36s %14s", r.label.c_str(), fmt(r.computed).c_str());
                s << line;
                if (r.reference) {
                    std::snprintf(line, sizeof line, "   reference %-10s deviation %+.2f%%",
                                  fmt(r.reference->value).c_str(), 100.0 * dev);
                    s << line;
                    if (!r.reference->note.empty()) s << "   (" << r.reference->note << ')';
                }
                s << '\n';
            }
            if (format == Format::json) doc.push_back(json{{"example", to_string(e)}, {"rows", jrows}});
        }
        if (format == Format::json) s << (examples.size() == 1 ? doc[0] : doc).dump(2) << '\n';
        emit(s.str(), common, out);
        return kSuccess;
    }
};

}  // namespace

std::vector<std::string> merge_config(const std::vector<std::string>& args) {
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
    }
    if (path.empty()) return args;
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open config file '" + path + "'");
    json cfg;
    try {
        cfg = json::parse(in);
    } catch (const json::parse_error& e) {
        throw DomainError("config file '" + path + "' is not valid JSON: " + e.what());
    }
    if (!cfg.is_object()) throw DomainError("config file must hold a JSON object");

    auto given = [&](const std::string& flag) {
        return std::any_of(args.begin(), args.end(),
                           [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
    };
    auto scalar_text = [](const json& v) -> std::string {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_number_integer()) return std::to_string(v.get<long long>());
        if (v.is_number_unsigned()) return std::to_string(v.get<unsigned long long>());
        if (v.is_number_float()) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
            return buf;
        }
        throw DomainError("unsupported config value " + v.dump());
    };

    std::vector<std::string> merged = args;
    for (const auto& [key, value] : cfg.items()) {
        const std::string flag = "--" + key;
        if (key == "config" || given(flag)) continue;
        if (value.is_boolean()) {
            if (value.get<bool>()) merged.push_back(flag);
            continue;
        }
        std::string text;
        if (value.is_array()) {
            for (std::size_t i = 0; i < value.size(); ++i) text += (i ? "," : "") + scalar_text(value[i]);
        } else {
            text = scalar_text(value);
        }
        merged.push_back(flag);
        merged.push_back(text);
    }
    return merged;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Approximate Bayes factors for one parameter from an estimate and its standard error"};
    app.name("sdbf");
    app.option_defaults()->always_capture_default();
    app.require_subcommand(1);

    BfCommand bf;
    PosteriorCommand posterior;
    SensitivityCommand sensitivity;
    DesignCommand design;
    SequentialCommand sequential;
    ReproduceCommand reproduce;
    auto* bf_app = app.add_subcommand("bf", "Bayes factor for H0: theta = theta0");
    auto* post_app = app.add_subcommand("posterior", "Approximate posterior under H1: grid and quantiles");
    auto* sens_app = app.add_subcommand("sensitivity", "Bayes factors over a grid of prior hyperparameters");
    auto* design_app = app.add_subcommand("design", "Sequential design analysis by simulation");
    auto* seq_app = app.add_subcommand("sequential", "Bayes factors for an observed sequence of estimates");
    auto* repro_app = app.add_subcommand("reproduce", "Recompute the builtin examples against reference values");
    bf.attach(bf_app);
    posterior.attach(post_app);
    sensitivity.attach(sens_app);
    design.attach(design_app);
    sequential.attach(seq_app);
    reproduce.attach(repro_app);

    try {
        std::vector<std::string> argv = merge_config(args);
        std::reverse(argv.begin(), argv.end());
        try {
            app.parse(argv);
        } catch (const CLI::ParseError& e) {
            const int code = app.exit(e, out, err);
            return code == 0 ? kSuccess : kUsageError;
        }
        if (bf_app->parsed()) return bf.run(out);
        if (post_app->parsed()) return posterior.run(out);
        if (sens_app->parsed()) return sensitivity.run(out);
        if (design_app->parsed()) return design.run(out);
        if (seq_app->parsed()) return sequential.run(out);
        if (repro_app->parsed()) return reproduce.run(out);
        return kUsageError;
    } catch (const IllPosedTestError& e) {
        err << "error: " << e.what() << '\n';
        return kIllPosed;
    } catch (const ConvergenceError& e) {
        err << "error: " << e.what() << '\n';
        return kNumericalFailure;
    } catch (const SingularDesignError& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    }
}

}  // namespace sdbf::cli
