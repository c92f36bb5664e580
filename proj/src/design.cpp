#include "sdbf/design.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>
#include <thread>

#include "sdbf/errors.hpp"
#include "sdbf/quadrature.hpp"

namespace sdbf {

namespace {

BayesFactorResult bf_at_look(const DesignSpec& spec, double theta_hat, double se, std::size_t n) {
    EvaluationOptions opts;
    opts.sample_size = static_cast<double>(n);
    MethodOutcome out = evaluate(spec.method, ApproxLikelihood(theta_hat, se), spec.test, opts);
    if (!out.ok()) {
        const std::string msg = "look at n = " + std::to_string(n) + ": " + out.message;
        if (out.status == OutcomeStatus::ill_posed || out.status == OutcomeStatus::undefined_laplace)
            throw IllPosedTestError(msg);
        if (out.status == OutcomeStatus::numerical_failure) throw ConvergenceError(msg, {});
        throw DomainError(msg);
    }
    return *out.result;
}

double draw_effect(const DesignSpec& spec, RandomStream& rng) {
    if (!spec.effect_prior) return spec.true_effect;
    return quantile(*spec.effect_prior, rng.uniform());
}

// Walks the look schedule, drawing one observation at a time. The callback
// returns false to stop.
template <typename OnLook>
void walk_looks(const DesignSpec& spec, RandomStream& rng, double effect, OnLook&& on_look) {
    double mean = 0.0;
    std::size_t n = 0;
    for (std::size_t k = 0; k < spec.looks.size(); ++k) {
        for (; n < spec.looks[k]; ++n) {
            const double x = effect + spec.unit_sd * rng.normal();
            mean += (x - mean) / static_cast<double>(n + 1);
        }
        const double se = spec.unit_sd / std::sqrt(static_cast<double>(n));
        if (!on_look(k, n, mean, se)) return;
    }
}

}  // namespace

std::string_view to_string(Boundary boundary) noexcept {
    switch (boundary) {
        case Boundary::h1: return "H1";
        case Boundary::h0: return "H0";
        case Boundary::max_n: return "max_n";
    }
    return "unknown";
}

void validate(const DesignSpec& spec) {
    if (!std::isfinite(spec.true_effect)) throw DomainError("true effect must be finite");
    if (!(spec.unit_sd > 0.0) || !std::isfinite(spec.unit_sd)) throw DomainError("unit sd must be positive and finite");
    if (spec.looks.empty()) throw DomainError("look schedule is empty");
    if (spec.looks.front() < 2) throw DomainError("first look needs at least two observations");
    for (std::size_t i = 1; i < spec.looks.size(); ++i)
        if (spec.looks[i] <= spec.looks[i - 1]) throw DomainError("looks must be strictly increasing");
    if (!(spec.upper_threshold > 1.0) || !std::isfinite(spec.upper_threshold))
        throw DomainError("upper threshold must exceed 1");
    if (!(spec.lower_threshold > 0.0 && spec.lower_threshold < 1.0))
        throw DomainError("lower threshold must lie in (0, 1)");
    if (spec.replications < 1) throw DomainError("at least one replication is needed");
    if (!spec.test.prior.in_support(spec.test.theta0))
        throw IllPosedTestError("test value lies outside the support of the H1 prior");
    if (spec.method == Method::closed_form_normal &&
        (spec.test.prior.family() != Family::normal || spec.test.prior.is_truncated()))
        throw DomainError("closed form needs an untruncated normal prior");
}

std::vector<LookResult> simulate_trajectory(const DesignSpec& spec, RandomStream& rng) {
    std::vector<LookResult> out;
    out.reserve(spec.looks.size());
    const double effect = draw_effect(spec, rng);
    walk_looks(spec, rng, effect, [&](std::size_t, std::size_t n, double mean, double se) {
        out.push_back({n, mean, se, bf_at_look(spec, mean, se, n)});
        return true;
    });
    return out;
}

ReplicateOutcome run_replicate(const DesignSpec& spec, std::size_t replicate) {
    RandomStream rng(spec.seed, replicate);
    const double effect = draw_effect(spec, rng);
    const double log_upper = std::log(spec.upper_threshold);
    const double log_lower = std::log(spec.lower_threshold);
    ReplicateOutcome r{0, 0, 0.0, Boundary::max_n, effect};
    walk_looks(spec, rng, effect, [&](std::size_t k, std::size_t n, double mean, double se) {
        const double log_bf = bf_at_look(spec, mean, se, n).log_bf10;
        r.stop_look = k;
        r.stop_n = n;
        r.terminal_log_bf10 = log_bf;
        if (log_bf >= log_upper) {
            r.boundary = Boundary::h1;
            return false;
        }
        if (log_bf <= log_lower) {
            r.boundary = Boundary::h0;
            return false;
        }
        return true;
    });
    return r;
}

DesignResult summarize(std::vector<ReplicateOutcome> replicates) {
    DesignResult res;
    const double count = static_cast<double>(replicates.size());
    if (replicates.empty()) return res;
    std::size_t h1 = 0, h0 = 0;
    double sum_n = 0.0, sum_log = 0.0;
    std::vector<std::size_t> ns;
    ns.reserve(replicates.size());
    for (const ReplicateOutcome& r : replicates) {
        h1 += r.boundary == Boundary::h1;
        h0 += r.boundary == Boundary::h0;
        sum_n += static_cast<double>(r.stop_n);
        sum_log += r.terminal_log_bf10;
        ns.push_back(r.stop_n);
    }
    res.p_h1 = static_cast<double>(h1) / count;
    res.p_h0 = static_cast<double>(h0) / count;
    res.p_max_n = static_cast<double>(replicates.size() - h1 - h0) / count;
    res.mean_stopping_n = sum_n / count;
    res.mean_terminal_log_bf10 = sum_log / count;
    std::sort(ns.begin(), ns.end());
    res.quantile_levels = {0.1, 0.25, 0.5, 0.75, 0.9};
    for (double q : res.quantile_levels) {
        const auto idx = static_cast<std::size_t>(std::ceil(q * count - 1e-9));
        res.stopping_n_quantiles.push_back(ns[std::clamp<std::size_t>(idx, 1, ns.size()) - 1]);
    }
    res.replicates = std::move(replicates);
    return res;
}

DesignResult run_design(const DesignSpec& spec) {
    validate(spec);
    const std::size_t reps = spec.replications;
    std::vector<ReplicateOutcome> outcomes(reps);
    std::size_t workers = spec.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : spec.threads;
    workers = std::min(workers, reps);
    if (workers <= 1) {
        for (std::size_t r = 0; r < reps; ++r) outcomes[r] = run_replicate(spec, r);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::exception_ptr> errors(workers);
        {
            std::vector<std::jthread> pool;
            for (std::size_t w = 0; w < workers; ++w) {
                pool.emplace_back([&, w] {
                    try {
                        for (std::size_t r = next++; r < reps; r = next++) outcomes[r] = run_replicate(spec, r);
                    } catch (...) {
                        errors[w] = std::current_exception();
                        next = reps;
                    }
                });
            }
        }
        for (const auto& e : errors)
            if (e) std::rethrow_exception(e);
    }
    return summarize(std::move(outcomes));
}

std::vector<std::vector<MethodOutcome>> sequential_bf_from_observed(std::span<const EffectEstimate> observed,
                                                                    const HypothesisTest& test,
                                                                    std::span<const Method> methods,
                                                                    const EvaluationOptions& options) {
    for (const EffectEstimate& e : observed) {
        if (!(e.se > 0.0) || !std::isfinite(e.se)) throw DomainError("standard errors must be positive and finite");
        if (!std::isfinite(e.estimate)) throw DomainError("estimates must be finite");
    }
    std::vector<std::vector<MethodOutcome>> out;
    out.reserve(observed.size());
    for (const EffectEstimate& e : observed) out.push_back(evaluate_all(methods, e.likelihood(), test, options));
    return out;
}

}  // namespace sdbf
