#pragma once

// Sequential Bayes factor design analysis. Observations are i.i.d.
// Normal(true_effect, unit_sd^2); at a look with n observations the estimate is
// their running mean and its standard error unit_sd / sqrt(n).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sdbf/bayes.hpp"
#include "sdbf/rng.hpp"
#include "sdbf/summaries.hpp"

namespace sdbf {

struct DesignSpec {
    double true_effect = 0.0;
    double unit_sd = 1.0;
    /// Cumulative sample sizes, strictly increasing, first >= 2.
    std::vector<std::size_t> looks;
    HypothesisTest test;
    /// Stop for H1 once BF10 >= upper_threshold (> 1).
    double upper_threshold = 10.0;
    /// Stop for H0 once BF10 <= lower_threshold (in (0, 1)).
    double lower_threshold = 0.1;
    std::size_t replications = 1000;
    std::uint64_t seed = 0;
    Method method = Method::savage_dickey_quadrature;
    /// When set, each replicate draws its true effect from this distribution
    /// instead of using true_effect.
    std::optional<PriorSpec> effect_prior;
    /// Worker threads; 0 picks the hardware concurrency. Results do not depend on it.
    std::size_t threads = 1;
};

/// Throws DomainError or IllPosedTestError describing the first invalid field.
void validate(const DesignSpec& spec);

struct LookResult {
    std::size_t n;
    double theta_hat;
    double se;
    BayesFactorResult bf;
};

/// Every look of one replicate, without stopping. Data are drawn one
/// observation at a time, so later looks extend earlier ones.
std::vector<LookResult> simulate_trajectory(const DesignSpec& spec, RandomStream& rng);

enum class Boundary { h1, h0, max_n };

std::string_view to_string(Boundary boundary) noexcept;

struct ReplicateOutcome {
    std::size_t stop_look;
    std::size_t stop_n;
    double terminal_log_bf10;
    Boundary boundary;
    double true_effect;
};

struct DesignResult {
    std::vector<ReplicateOutcome> replicates;
    double p_h1 = 0.0;
    double p_h0 = 0.0;
    double p_max_n = 0.0;
    /// Probability levels of stopping_n_quantiles.
    std::vector<double> quantile_levels;
    /// Inverse empirical CDF of the stopping sample size, so every value is a look.
    std::vector<std::size_t> stopping_n_quantiles;
    double mean_stopping_n = 0.0;
    double mean_terminal_log_bf10 = 0.0;
};

/// Replicate r uses RandomStream(seed, r) and stops at the first look whose BF
/// crosses a threshold.
ReplicateOutcome run_replicate(const DesignSpec& spec, std::size_t replicate);

DesignResult run_design(const DesignSpec& spec);

/// Aggregates for a set of replicate outcomes.
DesignResult summarize(std::vector<ReplicateOutcome> replicates);

/// Per-look outcomes (outer index: look, inner: method) for an observed
/// sequence of estimates. Throws DomainError if any se is not positive.
std::vector<std::vector<MethodOutcome>> sequential_bf_from_observed(std::span<const EffectEstimate> observed,
                                                                    const HypothesisTest& test,
                                                                    std::span<const Method> methods,
                                                                    const EvaluationOptions& options = {});

}  // namespace sdbf
