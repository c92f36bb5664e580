#pragma once

// Bayes factors for a point null H0: theta = theta0 against H1: theta ~ g(theta),
// given only an estimate of theta and its standard error.
//
// The main route is the Savage-Dickey density ratio with the normal approximate
// likelihood: BF10 = integral of L(theta) g(theta) dtheta / L(theta0), evaluated by
// quadrature. For untruncated normal priors the integral is closed form.
// Jeffreys's approximation and a one-parameter Laplace approximation are
// provided as baselines. The BIC for a single nested parameter coincides with
// Jeffreys's approximation with A = 1, so it has no separate entry point.
//
// Everything is computed on the log scale. When |log BF10| > 700 the natural
// scale values are reported as +inf / 0 and `saturated` is set.

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sdbf/distributions.hpp"
#include "sdbf/likelihood.hpp"

namespace sdbf {

enum class Method {
    savage_dickey_quadrature,
    savage_dickey_ratio,
    closed_form_normal,
    jeffreys_unit_info,
    jeffreys_general,
    laplace,
};

std::string_view to_string(Method method) noexcept;
/// Also accepts "savage_dickey" for the quadrature route.
std::optional<Method> parse_method(std::string_view name) noexcept;

struct HypothesisTest {
    /// Throws DomainError if theta0 is not finite.
    HypothesisTest(double theta0, PriorSpec prior);

    double theta0;
    PriorSpec prior;
};

struct BayesFactorResult {
    double log_bf10 = 0.0;
    double bf10 = 1.0;
    double bf01 = 1.0;
    Method method = Method::savage_dickey_quadrature;
    /// Estimated relative error of bf10 (absolute error of log_bf10); 0 for closed forms.
    double numerical_error = 0.0;
    /// bf10 or bf01 clamped to +inf / 0 because |log_bf10| > 700.
    bool saturated = false;

    static BayesFactorResult from_log(double log_bf10, Method method, double numerical_error = 0.0);
};

/// Savage-Dickey normal approximation by quadrature.
/// Throws IllPosedTestError if theta0 lies outside the closed prior support.
BayesFactorResult sd_bf(const ApproxLikelihood& likelihood, const HypothesisTest& test);

/// Same quantity as prior ordinate over posterior ordinate at theta0.
BayesFactorResult sd_bf_ratio_form(const ApproxLikelihood& likelihood, const HypothesisTest& test);

/// Closed form for an untruncated Normal(mu0, sigma0^2) prior.
BayesFactorResult closed_form_normal_bf(const ApproxLikelihood& likelihood, double mu0, double sigma0,
                                        double theta0);

/// Unit-information prior Normal(theta_hat, n se^2), testing theta0 = 0:
/// BF01 = sqrt(n + 1) exp(-theta_hat^2 / (2 se^2)).
BayesFactorResult jeffreys_unit_info_bf(const ApproxLikelihood& likelihood, double n);

/// BF01 = A sqrt(n) exp(-chi2 / 2), chi2 a Wald statistic.
BayesFactorResult jeffreys_general_bf(double chi2, double n, double a = 1.0);

/// One-parameter Laplace approximation: BF10 = sqrt(2 pi) se g(theta_hat) / L(theta0).
/// With ignore_truncation, g is the untruncated family density (no truncation
/// normalizer). Otherwise throws UndefinedLaplaceError when theta_hat is outside
/// the prior support.
BayesFactorResult laplace_bf(const ApproxLikelihood& likelihood, const HypothesisTest& test,
                             bool ignore_truncation = false);

// Method dispatch with per-call failure capture, used by sweeps and sequences.

struct EvaluationOptions {
    bool laplace_ignore_truncation = false;
    /// Sample size for the Jeffreys methods.
    std::optional<double> sample_size;
    double jeffreys_a = 1.0;
};

enum class OutcomeStatus { ok, ill_posed, undefined_laplace, not_applicable, numerical_failure, domain_error };

std::string_view to_string(OutcomeStatus status) noexcept;

struct MethodOutcome {
    Method method;
    OutcomeStatus status = OutcomeStatus::ok;
    std::optional<BayesFactorResult> result;
    std::string message;

    bool ok() const noexcept { return status == OutcomeStatus::ok; }
};

/// Evaluates one method and never throws for numerical or applicability
/// problems; those are recorded in the outcome.
MethodOutcome evaluate(Method method, const ApproxLikelihood& likelihood, const HypothesisTest& test,
                       const EvaluationOptions& options = {});

std::vector<MethodOutcome> evaluate_all(std::span<const Method> methods, const ApproxLikelihood& likelihood,
                                        const HypothesisTest& test, const EvaluationOptions& options = {});

}  // namespace sdbf
