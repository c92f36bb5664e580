#include "sdbf/bayes.hpp"

#include <cmath>

#include "sdbf/errors.hpp"
#include "sdbf/marginal.hpp"
#include "sdbf/posterior.hpp"
#include "sdbf/special.hpp"

namespace sdbf {

namespace {

constexpr double kSaturationLog = 700.0;

void require_in_support(const HypothesisTest& test) {
    if (!test.prior.in_support(test.theta0)) {
        throw IllPosedTestError("test value lies outside the support of the H1 prior; "
                                "the density ratio at theta0 is undefined");
    }
}

}  // namespace

std::string_view to_string(Method method) noexcept {
    switch (method) {
        case Method::savage_dickey_quadrature: return "savage_dickey_quadrature";
        case Method::savage_dickey_ratio: return "savage_dickey_ratio";
        case Method::closed_form_normal: return "closed_form_normal";
        case Method::jeffreys_unit_info: return "jeffreys_unit_info";
        case Method::jeffreys_general: return "jeffreys_general";
        case Method::laplace: return "laplace";
    }
    return "unknown";
}

std::optional<Method> parse_method(std::string_view name) noexcept {
    if (name == "savage_dickey" || name == "savage_dickey_quadrature") return Method::savage_dickey_quadrature;
    if (name == "savage_dickey_ratio") return Method::savage_dickey_ratio;
    if (name == "closed_form_normal" || name == "closed_form") return Method::closed_form_normal;
    if (name == "jeffreys_unit_info") return Method::jeffreys_unit_info;
    if (name == "jeffreys_general" || name == "jeffreys") return Method::jeffreys_general;
    if (name == "laplace") return Method::laplace;
    return std::nullopt;
}

std::string_view to_string(OutcomeStatus status) noexcept {
    switch (status) {
        case OutcomeStatus::ok: return "ok";
        case OutcomeStatus::ill_posed: return "ill_posed";
        case OutcomeStatus::undefined_laplace: return "undefined_laplace";
        case OutcomeStatus::not_applicable: return "not_applicable";
        case OutcomeStatus::numerical_failure: return "numerical_failure";
        case OutcomeStatus::domain_error: return "domain_error";
    }
    return "unknown";
}

HypothesisTest::HypothesisTest(double theta0_, PriorSpec prior_) : theta0(theta0_), prior(std::move(prior_)) {
    if (!std::isfinite(theta0)) throw DomainError("test value theta0 must be finite");
}

BayesFactorResult BayesFactorResult::from_log(double log_bf10, Method method, double numerical_error) {
    BayesFactorResult r;
    r.log_bf10 = log_bf10;
    r.method = method;
    r.numerical_error = numerical_error;
    if (std::fabs(log_bf10) > kSaturationLog) {
        r.saturated = true;
        r.bf10 = log_bf10 > 0.0 ? kInf : 0.0;
        r.bf01 = log_bf10 > 0.0 ? 0.0 : kInf;
    } else {
        r.bf10 = std::exp(log_bf10);
        r.bf01 = std::exp(-log_bf10);
    }
    return r;
}

BayesFactorResult sd_bf(const ApproxLikelihood& likelihood, const HypothesisTest& test) {
    require_in_support(test);
    const LogIntegral marginal = log_marginal_likelihood(likelihood, test.prior);
    return BayesFactorResult::from_log(marginal.log_value - likelihood.log_at(test.theta0),
                                       Method::savage_dickey_quadrature, marginal.relative_error);
}

BayesFactorResult sd_bf_ratio_form(const ApproxLikelihood& likelihood, const HypothesisTest& test) {
    require_in_support(test);
    const ApproxPosterior posterior(likelihood, test.prior);
    const double log_prior_ordinate = log_pdf(test.prior, test.theta0);
    const double log_posterior_ordinate = posterior.log_pdf(test.theta0);
    return BayesFactorResult::from_log(log_prior_ordinate - log_posterior_ordinate,
                                       Method::savage_dickey_ratio,
                                       posterior.log_normalizer().relative_error);
}

BayesFactorResult closed_form_normal_bf(const ApproxLikelihood& likelihood, double mu0, double sigma0,
                                        double theta0) {
    if (!(sigma0 > 0.0) || !std::isfinite(sigma0)) throw DomainError("prior sd must be positive and finite");
    if (!std::isfinite(mu0) || !std::isfinite(theta0)) throw DomainError("mu0 and theta0 must be finite");
    const double se2 = likelihood.se() * likelihood.se();
    const double s2 = sigma0 * sigma0;
    const double d0 = likelihood.theta_hat() - theta0;
    const double dm = likelihood.theta_hat() - mu0;
    const double log_bf01 = 0.5 * std::log1p(s2 / se2) - 0.5 * (d0 * d0 / se2 - dm * dm / (s2 + se2));
    return BayesFactorResult::from_log(-log_bf01, Method::closed_form_normal);
}

BayesFactorResult jeffreys_unit_info_bf(const ApproxLikelihood& likelihood, double n) {
    if (!(n >= 1.0) || !std::isfinite(n)) throw DomainError("sample size must be at least 1");
    const double z = likelihood.theta_hat() / likelihood.se();
    const double log_bf01 = 0.5 * std::log1p(n) - 0.5 * z * z;
    return BayesFactorResult::from_log(-log_bf01, Method::jeffreys_unit_info);
}

BayesFactorResult jeffreys_general_bf(double chi2, double n, double a) {
    if (!(chi2 >= 0.0) || !std::isfinite(chi2)) throw DomainError("chi2 must be finite and non-negative");
    if (!(n >= 1.0) || !std::isfinite(n)) throw DomainError("sample size must be at least 1");
    if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("Jeffreys constant A must be positive");
    const double log_bf01 = std::log(a) + 0.5 * std::log(n) - 0.5 * chi2;
    return BayesFactorResult::from_log(-log_bf01, Method::jeffreys_general);
}

BayesFactorResult laplace_bf(const ApproxLikelihood& likelihood, const HypothesisTest& test,
                             bool ignore_truncation) {
    const double est = likelihood.theta_hat();
    double log_g;
    if (ignore_truncation) {
        log_g = test.prior.family_log_pdf(est);
    } else {
        if (!test.prior.in_support(est)) {
            throw UndefinedLaplaceError("Laplace approximation undefined: the estimate lies outside the "
                                        "prior support (prior density is zero there)");
        }
        log_g = log_pdf(test.prior, est);
    }
    const double log_bf10 =
        special::kLnSqrt2Pi + std::log(likelihood.se()) + log_g - likelihood.log_at(test.theta0);
    return BayesFactorResult::from_log(log_bf10, Method::laplace);
}

MethodOutcome evaluate(Method method, const ApproxLikelihood& likelihood, const HypothesisTest& test,
                       const EvaluationOptions& options) {
    MethodOutcome out{method, OutcomeStatus::ok, std::nullopt, {}};
    auto not_applicable = [&out](std::string why) {
        out.status = OutcomeStatus::not_applicable;
        out.message = std::move(why);
        return out;
    };
    try {
        switch (method) {
            case Method::savage_dickey_quadrature: out.result = sd_bf(likelihood, test); break;
            case Method::savage_dickey_ratio: out.result = sd_bf_ratio_form(likelihood, test); break;
            case Method::closed_form_normal:
                if (test.prior.family() != Family::normal || test.prior.is_truncated())
                    return not_applicable("closed form needs an untruncated normal prior");
                out.result = closed_form_normal_bf(likelihood, test.prior.location(), test.prior.scale(),
                                                   test.theta0);
                break;
            case Method::jeffreys_unit_info: {
                if (!options.sample_size) return not_applicable("Jeffreys approximation needs a sample size");
                const ApproxLikelihood shifted(likelihood.theta_hat() - test.theta0, likelihood.se());
                out.result = jeffreys_unit_info_bf(shifted, *options.sample_size);
                break;
            }
            case Method::jeffreys_general: {
                if (!options.sample_size) return not_applicable("Jeffreys approximation needs a sample size");
                const double z = (likelihood.theta_hat() - test.theta0) / likelihood.se();
                out.result = jeffreys_general_bf(z * z, *options.sample_size, options.jeffreys_a);
                break;
            }
            case Method::laplace:
                out.result = laplace_bf(likelihood, test, options.laplace_ignore_truncation);
                break;
        }
    } catch (const UndefinedLaplaceError& e) {
        out.status = OutcomeStatus::undefined_laplace;
        out.message = e.what();
    } catch (const IllPosedTestError& e) {
        out.status = OutcomeStatus::ill_posed;
        out.message = e.what();
    } catch (const ConvergenceError& e) {
        out.status = OutcomeStatus::numerical_failure;
        out.message = e.what();
    } catch (const DomainError& e) {
        out.status = OutcomeStatus::domain_error;
        out.message = e.what();
    }
    return out;
}

std::vector<MethodOutcome> evaluate_all(std::span<const Method> methods, const ApproxLikelihood& likelihood,
                                        const HypothesisTest& test, const EvaluationOptions& options) {
    std::vector<MethodOutcome> outcomes;
    outcomes.reserve(methods.size());
    for (Method m : methods) outcomes.push_back(evaluate(m, likelihood, test, options));
    return outcomes;
}

}  // namespace sdbf
