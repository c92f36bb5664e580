#include "sdbf/marginal.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "sdbf/errors.hpp"

namespace sdbf {

ApproxLikelihood::ApproxLikelihood(double theta_hat, double se) : theta_hat_(theta_hat), se_(se) {
    if (!std::isfinite(theta_hat_)) throw DomainError("theta_hat must be finite");
    if (!(se_ > 0.0) || !std::isfinite(se_)) throw DomainError("standard error must be positive and finite");
}

double approx_likelihood_at(const ApproxLikelihood& likelihood, double theta) {
    return std::exp(likelihood.log_at(theta));
}

namespace {

constexpr std::array<double, 5> kSplitWidths = {-10.0, -3.0, 0.0, 3.0, 10.0};

}  // namespace

LikelihoodPriorProduct::LikelihoodPriorProduct(const ApproxLikelihood& likelihood, const PriorSpec& prior)
    : likelihood_(likelihood), prior_(prior) {
    init();
}

LikelihoodPriorProduct::LikelihoodPriorProduct(const PriorSpec& prior) : prior_(prior) { init(); }

void LikelihoodPriorProduct::init() {
    const double mu = prior_.location();
    const double sigma = prior_.scale();
    std::vector<double> candidates{mu};
    if (likelihood_) {
        const double est = likelihood_->theta_hat();
        const double se2 = likelihood_->se() * likelihood_->se();
        const double s2 = sigma * sigma;
        candidates.push_back(est);
        candidates.push_back((s2 * est + se2 * mu) / (s2 + se2));
    }
    log_offset_ = -kInf;
    for (double c : candidates) {
        const double inside = std::clamp(c, prior_.lower(), prior_.upper());
        log_offset_ = std::max(log_offset_, log_value_at(inside));
    }

    params_.center = likelihood_ ? likelihood_->theta_hat() : 0.0;
    params_.inv_se = likelihood_ ? 1.0 / likelihood_->se() : 0.0;
    params_.student = prior_.family() != Family::normal;
    params_.location = mu;
    params_.inv_scale = 1.0 / sigma;
    params_.df = params_.student ? prior_.df() : 1.0;
    params_.log_const = prior_.log_density_const() - log_offset_;
    params_.lower = prior_.lower();
    params_.upper = prior_.upper();
}

double LikelihoodPriorProduct::log_value_at(double theta) const {
    const double lp = log_pdf(prior_, theta);
    return likelihood_ ? lp + likelihood_->log_at(theta) : lp;
}

void LikelihoodPriorProduct::evaluate_scaled(std::span<const double> theta, std::span<double> out) const {
    kernels::evaluate(params_, theta, out);
}

QuadratureOptions LikelihoodPriorProduct::options(double rel_tol) const {
    QuadratureOptions opts;
    opts.rel_tol = rel_tol;
    opts.abs_tol = 1e-300;
    double width = prior_.scale();
    for (double k : kSplitWidths) opts.split_points.push_back(prior_.location() + k * prior_.scale());
    if (likelihood_) {
        width = std::min(width, likelihood_->se());
        for (double k : kSplitWidths)
            opts.split_points.push_back(likelihood_->theta_hat() + k * likelihood_->se());
    }
    opts.tail_scale = width;
    if (likelihood_) {
        const double est = likelihood_->theta_hat();
        const double se2 = likelihood_->se() * likelihood_->se();
        const double s2 = prior_.scale() * prior_.scale();
        opts.split_points.push_back((s2 * est + se2 * prior_.location()) / (s2 + se2));
    }
    // A peak pressed against a truncation bound can be far narrower than any
    // width above; resolve it from its own decay length outward.
    for (double bound : {prior_.lower(), prior_.upper()}) {
        if (!std::isfinite(bound)) continue;
        const double decay = 1.0 / std::fabs(log_slope_at(bound));
        if (!(decay < width)) continue;
        const double inward = bound == prior_.lower() ? 1.0 : -1.0;
        for (double h = decay; h < 10.0 * width; h *= 4.0) opts.split_points.push_back(bound + inward * h);
    }
    return opts;
}

double LikelihoodPriorProduct::log_slope_at(double theta) const {
    const double d = theta - prior_.location();
    const double s2 = prior_.scale() * prior_.scale();
    double slope = prior_.family() == Family::normal ? -d / s2 : -(prior_.df() + 1.0) * d / (prior_.df() * s2 + d * d);
    if (likelihood_) slope -= (theta - likelihood_->theta_hat()) / (likelihood_->se() * likelihood_->se());
    return slope;
}

IntegrationResult LikelihoodPriorProduct::integrate_scaled(double a, double b,
                                                           const QuadratureOptions& options) const {
    const double lo = std::max(a, prior_.lower());
    const double hi = std::min(b, prior_.upper());
    if (!(lo < hi)) return {};
    const BatchIntegrand f = [this](std::span<const double> x, std::span<double> out) {
        evaluate_scaled(x, out);
    };
    return integrate_batch(f, lo, hi, options);
}

LogIntegral LikelihoodPriorProduct::log_integral(double rel_tol) const {
    const IntegrationResult r = integrate_scaled(prior_.lower(), prior_.upper(), options(rel_tol));
    if (!(r.value > 0.0)) throw DomainError("likelihood-prior product integrates to zero");
    return {std::log(r.value) + log_offset_, r.error_estimate / r.value, r.evaluations};
}

LogIntegral log_marginal_likelihood(const ApproxLikelihood& likelihood, const PriorSpec& prior) {
    return LikelihoodPriorProduct(likelihood, prior).log_integral();
}

namespace {

IntegrationResult rescale(const LikelihoodPriorProduct& product) {
    const IntegrationResult r =
        product.integrate_scaled(product.prior().lower(), product.prior().upper(), product.options());
    const double factor = std::exp(product.log_offset());
    return {r.value * factor, r.error_estimate * factor, r.evaluations};
}

}  // namespace

IntegrationResult marginal_likelihood(const ApproxLikelihood& likelihood, const PriorSpec& prior) {
    return rescale(LikelihoodPriorProduct(likelihood, prior));
}

IntegrationResult prior_normalization(const PriorSpec& prior) {
    return rescale(LikelihoodPriorProduct(prior));
}

}  // namespace sdbf
