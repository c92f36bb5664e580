#pragma once

#include <cstddef>
#include <optional>

#include "sdbf/distributions.hpp"
#include "sdbf/kernels.hpp"
#include "sdbf/likelihood.hpp"
#include "sdbf/quadrature.hpp"

namespace sdbf {

/// Integral reported on the log scale, so it survives extreme z-scores.
struct LogIntegral {
    double log_value = 0.0;
    /// Error estimate relative to the integral (equivalently, absolute error in log_value).
    double relative_error = 0.0;
    std::size_t evaluations = 0;
};

/// The integrand L(theta) * p(theta | H1) with its numerics: a peak offset so the
/// scaled integrand never over- or underflows, and split points at the estimate,
/// the prior location and a few widths either side of each.
class LikelihoodPriorProduct {
public:
    LikelihoodPriorProduct(const ApproxLikelihood& likelihood, const PriorSpec& prior);
    /// Flat likelihood (L = 1): integrates the prior alone.
    explicit LikelihoodPriorProduct(const PriorSpec& prior);

    const PriorSpec& prior() const noexcept { return prior_; }

    /// log L(theta) + log p(theta), unscaled; -inf outside the support.
    double log_value_at(double theta) const;
    /// Constant subtracted before exponentiation.
    double log_offset() const noexcept { return log_offset_; }
    /// d/dtheta of log_value_at.
    double log_slope_at(double theta) const;

    /// exp(log_value_at(theta) - log_offset()) for each theta.
    void evaluate_scaled(std::span<const double> theta, std::span<double> out) const;

    QuadratureOptions options(double rel_tol = 1e-10) const;

    /// Integral of the scaled integrand over [a, b] intersected with the support.
    IntegrationResult integrate_scaled(double a, double b, const QuadratureOptions& options) const;

    /// log of the integral over the whole support.
    LogIntegral log_integral(double rel_tol = 1e-10) const;

private:
    void init();

    std::optional<ApproxLikelihood> likelihood_;
    PriorSpec prior_;
    kernels::ProductIntegrand params_;
    double log_offset_ = 0.0;
};

/// Marginal likelihood of H1 under the approximate likelihood:
/// integral of L(theta) p(theta | H1) over theta.
LogIntegral log_marginal_likelihood(const ApproxLikelihood& likelihood, const PriorSpec& prior);

/// Same on the natural scale; the value may underflow for extreme inputs,
/// in which case prefer log_marginal_likelihood.
IntegrationResult marginal_likelihood(const ApproxLikelihood& likelihood, const PriorSpec& prior);

/// Integral of the prior density over its support (should be 1).
IntegrationResult prior_normalization(const PriorSpec& prior);

}  // namespace sdbf
