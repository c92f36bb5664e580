#pragma once

#include <cstddef>
#include <vector>

#include "sdbf/distributions.hpp"
#include "sdbf/likelihood.hpp"
#include "sdbf/marginal.hpp"

namespace sdbf {

/// Approximate marginal posterior of theta under H1: L(theta) p(theta) / Z.
/// Z is integrated once at construction.
class ApproxPosterior {
public:
    ApproxPosterior(const ApproxLikelihood& likelihood, const PriorSpec& prior);

    const ApproxLikelihood& likelihood() const noexcept { return likelihood_; }
    const PriorSpec& prior() const noexcept { return product_.prior(); }

    /// log Z and its relative error.
    const LogIntegral& log_normalizer() const noexcept { return normalizer_; }

    double log_pdf(double theta) const;
    /// Zero outside the prior support; bounds use the interior limit.
    double pdf(double theta) const;
    double cdf(double theta) const;
    /// Throws DomainError unless 0 < p < 1. Tolerance 1e-10 in probability.
    double quantile(double p) const;

private:
    double scaled_mass(double a, double b) const;

    ApproxLikelihood likelihood_;
    LikelihoodPriorProduct product_;
    LogIntegral normalizer_;
    double scaled_total_;
};

struct PosteriorGrid {
    std::vector<double> theta;
    std::vector<double> density;
    /// Marginal likelihood Z (may underflow to 0; log_normalizer does not).
    double normalizer = 0.0;
    double log_normalizer = 0.0;
};

double posterior_pdf_at(const ApproxLikelihood& likelihood, const PriorSpec& prior, double theta);

/// Density on a grid over the prior support intersected with the hull of
/// theta_hat +/- 8 se and location +/- 8 scale. Starts from n_points equally
/// spaced points and bisects the intervals with the largest trapezoid error
/// until the trapezoid total is within 1e-6 of the quadrature mass of the span.
/// Throws DomainError if n_points < 16.
PosteriorGrid posterior_grid(const ApproxLikelihood& likelihood, const PriorSpec& prior,
                             std::size_t n_points);

double posterior_quantile(const ApproxLikelihood& likelihood, const PriorSpec& prior, double p);

/// Trapezoid integral of a grid.
double trapezoid_mass(const PosteriorGrid& grid);

}  // namespace sdbf
