#pragma once

// Conversions from commonly reported summary statistics to an estimate and
// standard error for the focal parameter.

#include <span>

#include "sdbf/bayes.hpp"
#include "sdbf/distributions.hpp"
#include "sdbf/likelihood.hpp"

namespace sdbf {

struct TwoSampleSummary {
    double mean1;
    double sd1;
    double n1;
    double mean2;
    double sd2;
    double n2;
};

struct EffectEstimate {
    double estimate;
    double se;

    ApproxLikelihood likelihood() const { return ApproxLikelihood(estimate, se); }
};

/// Standardized mean difference (mean1 - mean2) / pooled sd, with the
/// large-sample standard error sqrt((n1 + n2) / (n1 n2) + d^2 / (2 (n1 + n2))).
/// Throws DomainError for non-positive sds or group sizes below 2.
EffectEstimate cohen_d_mle(const TwoSampleSummary& s);

/// One study in a fixed-effect meta-regression y ~ Normal(alpha + beta x, se_y^2).
struct MetaDatum {
    double y;
    double se_y;
    double x;
};

struct WlsFit {
    double alpha_hat;
    double se_alpha;
    double beta_hat;
    double se_beta;
    /// Covariance of (alpha_hat, beta_hat).
    double cov_alpha_beta;
};

/// Weighted least squares with weights 1 / se_y^2.
/// Throws DomainError for fewer than two points or se_y <= 0, and
/// SingularDesignError when the normal equations have condition number above 1e12.
WlsFit wls_fit(std::span<const MetaDatum> data);

enum class Coefficient { alpha, beta };

EffectEstimate coefficient(const WlsFit& fit, Coefficient which);

/// Laplace approximation for the two-coefficient meta-regression, testing the
/// chosen coefficient against 0 with independent priors on both coefficients.
/// Equals the one-parameter laplace_bf times g_other(other_hat) / g_other(other_hat_0),
/// where other_hat_0 is the other coefficient's estimate with the tested one fixed at 0.
/// Throws UndefinedLaplaceError if either estimate falls outside its prior's support.
BayesFactorResult meta_regression_laplace_bf(const WlsFit& fit, Coefficient which,
                                             const PriorSpec& prior_alpha, const PriorSpec& prior_beta);

enum class Direction { two_sided, greater, less };

/// z statistic with the given p value. Two-sided: |z| = Phi^-1(1 - p/2) with the
/// sign of sign_hint (positive when sign_hint is 0). Greater: Phi^-1(1 - p).
/// Less: Phi^-1(p). Throws DomainError unless 0 < p < 1.
double p_value_to_z(double p, Direction direction, double sign_hint = 1.0);

/// Inverse of p_value_to_z for a given direction.
double z_to_p_value(double z, Direction direction);

}  // namespace sdbf
