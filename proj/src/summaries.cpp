#include "sdbf/summaries.hpp"

#include <cmath>

#include "sdbf/errors.hpp"
#include "sdbf/special.hpp"

namespace sdbf {

EffectEstimate cohen_d_mle(const TwoSampleSummary& s) {
    if (!(s.sd1 > 0.0) || !(s.sd2 > 0.0) || !std::isfinite(s.sd1) || !std::isfinite(s.sd2))
        throw DomainError("group standard deviations must be positive and finite");
    if (!(s.n1 >= 2.0) || !(s.n2 >= 2.0) || !std::isfinite(s.n1) || !std::isfinite(s.n2))
        throw DomainError("each group needs at least two observations");
    if (!std::isfinite(s.mean1) || !std::isfinite(s.mean2)) throw DomainError("group means must be finite");
    const double pooled_var =
        ((s.n1 - 1.0) * s.sd1 * s.sd1 + (s.n2 - 1.0) * s.sd2 * s.sd2) / (s.n1 + s.n2 - 2.0);
    const double d = (s.mean1 - s.mean2) / std::sqrt(pooled_var);
    const double n = s.n1 + s.n2;
    const double se = std::sqrt(n / (s.n1 * s.n2) + d * d / (2.0 * n));
    return {d, se};
}

WlsFit wls_fit(std::span<const MetaDatum> data) {
    if (data.size() < 2) throw DomainError("meta-regression needs at least two studies");
    double s0 = 0.0, s1 = 0.0, s2 = 0.0, t0 = 0.0, t1 = 0.0;
    for (const MetaDatum& d : data) {
        if (!(d.se_y > 0.0) || !std::isfinite(d.se_y)) throw DomainError("study standard errors must be positive");
        if (!std::isfinite(d.y) || !std::isfinite(d.x)) throw DomainError("study effects and moderators must be finite");
        const double w = 1.0 / (d.se_y * d.se_y);
        s0 += w;
        s1 += w * d.x;
        s2 += w * d.x * d.x;
        t0 += w * d.y;
        t1 += w * d.x * d.y;
    }
    // Symmetric 2x2 [[s0, s1], [s1, s2]]: condition number from its eigenvalues.
    const double half_trace = 0.5 * (s0 + s2);
    const double disc = std::sqrt(0.25 * (s0 - s2) * (s0 - s2) + s1 * s1);
    const double lmax = half_trace + disc;
    const double det = s0 * s2 - s1 * s1;
    const double lmin = det / lmax;
    if (!(lmin > 0.0) || lmax / lmin > 1e12) throw SingularDesignError("meta-regression design is singular");

    const double c00 = s2 / det;
    const double c11 = s0 / det;
    const double c01 = -s1 / det;
    WlsFit fit;
    fit.alpha_hat = c00 * t0 + c01 * t1;
    fit.beta_hat = c01 * t0 + c11 * t1;
    fit.se_alpha = std::sqrt(c00);
    fit.se_beta = std::sqrt(c11);
    fit.cov_alpha_beta = c01;
    return fit;
}

EffectEstimate coefficient(const WlsFit& fit, Coefficient which) {
    return which == Coefficient::alpha ? EffectEstimate{fit.alpha_hat, fit.se_alpha}
                                       : EffectEstimate{fit.beta_hat, fit.se_beta};
}

BayesFactorResult meta_regression_laplace_bf(const WlsFit& fit, Coefficient which,
                                             const PriorSpec& prior_alpha, const PriorSpec& prior_beta) {
    const bool alpha = which == Coefficient::alpha;
    const EffectEstimate tested = coefficient(fit, which);
    const EffectEstimate other = coefficient(fit, alpha ? Coefficient::beta : Coefficient::alpha);
    const PriorSpec& tested_prior = alpha ? prior_alpha : prior_beta;
    const PriorSpec& other_prior = alpha ? prior_beta : prior_alpha;

    const BayesFactorResult one = laplace_bf(tested.likelihood(), HypothesisTest(0.0, tested_prior));
    const double other_at_null =
        other.estimate - fit.cov_alpha_beta / (tested.se * tested.se) * tested.estimate;
    if (!other_prior.in_support(other.estimate) || !other_prior.in_support(other_at_null))
        throw UndefinedLaplaceError("Laplace approximation undefined: an estimate lies outside its prior support");
    const double log_ratio = log_pdf(other_prior, other.estimate) - log_pdf(other_prior, other_at_null);
    return BayesFactorResult::from_log(one.log_bf10 + log_ratio, Method::laplace);
}

double p_value_to_z(double p, Direction direction, double sign_hint) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("p value must lie in (0, 1)");
    switch (direction) {
        case Direction::two_sided: {
            const double z = special::normal_quantile_upper(0.5 * p);
            return sign_hint < 0.0 ? -z : z;
        }
        case Direction::greater: return special::normal_quantile_upper(p);
        case Direction::less: return special::normal_quantile(p);
    }
    return 0.0;
}

double z_to_p_value(double z, Direction direction) {
    switch (direction) {
        case Direction::two_sided: return 2.0 * special::normal_sf(std::fabs(z));
        case Direction::greater: return special::normal_sf(z);
        case Direction::less: return special::normal_cdf(z);
    }
    return 0.0;
}

}  // namespace sdbf
