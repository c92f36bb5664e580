#pragma once

namespace sdbf {

/// Normal-shaped approximate likelihood built from an estimate and its
/// standard error: L(theta) = exp(-0.5 * (theta_hat - theta)^2 / se^2).
/// Unnormalized, so L(theta_hat) = 1.
class ApproxLikelihood {
public:
    /// Throws DomainError unless theta_hat is finite and se is positive and finite.
    ApproxLikelihood(double theta_hat, double se);

    double theta_hat() const noexcept { return theta_hat_; }
    double se() const noexcept { return se_; }

    double log_at(double theta) const noexcept {
        const double d = (theta_hat_ - theta) / se_;
        return -0.5 * d * d;
    }

    friend bool operator==(const ApproxLikelihood&, const ApproxLikelihood&) = default;

private:
    double theta_hat_;
    double se_;
};

/// L(theta), in (0, 1].
double approx_likelihood_at(const ApproxLikelihood& likelihood, double theta);

}  // namespace sdbf
