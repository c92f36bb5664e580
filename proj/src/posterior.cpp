#include "sdbf/posterior.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "sdbf/errors.hpp"

namespace sdbf {

namespace {

constexpr double kMassRelTol = 1e-11;
constexpr double kGridTolerance = 1e-6;
constexpr int kMaxRefinementRounds = 40;

double conjugate_center(const ApproxLikelihood& likelihood, const PriorSpec& prior) {
    const double se2 = likelihood.se() * likelihood.se();
    const double s2 = prior.scale() * prior.scale();
    const double c = (s2 * likelihood.theta_hat() + se2 * prior.location()) / (s2 + se2);
    return std::clamp(c, prior.lower(), prior.upper());
}

}  // namespace

ApproxPosterior::ApproxPosterior(const ApproxLikelihood& likelihood, const PriorSpec& prior)
    : likelihood_(likelihood), product_(likelihood, prior), normalizer_(product_.log_integral()) {
    scaled_total_ = std::exp(normalizer_.log_value - product_.log_offset());
}

double ApproxPosterior::log_pdf(double theta) const {
    return product_.log_value_at(theta) - normalizer_.log_value;
}

double ApproxPosterior::pdf(double theta) const { return std::exp(log_pdf(theta)); }

double ApproxPosterior::scaled_mass(double a, double b) const {
    try {
        return product_.integrate_scaled(a, b, product_.options(kMassRelTol)).value;
    } catch (const ConvergenceError& e) {
        return e.best().value;
    }
}

double ApproxPosterior::cdf(double theta) const {
    const PriorSpec& p = prior();
    if (theta <= p.lower()) return 0.0;
    if (theta >= p.upper()) return 1.0;
    const double left = scaled_mass(p.lower(), theta) / scaled_total_;
    if (left <= 0.5) return std::clamp(left, 0.0, 1.0);
    const double right = scaled_mass(theta, p.upper()) / scaled_total_;
    return std::clamp(1.0 - right, 0.0, 1.0);
}

double ApproxPosterior::quantile(double p) const {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("probability must lie in (0, 1)");
    const PriorSpec& pr = prior();
    const double step0 = std::min(likelihood_.se(), pr.scale());
    const double x0 = conjugate_center(likelihood_, pr);

    // Bracket [lo, hi] with cdf(lo) <= p <= cdf(hi).
    double lo = x0;
    double hi = x0;
    double f_lo = cdf(lo) - p;
    double f_hi = f_lo;
    for (double step = step0; f_lo > 0.0; step *= 2.0) {
        lo = std::max(pr.lower(), x0 - step);
        f_lo = cdf(lo) - p;
        if (lo == pr.lower()) break;
    }
    for (double step = step0; f_hi < 0.0; step *= 2.0) {
        hi = std::min(pr.upper(), x0 + step);
        f_hi = cdf(hi) - p;
        if (hi == pr.upper()) break;
    }
    if (f_lo == 0.0) return lo;
    if (f_hi == 0.0) return hi;

    double x = 0.5 * (lo + hi);
    for (int iter = 0; iter < 200; ++iter) {
        const double fx = cdf(x) - p;
        if (std::fabs(fx) <= 1e-12) return x;
        if (fx < 0.0) lo = x;
        else hi = x;
        if (hi - lo <= 1e-15 * std::max(1.0, std::fabs(x))) return x;
        const double d = pdf(x);
        double next = d > 0.0 ? x - fx / d : lo - 1.0;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        x = next;
    }
    return x;
}

double posterior_pdf_at(const ApproxLikelihood& likelihood, const PriorSpec& prior, double theta) {
    return ApproxPosterior(likelihood, prior).pdf(theta);
}

double posterior_quantile(const ApproxLikelihood& likelihood, const PriorSpec& prior, double p) {
    return ApproxPosterior(likelihood, prior).quantile(p);
}

PosteriorGrid posterior_grid(const ApproxLikelihood& likelihood, const PriorSpec& prior,
                             std::size_t n_points) {
    if (n_points < 16) throw DomainError("posterior grid needs at least 16 points");
    const LikelihoodPriorProduct product(likelihood, prior);
    const LogIntegral z = product.log_integral();
    const double total = std::exp(z.log_value - product.log_offset());

    const double est = likelihood.theta_hat();
    const double se = likelihood.se();
    double lo = std::max(prior.lower(), std::min(est - 8.0 * se, prior.location() - 8.0 * prior.scale()));
    double hi = std::min(prior.upper(), std::max(est + 8.0 * se, prior.location() + 8.0 * prior.scale()));
    if (!(lo < hi)) {
        // Support lies entirely beyond the hull; cover the edge nearest to it.
        const double width = 16.0 * std::min(se, prior.scale());
        if (std::isfinite(prior.lower()) && prior.lower() >= hi) {
            lo = prior.lower();
            hi = std::min(prior.upper(), lo + width);
        } else {
            hi = prior.upper();
            lo = std::max(prior.lower(), hi - width);
        }
    }

    auto density = [&](double theta) {
        return std::exp(product.log_value_at(theta) - z.log_value);
    };
    auto mass = [&](double a, double b) {
        try {
            return product.integrate_scaled(a, b, product.options(kMassRelTol)).value / total;
        } catch (const ConvergenceError& e) {
            return e.best().value / total;
        }
    };

    const double span = hi - lo;
    const auto n = n_points;
    std::vector<double> xs(n);
    for (std::size_t i = 0; i < n; ++i) xs[i] = lo + span * static_cast<double>(i) / static_cast<double>(n - 1);
    xs.back() = hi;

    std::vector<double> fs(n);
    for (std::size_t i = 0; i < n; ++i) fs[i] = density(xs[i]);

    // Bisect the worst intervals until the trapezoid total matches the
    // quadrature mass of the span.
    for (int round = 0; round < kMaxRefinementRounds; ++round) {
        const std::size_t m = xs.size() - 1;
        std::vector<double> err(m);
        double total_err = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double trap = 0.5 * (xs[i + 1] - xs[i]) * (fs[i] + fs[i + 1]);
            err[i] = trap - mass(xs[i], xs[i + 1]);
            total_err += err[i];
        }
        if (std::fabs(total_err) <= kGridTolerance) break;
        const double cut = kGridTolerance / static_cast<double>(m);
        std::vector<double> nx{xs.front()};
        std::vector<double> nf{fs.front()};
        for (std::size_t i = 0; i < m; ++i) {
            if (std::fabs(err[i]) > cut) {
                const double mid = 0.5 * (xs[i] + xs[i + 1]);
                nx.push_back(mid);
                nf.push_back(density(mid));
            }
            nx.push_back(xs[i + 1]);
            nf.push_back(fs[i + 1]);
        }
        if (nx.size() == xs.size()) break;
        xs = std::move(nx);
        fs = std::move(nf);
    }

    PosteriorGrid grid;
    grid.theta = std::move(xs);
    grid.density = std::move(fs);
    grid.log_normalizer = z.log_value;
    grid.normalizer = std::exp(z.log_value);
    return grid;
}

double trapezoid_mass(const PosteriorGrid& grid) {
    double sum = 0.0;
    for (std::size_t i = 1; i < grid.theta.size(); ++i)
        sum += 0.5 * (grid.theta[i] - grid.theta[i - 1]) * (grid.density[i] + grid.density[i - 1]);
    return sum;
}

}  // namespace sdbf
