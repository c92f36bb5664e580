// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
// Tolerances are fixed here and must not be relaxed to make a line pass.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "sdbf/bayes.hpp"
#include "sdbf/datasets.hpp"
#include "sdbf/design.hpp"
#include "sdbf/errors.hpp"
#include "sdbf/marginal.hpp"
#include "sdbf/posterior.hpp"
#include "sdbf/sensitivity.hpp"
#include "sdbf/special.hpp"
#include "support.hpp"

using namespace sdbf;
using sdbf::testing::CaseGenerator;
using sdbf::testing::rel_diff;

namespace {

struct Check {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            if (detail.size() < 400) detail += (detail.empty() ? "" : "; ") + what;
        }
    }
};

std::string num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.8g", v);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------- criteria

Check t_test() {
    Check c;
    const HypothesisTest test(0.0, datasets::facial_feedback_prior());
    const ApproxLikelihood lik(-0.17, 0.19);
    sd_bf(lik, test);  // warm-up
    const auto t0 = std::chrono::steady_clock::now();
    const double bf10 = sd_bf(lik, test).bf10;
    const double secs = seconds_since(t0);
    c.require(rel_diff(bf10, 0.08585957) <= 0.005, "BF10 " + num(bf10));
    c.require(secs < 0.050, "runtime " + num(secs) + " s");
    c.detail = c.ok ? "BF10 " + num(bf10) + ", " + num(secs * 1e3) + " ms" : c.detail;
    return c;
}

Check survival_weak() {
    Check c;
    const auto est = datasets::survival_estimate();
    const HypothesisTest test(0.0, datasets::survival_weak_prior());
    const double quad = sd_bf(est.likelihood(), test).bf10;
    const double closed = closed_form_normal_bf(est.likelihood(), 0.0, 1.0, 0.0).bf10;
    c.require(std::fabs(quad - 1.3) <= 0.05, "quadrature BF10 " + num(quad));
    c.require(std::fabs(closed - 1.3) <= 0.05, "closed-form BF10 " + num(closed));
    c.require(rel_diff(quad, closed) <= 1e-8, "routes differ by " + num(rel_diff(quad, closed)));
    if (c.ok) c.detail = "quadrature " + num(quad) + ", closed form " + num(closed);
    return c;
}

Check survival_informed() {
    Check c;
    const auto lik = datasets::survival_estimate().likelihood();
    const HypothesisTest test(0.0, datasets::survival_informed_prior());
    const double bf01 = sd_bf(lik, test).bf01;
    c.require(bf01 >= 60.0 && bf01 <= 67.0, "BF01 " + num(bf01));
    const double lap01 = laplace_bf(lik, test, true).bf01;
    c.require(lap01 < 30.0, "Laplace ignoring truncation BF01 " + num(lap01));
    bool fired = false;
    try {
        laplace_bf(lik, test);
    } catch (const UndefinedLaplaceError&) {
        fired = true;
    }
    c.require(fired, "undefined-Laplace error did not fire");
    if (c.ok) c.detail = "BF01 " + num(bf01) + ", Laplace ignoring truncation " + num(lap01) + ", error fires";
    return c;
}

Check meta_regression() {
    Check c;
    const auto data = datasets::power_pose();
    const WlsFit fit = wls_fit(data);
    const PriorSpec prior = datasets::power_pose_prior();
    const HypothesisTest test(0.0, prior);
    const double a = sd_bf(coefficient(fit, Coefficient::alpha).likelihood(), test).bf10;
    const double b = sd_bf(coefficient(fit, Coefficient::beta).likelihood(), test).bf10;
    const double la = meta_regression_laplace_bf(fit, Coefficient::alpha, prior, prior).bf10;
    const double lb = meta_regression_laplace_bf(fit, Coefficient::beta, prior, prior).bf10;
    const double la1 = laplace_bf(coefficient(fit, Coefficient::alpha).likelihood(), test).bf10;
    c.require(std::fabs(a - 87.9) / 87.9 <= 0.10, "BF10 alpha " + num(a));
    c.require(std::fabs(b - 0.23) / 0.23 <= 0.10, "BF10 beta " + num(b));
    c.require(std::fabs(la - 89.4) / 89.4 <= 0.10, "Laplace alpha " + num(la));
    c.require(std::fabs(lb - 0.23) / 0.23 <= 0.10, "Laplace beta " + num(lb));
    c.detail = "BF10 alpha " + num(a) + " beta " + num(b) + "; Laplace alpha " + num(la) + " beta " + num(lb) +
               " (one-parameter Laplace alpha " + num(la1) + ")" + (c.ok ? "" : "; " + c.detail);
    return c;
}

Check closed_form_identities() {
    Check c;
    CaseGenerator gen(20240501);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const ApproxLikelihood lik = gen.likelihood();
        const double mu = gen.uniform(-2.0, 2.0);
        const double sigma = gen.log_uniform(0.05, 5.0);
        const double theta0 = gen.uniform(-3.0, 3.0);
        const double q = sd_bf(lik, HypothesisTest(theta0, PriorSpec::normal(mu, sigma))).bf10;
        const double cf = closed_form_normal_bf(lik, mu, sigma, theta0).bf10;
        worst = std::max(worst, rel_diff(q, cf));
    }
    c.require(worst <= 1e-8, "worst closed-form vs quadrature " + num(worst));
    double worst_j = 0.0;
    for (double n : {1.0, 10.0, 1e3, 1e6}) {
        const ApproxLikelihood lik(0.3, 0.2);
        const double z = 0.3 / 0.2;
        const double ratio = jeffreys_unit_info_bf(lik, n).bf01 / jeffreys_general_bf(z * z, n, 1.0).bf01;
        worst_j = std::max(worst_j, rel_diff(ratio, std::sqrt(1.0 + 1.0 / n)));
    }
    // "Exactly" in double precision: a few units in the last place.
    c.require(worst_j <= 4.0 * 2.220446049250313e-16, "Jeffreys ratio off by " + num(worst_j));
    if (c.ok) c.detail = "worst rel diff " + num(worst) + ", Jeffreys ratio " + num(worst_j);
    return c;
}

Check route_identity() {
    Check c;
    CaseGenerator gen(777);
    double worst = 0.0;
    int boundary = 0, truncated = 0;
    for (int i = 0; i < 1000; ++i) {
        const PriorSpec prior = gen.prior();
        const ApproxLikelihood lik = gen.likelihood();
        const double theta0 = gen.theta0_for(prior);
        boundary += theta0 == prior.lower() || theta0 == prior.upper();
        truncated += prior.is_truncated();
        const HypothesisTest test(theta0, prior);
        const double q = sd_bf(lik, test).log_bf10;
        const double r = sd_bf_ratio_form(lik, test).log_bf10;
        worst = std::max(worst, std::fabs(std::expm1(q - r)));
    }
    c.require(worst <= 1e-6, "worst relative difference " + num(worst));
    c.require(boundary > 0 && truncated > 0, "no boundary or truncated cases drawn");
    if (c.ok)
        c.detail = "worst rel diff " + num(worst) + " (" + std::to_string(truncated) + " truncated, " +
                   std::to_string(boundary) + " on a bound)";
    return c;
}

Check posterior_normalization() {
    Check c;
    CaseGenerator gen(31337);
    double worst_mass = 0.0;
    for (int i = 0; i < 200; ++i) {
        const PriorSpec prior = gen.prior();
        const ApproxLikelihood lik = gen.likelihood();
        const auto grid = posterior_grid(lik, prior, 200);
        worst_mass = std::max(worst_mass, std::fabs(trapezoid_mass(grid) - 1.0));
    }
    c.require(worst_mass <= 1e-4, "worst trapezoid mass error " + num(worst_mass));
    double worst_ord = 0.0;
    for (int i = 0; i < 200; ++i) {
        const ApproxLikelihood lik = gen.likelihood();
        const double mu = gen.uniform(-2.0, 2.0), sigma = gen.log_uniform(0.05, 5.0);
        const double w = 1.0 / (lik.se() * lik.se()) + 1.0 / (sigma * sigma);
        const double m = (lik.theta_hat() / (lik.se() * lik.se()) + mu / (sigma * sigma)) / w;
        const double s = 1.0 / std::sqrt(w);
        const auto grid = posterior_grid(lik, PriorSpec::normal(mu, sigma), 200);
        for (std::size_t k = 0; k < grid.theta.size(); k += 7) {
            const double z = (grid.theta[k] - m) / s;
            const double exact = std::exp(-0.5 * z * z) / (s * std::sqrt(2.0 * M_PI));
            if (exact > 1e-250) worst_ord = std::max(worst_ord, rel_diff(grid.density[k], exact));
        }
    }
    c.require(worst_ord <= 1e-8, "worst conjugate ordinate error " + num(worst_ord));
    if (c.ok) c.detail = "worst mass error " + num(worst_mass) + ", worst conjugate ordinate " + num(worst_ord);
    return c;
}

Check performance() {
    Check c;
    const auto fit = wls_fit(datasets::power_pose());
    const ApproxLikelihood lik = coefficient(fit, Coefficient::alpha).likelihood();
    SensitivitySpec sens{HypothesisTest(0.0, datasets::power_pose_prior()), VariedField::scale,
                         log_spaced(0.05, 2.0, 40)};
    auto t0 = std::chrono::steady_clock::now();
    const auto rows = sweep(lik, sens);
    const double t_sens = seconds_since(t0);

    std::vector<EffectEstimate> obs;
    for (int k = 1; k <= 60; ++k) obs.push_back({0.2 + 0.1 / k, 1.0 / std::sqrt(10.0 * k)});
    const Method sd[] = {Method::savage_dickey_quadrature};
    const HypothesisTest informed(0.0, datasets::facial_feedback_prior());
    t0 = std::chrono::steady_clock::now();
    const auto seq = sequential_bf_from_observed(obs, informed, sd);
    const double t_seq = seconds_since(t0);

    DesignSpec design{.true_effect = 0.2,
                      .unit_sd = 1.0,
                      .looks = {20, 40, 60, 80, 100, 120, 140, 160, 180, 200},
                      .test = HypothesisTest(0.0, PriorSpec::normal(0.0, 1.0)),
                      .replications = 2000,
                      .seed = 1};
    t0 = std::chrono::steady_clock::now();
    const auto res = run_design(design);
    const double t_design = seconds_since(t0);

    c.require(rows.size() == 40 && t_sens < 1.0, "sensitivity " + num(t_sens) + " s");
    c.require(seq.size() == 60 && t_seq < 1.0, "sequential " + num(t_seq) + " s");
    c.require(res.replicates.size() == 2000 && t_design < 10.0, "design " + num(t_design) + " s");
    if (c.ok)
        c.detail = "sweep " + num(t_sens * 1e3) + " ms, 60 looks " + num(t_seq * 1e3) + " ms, design " +
                   num(t_design * 1e3) + " ms";
    return c;
}

double ks_distance(std::vector<double> xs, const PriorSpec& p) {
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = cdf(p, xs[i]);
        d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
    }
    return d;
}

Check distribution_properties() {
    Check c;
    CaseGenerator gen(4242);
    double norm_err = 0.0, rt_err = 0.0, inv_err = 0.0;
    bool support = true, monotone = true;
    for (int i = 0; i < 200; ++i) {
        const PriorSpec p = gen.prior();
        norm_err = std::max(norm_err, std::fabs(prior_normalization(p).value - 1.0));
        if (std::isfinite(p.lower())) support &= pdf(p, std::nextafter(p.lower(), -kInf)) == 0.0 && cdf(p, p.lower() - 1.0) == 0.0;
        if (std::isfinite(p.upper())) support &= pdf(p, std::nextafter(p.upper(), kInf)) == 0.0 && cdf(p, p.upper() + 1.0) == 1.0;
        double prev = -1.0;
        for (int k = 0; k <= 50; ++k) {
            const double x = p.location() + p.scale() * (-6.0 + 12.0 * k / 50.0);
            const double f = cdf(p, x);
            monotone &= f >= prev;
            prev = f;
        }
        for (double q : {0.001, 0.1, 0.37, 0.5, 0.9, 0.999}) {
            const double x = quantile(p, q);
            rt_err = std::max(rt_err, std::fabs(cdf(p, x) - q));
        }
        const double lo = std::max(p.lower(), p.location() - 3.0 * p.scale());
        const double hi = std::min(p.upper(), p.location() + 3.0 * p.scale());
        const double theta = lo + (hi - lo) * gen.uniform(0.05, 0.95);
        const double f = cdf(p, theta);
        if (f > 1e-6 && f < 1.0 - 1e-6) inv_err = std::max(inv_err, std::fabs(quantile(p, f) - theta) / p.scale());
    }
    c.require(support, "nonzero density outside support");
    c.require(norm_err <= 1e-8, "normalization error " + num(norm_err));
    c.require(monotone, "cdf not monotone");
    c.require(rt_err <= 1e-10, "cdf(quantile(p)) error " + num(rt_err));
    c.require(inv_err <= 1e-8, "quantile(cdf(x)) error " + num(inv_err));

    double cauchy_err = 0.0, limit_err = 0.0;
    const PriorSpec t1 = PriorSpec::student_t(0.3, 1.7, 1.0), ca = PriorSpec::cauchy(0.3, 1.7);
    const PriorSpec tbig = PriorSpec::student_t(0.3, 1.7, 1e6), nm = PriorSpec::normal(0.3, 1.7);
    for (int k = 0; k <= 200; ++k) {
        const double x = 0.3 + 1.7 * (-5.0 + 10.0 * k / 200.0);
        cauchy_err = std::max({cauchy_err, std::fabs(pdf(t1, x) - pdf(ca, x)), std::fabs(cdf(t1, x) - cdf(ca, x))});
        limit_err = std::max(limit_err, std::fabs(pdf(tbig, x) - pdf(nm, x)));
    }
    c.require(cauchy_err <= 1e-12, "t(1) vs Cauchy " + num(cauchy_err));
    c.require(limit_err <= 1e-4, "t(1e6) vs normal " + num(limit_err));

    RandomStream rng(99);
    const double ks = ks_distance(sample(PriorSpec::normal(0.0, 1.0), rng, 100000), PriorSpec::normal(0.0, 1.0));
    c.require(ks < 0.01, "KS distance " + num(ks));
    if (c.ok)
        c.detail = "normalization " + num(norm_err) + ", round trip " + num(rt_err) + ", t1/Cauchy " + num(cauchy_err) +
                   ", KS " + num(ks);
    return c;
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Check()>>> criteria{
        {"t-test example BF10", t_test},
        {"survival example, weak prior", survival_weak},
        {"survival example, informed prior", survival_informed},
        {"meta-regression example", meta_regression},
        {"closed-form and Jeffreys identities", closed_form_identities},
        {"Savage-Dickey route identity", route_identity},
        {"posterior normalization", posterior_normalization},
        {"performance", performance},
        {"distribution properties", distribution_properties},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Check c;
        try {
            c = criteria[i].second();
        } catch (const std::exception& e) {
            c.ok = false;
            c.detail = std::string("exception: ") + e.what();
        }
        failed += !c.ok;
        std::printf("%s %zu %s: %s\n", c.ok ? "PASS" : "FAIL", i + 1, criteria[i].first, c.detail.c_str());
    }
    std::printf("%d of %zu criteria failed\n", failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
