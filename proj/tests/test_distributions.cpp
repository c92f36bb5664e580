#include <doctest.h>

#include <boost/math/distributions/cauchy.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>

#include "sdbf/distributions.hpp"
#include "sdbf/errors.hpp"
#include "sdbf/marginal.hpp"
#include "sdbf/special.hpp"
#include "support.hpp"

using namespace sdbf;
using sdbf::testing::CaseGenerator;

namespace {

// Untruncated family density and cdf from Boost.
double oracle_pdf(const PriorSpec& p, double x) {
    const double z = (x - p.location()) / p.scale();
    double d;
    switch (p.family()) {
        case Family::normal: d = boost::math::pdf(boost::math::normal(), z); break;
        case Family::cauchy: d = boost::math::pdf(boost::math::cauchy(), z); break;
        default: d = boost::math::pdf(boost::math::students_t(p.df()), z); break;
    }
    return d / p.scale();
}

double oracle_cdf(const PriorSpec& p, double x) {
    if (std::isinf(x)) return x > 0 ? 1.0 : 0.0;
    const double z = (x - p.location()) / p.scale();
    switch (p.family()) {
        case Family::normal: return boost::math::cdf(boost::math::normal(), z);
        case Family::cauchy: return boost::math::cdf(boost::math::cauchy(), z);
        default: return boost::math::cdf(boost::math::students_t(p.df()), z);
    }
}

double ks_distance(std::vector<double> xs, const PriorSpec& p) {
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = cdf(p, xs[i]);
        d = std::max({d, std::fabs(f - static_cast<double>(i) / n), std::fabs(static_cast<double>(i + 1) / n - f)});
    }
    return d;
}

}  // namespace

TEST_CASE("spec validation") {
    CHECK_THROWS_AS(PriorSpec::normal(0.0, 0.0), DomainError);
    CHECK_THROWS_AS(PriorSpec::normal(0.0, -1.0), DomainError);
    CHECK_THROWS_AS(PriorSpec::normal(kInf, 1.0), DomainError);
    CHECK_THROWS_AS(PriorSpec::student_t(0.0, 1.0, 0.0), DomainError);
    CHECK_THROWS_AS((void)PriorSpec::normal(0.0, 1.0).truncated(1.0, 1.0), DomainError);
    CHECK_THROWS_AS((void)PriorSpec::normal(0.0, 1.0).truncated(2.0, 1.0), DomainError);
    CHECK_THROWS_AS(parse_family("gamma"), DomainError);
    CHECK(parse_family("t") == Family::student_t);
    CHECK(PriorSpec::cauchy(0.0, 1.0).df() == 1.0);
    CHECK(std::isinf(PriorSpec::normal(0.0, 1.0).df()));
}

TEST_CASE("pdf examples") {
    CHECK(pdf(PriorSpec::normal(0.0, 1.0), 0.0) == doctest::Approx(0.3989422804014327).epsilon(1e-15));
    const PriorSpec informed = PriorSpec::normal(0.30, 0.15).truncated(0.0, kInf);
    const double expected = boost::math::pdf(boost::math::normal(), -2.0) /
                            (0.15 * boost::math::cdf(boost::math::complement(boost::math::normal(), -2.0)));
    CHECK(pdf(informed, 0.0) == doctest::Approx(expected).epsilon(1e-13));
    CHECK(pdf(informed, 0.0) == doctest::Approx(0.3683191).epsilon(1e-6));
    const PriorSpec informed_t = PriorSpec::student_t(0.35, 0.102, 3.0).truncated(0.0, kInf);
    CHECK(pdf(informed_t, 0.0) == doctest::Approx(0.1517234118).epsilon(1e-9));
    CHECK(pdf(informed, -1e-12) == 0.0);
    CHECK(log_pdf(informed, -1.0) == -kInf);
}

TEST_CASE("cdf and quantile examples") {
    CHECK(cdf(PriorSpec::normal(1.5, 2.0), 1.5) == 0.5);
    CHECK(cdf(PriorSpec::cauchy(0.0, 1.0), 1.0) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(cdf(PriorSpec::student_t(0.0, 1.0, 3.0), 3.182) == doctest::Approx(0.974991).epsilon(1e-6));
    CHECK(quantile(PriorSpec::normal(0.0, 1.0), 0.975) == doctest::Approx(1.959964).epsilon(1e-6));
    CHECK(quantile(PriorSpec::cauchy(0.0, 1.0), 0.75) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(quantile(PriorSpec::normal(0.0, 1.0), 0.0), DomainError);
    CHECK_THROWS_AS(quantile(PriorSpec::normal(0.0, 1.0), 1.0), DomainError);
    const PriorSpec t = PriorSpec::normal(0.0, 1.0).truncated(-1.0, 2.0);
    CHECK(cdf(t, -5.0) == 0.0);
    CHECK(cdf(t, 5.0) == 1.0);
}

TEST_CASE("pdf and cdf match Boost on random truncated specs") {
    CaseGenerator gen(21);
    for (int i = 0; i < 500; ++i) {
        const PriorSpec p = gen.prior();
        const double mass = oracle_cdf(p, p.upper()) - oracle_cdf(p, p.lower());
        CHECK(p.truncation_mass() == doctest::Approx(mass).epsilon(1e-10));
        for (int k = 0; k < 10; ++k) {
            const double x = p.location() + p.scale() * gen.uniform(-4.0, 4.0);
            if (!p.in_support(x)) {
                CHECK(pdf(p, x) == 0.0);
                continue;
            }
            CHECK(pdf(p, x) == doctest::Approx(oracle_pdf(p, x) / mass).epsilon(1e-10));
            const double c = (oracle_cdf(p, x) - oracle_cdf(p, p.lower())) / mass;
            CHECK(cdf(p, x) == doctest::Approx(c).epsilon(1e-9).scale(1.0));
            CHECK(cdf(p, x) + sf(p, x) == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("property: density integrates to one") {
    CaseGenerator gen(22);
    for (int i = 0; i < 300; ++i) {
        const PriorSpec p = gen.prior();
        CHECK(prior_normalization(p).value == doctest::Approx(1.0).epsilon(1e-8));
    }
}

TEST_CASE("property: support, monotone cdf and quantile round trip") {
    CaseGenerator gen(23);
    for (int i = 0; i < 300; ++i) {
        const PriorSpec p = gen.prior();
        double prev = 0.0;
        for (int k = -60; k <= 60; ++k) {
            const double x = p.location() + p.scale() * 0.1 * k;
            const double c = cdf(p, x);
            CHECK(c >= prev);
            prev = c;
            if (!p.in_support(x)) CHECK(pdf(p, x) == 0.0);
        }
        for (double q : {1e-6, 0.01, 0.2, 0.5, 0.8, 0.99, 1.0 - 1e-6}) {
            const double x = quantile(p, q);
            CHECK(p.in_support(x));
            CHECK(cdf(p, x) == doctest::Approx(q).epsilon(1e-10).scale(1.0));
        }
        for (int k = 0; k < 5; ++k) {
            const double lo = std::max(p.lower(), p.location() - 3.0 * p.scale());
            const double hi = std::min(p.upper(), p.location() + 3.0 * p.scale());
            const double x = gen.uniform(lo, hi);
            const double c = cdf(p, x);
            if (c > 1e-12 && c < 1.0 - 1e-12) CHECK(std::fabs(quantile(p, c) - x) <= 1e-8 * std::max(1.0, p.scale()));
        }
    }
}

TEST_CASE("property: t with one df is Cauchy") {
    for (double loc : {-1.0, 0.0, 2.5}) {
        for (double s : {0.1, 1.0, 3.0}) {
            const PriorSpec t = PriorSpec::student_t(loc, s, 1.0);
            const PriorSpec c = PriorSpec::cauchy(loc, s);
            for (double z = -50.0; z <= 50.0; z += 0.37) {
                const double x = loc + s * z;
                CHECK(std::fabs(pdf(t, x) - pdf(c, x)) <= 1e-12);
                CHECK(std::fabs(cdf(t, x) - cdf(c, x)) <= 1e-12);
            }
        }
    }
}

TEST_CASE("property: t with huge df approaches the normal") {
    const PriorSpec t = PriorSpec::student_t(0.3, 2.0, 1e6);
    const PriorSpec n = PriorSpec::normal(0.3, 2.0);
    for (double z = -5.0; z <= 5.0; z += 0.1) {
        const double x = 0.3 + 2.0 * z;
        CHECK(std::fabs(pdf(t, x) - pdf(n, x)) <= 1e-4);
    }
}

TEST_CASE("sampling") {
    const PriorSpec informed = PriorSpec::normal(0.30, 0.15).truncated(0.0, kInf);
    RandomStream rng(42);
    const auto draws = sample(informed, rng, 100000);
    CHECK(*std::min_element(draws.begin(), draws.end()) > 0.0);
    CHECK(ks_distance(draws, informed) < 0.01);

    RandomStream a(7, 3);
    RandomStream b(7, 3);
    CHECK(sample(PriorSpec::cauchy(0.0, 1.0), a, 1000) == sample(PriorSpec::cauchy(0.0, 1.0), b, 1000));

    RandomStream c(99);
    CHECK(ks_distance(sample(PriorSpec::normal(0.0, 1.0), c, 100000), PriorSpec::normal(0.0, 1.0)) < 0.01);

    CaseGenerator gen(24);
    for (int i = 0; i < 20; ++i) {
        const PriorSpec p = gen.prior();
        RandomStream r(1000 + i);
        const auto xs = sample(p, r, 20000);
        CHECK(std::all_of(xs.begin(), xs.end(), [&](double x) { return p.in_support(x); }));
        CHECK(ks_distance(xs, p) < 0.015);
    }
    RandomStream e(1);
    CHECK(sample(informed, e, 0).empty());
}

TEST_CASE("spec modifiers") {
    const PriorSpec base = PriorSpec::cauchy(0.0, 0.7).truncated(0.0, kInf);
    CHECK(base.with_scale(2.0).scale() == 2.0);
    CHECK(base.with_scale(2.0).lower() == 0.0);
    CHECK(base.with_location(1.0).location() == 1.0);
    CHECK(base.with_df(5.0).family() == Family::student_t);
    CHECK(base.with_df(5.0).df() == 5.0);
    CHECK_FALSE(base.untruncated().is_truncated());
    CHECK(base.with_scale(0.7) == base);
}
