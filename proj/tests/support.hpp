#pragma once

#include <cmath>
#include <random>

#include "sdbf/distributions.hpp"
#include "sdbf/likelihood.hpp"

namespace sdbf::testing {

inline double rel_diff(double a, double b) { return std::fabs(a - b) / std::max(std::fabs(a), std::fabs(b)); }

class CaseGenerator {
public:
    explicit CaseGenerator(std::uint64_t seed) : eng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
    double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
    int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(eng_); }

    PriorSpec untruncated_prior() {
        const double loc = uniform(-2.0, 2.0);
        const double scale = log_uniform(0.05, 5.0);
        switch (pick(3)) {
            case 0: return PriorSpec::normal(loc, scale);
            case 1: return PriorSpec::student_t(loc, scale, log_uniform(1.0, 50.0));
            default: return PriorSpec::cauchy(loc, scale);
        }
    }

    /// Untruncated, one-sided or two-sided truncation with bounds within a few scales of the location.
    PriorSpec prior() {
        const PriorSpec base = untruncated_prior();
        const double a = base.location() + base.scale() * uniform(-2.0, 1.0);
        const double b = a + base.scale() * uniform(0.5, 3.0);
        switch (pick(4)) {
            case 0: return base;
            case 1: return base.truncated(a, kInf);
            case 2: return base.truncated(-kInf, b);
            default: return base.truncated(a, b);
        }
    }

    ApproxLikelihood likelihood() { return ApproxLikelihood(uniform(-3.0, 3.0), log_uniform(0.02, 2.0)); }

    /// Test value inside the closed support; on a finite bound a quarter of the time.
    double theta0_for(const PriorSpec& p) {
        if (std::isfinite(p.lower()) && pick(4) == 0) return p.lower();
        if (std::isfinite(p.upper()) && pick(4) == 0) return p.upper();
        const double lo = std::isfinite(p.lower()) ? p.lower() : p.location() - 3.0 * p.scale();
        const double hi = std::isfinite(p.upper()) ? p.upper() : p.location() + 3.0 * p.scale();
        return uniform(lo, hi);
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace sdbf::testing
