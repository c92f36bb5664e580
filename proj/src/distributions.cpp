#include "sdbf/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sdbf/errors.hpp"
#include "sdbf/special.hpp"

namespace sdbf {

namespace {

double standard_log_kernel(Family family, double df, double z) noexcept {
    if (family == Family::normal) return -0.5 * z * z;
    return -0.5 * (df + 1.0) * std::log1p(z * z / df);
}

double standard_log_const(Family family, double df) noexcept {
    switch (family) {
        case Family::normal: return -special::kLnSqrt2Pi;
        case Family::cauchy: return -std::log(special::kPi);
        case Family::student_t: return special::student_t_log_norm(df);
    }
    return 0.0;
}

double standard_pdf(Family family, double df, double z) noexcept {
    return std::exp(standard_log_const(family, df) + standard_log_kernel(family, df, z));
}

double to_standard(const PriorSpec& spec, double theta) noexcept {
    return (theta - spec.location()) / spec.scale();
}

// Quantile of the standardized family from a lower-tail probability.
double from_lower_prob(Family family, double df, double p) {
    if (p <= 0.5) return detail::standard_lower_quantile(family, df, p);
    return -detail::standard_lower_quantile(family, df, 1.0 - p);
}

// Quantile of the standardized family from an upper-tail probability.
double from_upper_prob(Family family, double df, double q) {
    if (q <= 0.5) return -detail::standard_lower_quantile(family, df, q);
    return detail::standard_lower_quantile(family, df, 1.0 - q);
}

}  // namespace

std::string_view to_string(Family family) noexcept {
    switch (family) {
        case Family::normal: return "normal";
        case Family::student_t: return "student_t";
        case Family::cauchy: return "cauchy";
    }
    return "unknown";
}

Family parse_family(std::string_view name) {
    if (name == "normal" || name == "gaussian") return Family::normal;
    if (name == "student_t" || name == "t" || name == "student-t") return Family::student_t;
    if (name == "cauchy") return Family::cauchy;
    throw DomainError("unknown prior family '" + std::string(name) + "'");
}

PriorSpec::PriorSpec(Family family, double location, double scale, double df, double lower,
                     double upper)
    : family_(family), location_(location), scale_(scale), df_(df), lower_(lower), upper_(upper) {
    if (!std::isfinite(location_)) throw DomainError("prior location must be finite");
    if (!(scale_ > 0.0) || !std::isfinite(scale_)) throw DomainError("prior scale must be positive and finite");
    switch (family_) {
        case Family::normal: df_ = kInf; break;
        case Family::cauchy: df_ = 1.0; break;
        case Family::student_t:
            if (!(df_ > 0.0) || !std::isfinite(df_))
                throw DomainError("student_t prior needs finite df > 0");
            break;
    }
    if (std::isnan(lower_) || std::isnan(upper_) || !(lower_ < upper_))
        throw DomainError("prior truncation needs lower < upper");

    log_family_const_ = standard_log_const(family_, df_) - std::log(scale_);
    const double mass = truncation_mass();
    if (!(mass > 0.0)) throw DomainError("truncation region carries no prior mass");
    log_mass_ = std::log(mass);
}

double PriorSpec::truncation_mass() const noexcept {
    if (!is_truncated()) return 1.0;
    const double lz = to_standard(*this, lower_);
    const double hz = to_standard(*this, upper_);
    if (lz >= 0.0)
        return detail::standard_sf(family_, df_, lz) - detail::standard_sf(family_, df_, hz);
    if (hz <= 0.0)
        return detail::standard_cdf(family_, df_, hz) - detail::standard_cdf(family_, df_, lz);
    return 1.0 - detail::standard_cdf(family_, df_, lz) - detail::standard_sf(family_, df_, hz);
}

PriorSpec PriorSpec::truncated(double lower, double upper) const {
    return PriorSpec(family_, location_, scale_, df_, lower, upper);
}

PriorSpec PriorSpec::untruncated() const { return truncated(-kInf, kInf); }

PriorSpec PriorSpec::with_location(double location) const {
    return PriorSpec(family_, location, scale_, df_, lower_, upper_);
}

PriorSpec PriorSpec::with_scale(double scale) const {
    return PriorSpec(family_, location_, scale, df_, lower_, upper_);
}

PriorSpec PriorSpec::with_df(double df) const {
    return PriorSpec(Family::student_t, location_, scale_, df, lower_, upper_);
}

double PriorSpec::family_log_pdf(double theta) const noexcept {
    return log_family_const_ + standard_log_kernel(family_, df_, to_standard(*this, theta));
}

std::string describe(const PriorSpec& spec) {
    std::ostringstream os;
    os.precision(10);
    os << to_string(spec.family()) << "(location=" << spec.location() << ", scale=" << spec.scale();
    if (spec.family() == Family::student_t) os << ", df=" << spec.df();
    os << ")";
    if (spec.is_truncated()) {
        os << " truncated to [" << spec.lower() << ", " << spec.upper() << "]";
    }
    return os.str();
}

double log_pdf(const PriorSpec& spec, double theta) {
    if (!spec.in_support(theta)) return -kInf;
    return spec.family_log_pdf(theta) - spec.log_truncation_mass();
}

double pdf(const PriorSpec& spec, double theta) {
    if (!spec.in_support(theta)) return 0.0;
    return std::exp(log_pdf(spec, theta));
}

double cdf(const PriorSpec& spec, double theta) {
    if (std::isnan(theta)) return theta;
    if (theta <= spec.lower()) return 0.0;
    if (theta >= spec.upper()) return 1.0;
    const Family f = spec.family();
    const double df = spec.df();
    const double z = to_standard(spec, theta);
    const double lz = to_standard(spec, spec.lower());
    const double mass = spec.truncation_mass();
    double value;
    if (lz >= 0.0) {
        value = (detail::standard_sf(f, df, lz) - detail::standard_sf(f, df, z)) / mass;
    } else {
        const double base = spec.lower() == -kInf ? 0.0 : detail::standard_cdf(f, df, lz);
        value = (detail::standard_cdf(f, df, z) - base) / mass;
    }
    return std::clamp(value, 0.0, 1.0);
}

double sf(const PriorSpec& spec, double theta) {
    if (std::isnan(theta)) return theta;
    if (theta <= spec.lower()) return 1.0;
    if (theta >= spec.upper()) return 0.0;
    const Family f = spec.family();
    const double df = spec.df();
    const double z = to_standard(spec, theta);
    const double hz = to_standard(spec, spec.upper());
    const double mass = spec.truncation_mass();
    double value;
    if (hz <= 0.0) {
        value = (detail::standard_cdf(f, df, hz) - detail::standard_cdf(f, df, z)) / mass;
    } else {
        const double base = spec.upper() == kInf ? 0.0 : detail::standard_sf(f, df, hz);
        value = (detail::standard_sf(f, df, z) - base) / mass;
    }
    return std::clamp(value, 0.0, 1.0);
}

double quantile(const PriorSpec& spec, double p) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("quantile needs 0 < p < 1");
    const Family f = spec.family();
    const double df = spec.df();
    double z;
    if (!spec.is_truncated()) {
        z = from_lower_prob(f, df, p);
    } else {
        const double lz = to_standard(spec, spec.lower());
        const double mass = spec.truncation_mass();
        if (lz >= 0.0) {
            const double q = detail::standard_sf(f, df, lz) - p * mass;
            z = from_upper_prob(f, df, q);
        } else {
            const double base = spec.lower() == -kInf ? 0.0 : detail::standard_cdf(f, df, lz);
            z = from_lower_prob(f, df, base + p * mass);
        }
    }
    return std::clamp(spec.location() + spec.scale() * z, spec.lower(), spec.upper());
}

std::vector<double> sample(const PriorSpec& spec, RandomStream& rng, std::size_t n) {
    std::vector<double> draws;
    draws.reserve(n);
    for (std::size_t i = 0; i < n; ++i) draws.push_back(quantile(spec, rng.uniform()));
    return draws;
}

namespace detail {

double standard_cdf(Family family, double df, double z) {
    switch (family) {
        case Family::normal: return special::normal_cdf(z);
        case Family::cauchy:
            if (z < 0.0) return std::atan(-1.0 / z) / special::kPi;
            return 1.0 - (z == 0.0 ? 0.5 : std::atan(1.0 / z) / special::kPi);
        case Family::student_t: return special::student_t_cdf(z, df);
    }
    return 0.0;
}

double standard_sf(Family family, double df, double z) { return standard_cdf(family, df, -z); }

double standard_lower_quantile(Family family, double df, double q) {
    if (q == 0.5) return 0.0;
    switch (family) {
        case Family::normal: return special::normal_quantile(q);
        case Family::cauchy: return -1.0 / std::tan(special::kPi * q);
        case Family::student_t: break;
    }

    // Safeguarded Newton on log F(z) = log q over the bracket [lo, hi], z <= 0.
    const double log_q = std::log(q);
    double hi = 0.0;
    double lo = std::min(special::normal_quantile(q), -1.0);
    while (standard_cdf(family, df, lo) >= q) {
        hi = lo;
        lo *= 2.0;
        if (!std::isfinite(lo)) return -kInf;
    }
    double z = std::clamp(special::normal_quantile(q), lo, hi);
    for (int iter = 0; iter < 300; ++iter) {
        const double F = standard_cdf(family, df, z);
        if (F == q) return z;
        if (F < q) lo = z; else hi = z;
        const double g = std::log(F) - log_q;
        const double slope = standard_pdf(family, df, z) / F;
        double next = z - g / slope;
        if (!(next > lo && next < hi) || !std::isfinite(next)) {
            // geometric midpoint keeps bisection efficient across decades
            next = (lo < -1.0 && hi < -1.0) ? -std::sqrt(lo * hi) : 0.5 * (lo + hi);
        }
        if (std::fabs(next - z) <= 1e-15 * std::max(1.0, std::fabs(z))) return next;
        z = next;
    }
    return z;
}

}  // namespace detail

}  // namespace sdbf
