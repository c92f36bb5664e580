#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "sdbf/rng.hpp"

namespace sdbf {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Family { normal, student_t, cauchy };

std::string_view to_string(Family family) noexcept;
/// Accepts "normal", "student_t" (also "t"), "cauchy". Throws DomainError.
Family parse_family(std::string_view name);

/// A location-scale prior for the focal parameter, optionally truncated to
/// [lower, upper]. Infinite bounds mean no truncation on that side. Cauchy
/// is treated as Student-t with one degree of freedom.
///
/// The constructor validates its fields and caches the log normalizing
/// constant, so an existing PriorSpec is always usable.
class PriorSpec {
public:
    PriorSpec(Family family, double location, double scale, double df = kInf,
              double lower = -kInf, double upper = kInf);

    static PriorSpec normal(double location, double scale) {
        return PriorSpec(Family::normal, location, scale);
    }
    static PriorSpec student_t(double location, double scale, double df) {
        return PriorSpec(Family::student_t, location, scale, df);
    }
    static PriorSpec cauchy(double location, double scale) {
        return PriorSpec(Family::cauchy, location, scale, 1.0);
    }

    [[nodiscard]] PriorSpec truncated(double lower, double upper) const;
    [[nodiscard]] PriorSpec untruncated() const;
    [[nodiscard]] PriorSpec with_location(double location) const;
    [[nodiscard]] PriorSpec with_scale(double scale) const;
    /// Normal or Cauchy priors become Student-t with the given df.
    [[nodiscard]] PriorSpec with_df(double df) const;

    Family family() const noexcept { return family_; }
    double location() const noexcept { return location_; }
    double scale() const noexcept { return scale_; }
    /// +inf for the normal family, 1 for Cauchy.
    double df() const noexcept { return df_; }
    double lower() const noexcept { return lower_; }
    double upper() const noexcept { return upper_; }

    bool is_truncated() const noexcept { return lower_ > -kInf || upper_ < kInf; }
    /// True when theta lies in the closed support [lower, upper].
    bool in_support(double theta) const noexcept { return theta >= lower_ && theta <= upper_; }
    bool heavy_tailed() const noexcept { return family_ != Family::normal; }

    /// Probability the untruncated family assigns to [lower, upper].
    double truncation_mass() const noexcept;
    double log_truncation_mass() const noexcept { return log_mass_; }

    /// log of the untruncated family density at theta (ignores bounds).
    double family_log_pdf(double theta) const noexcept;
    /// Additive constant of the truncated log density:
    /// log_pdf(theta) = log_density_const() + kernel(z), with kernel(0) = 0.
    double log_density_const() const noexcept { return log_family_const_ - log_mass_; }

    friend bool operator==(const PriorSpec&, const PriorSpec&) = default;

private:
    Family family_;
    double location_;
    double scale_;
    double df_;
    double lower_;
    double upper_;
    double log_family_const_;
    double log_mass_;
};

std::string describe(const PriorSpec& spec);

/// Density of the (truncated) prior; exactly 0 outside [lower, upper]. At a
/// finite bound the limit from inside the support is returned.
double pdf(const PriorSpec& spec, double theta);
double log_pdf(const PriorSpec& spec, double theta);

double cdf(const PriorSpec& spec, double theta);
/// 1 - cdf, computed without cancellation in the upper tail.
double sf(const PriorSpec& spec, double theta);

/// Inverse of cdf. Throws DomainError unless 0 < p < 1.
double quantile(const PriorSpec& spec, double p);

/// Inverse-CDF draws; always inside [lower, upper].
std::vector<double> sample(const PriorSpec& spec, RandomStream& rng, std::size_t n);

namespace detail {
/// Standardized untruncated family CDF and survival function.
double standard_cdf(Family family, double df, double z);
double standard_sf(Family family, double df, double z);
/// z <= 0 with standard_cdf(z) = q, for 0 < q <= 0.5.
double standard_lower_quantile(Family family, double df, double q);
}  // namespace detail

}  // namespace sdbf
