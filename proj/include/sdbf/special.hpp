#pragma once

// Scalar special functions shared by the distribution layer.

namespace sdbf::special {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kLnSqrt2Pi = 0.91893853320467274178;  // log(sqrt(2*pi))
inline constexpr double kSqrt2 = 1.41421356237309504880;

double normal_cdf(double z) noexcept;
double normal_sf(double z) noexcept;

/// Standard normal quantile (Wichura's AS 241, about 1e-16 relative).
/// Returns -inf / +inf at p = 0 / 1 and NaN outside [0, 1].
double normal_quantile(double p) noexcept;

/// Upper-tail variant: returns z with normal_sf(z) = q, accurate for tiny q.
double normal_quantile_upper(double q) noexcept;

/// Regularized incomplete beta I_x(a, b). `y` must equal 1 - x; passing it
/// separately avoids cancellation when x is close to 1.
/// Evaluated by the modified Lentz continued fraction.
double incomplete_beta(double a, double b, double x, double y);
double incomplete_beta(double a, double b, double x);

/// Lower / upper tail of the standard Student-t with `df` degrees of freedom.
double student_t_cdf(double t, double df);
double student_t_sf(double t, double df);

/// log Gamma((df+1)/2) - log Gamma(df/2) - 0.5 log(df*pi)
double student_t_log_norm(double df) noexcept;

}  // namespace sdbf::special
