#pragma once

// Batch kernels for the data-parallel inner loops: the likelihood x prior
// integrand evaluated on a panel of quadrature nodes or a posterior grid.
//
// Every kernel has a scalar reference implementation; an AVX2/FMA variant is
// compiled on x86-64 and picked at runtime when the CPU supports it. Set
// SDBF_ISA=scalar in the environment to force the reference path.

#include <limits>
#include <span>
#include <string_view>

namespace sdbf::kernels {

enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa) noexcept;

/// Parameters of
///   log f(theta) = -0.5 * ((theta - center) * inv_se)^2
///                  + log_const + kernel((theta - location) * inv_scale)
/// with kernel(z) = -z^2/2 (normal) or -(df+1)/2 * log1p(z^2/df) (Student-t),
/// and f = 0 outside [lower, upper]. inv_se = 0 gives a flat likelihood.
struct ProductIntegrand {
    double center = 0.0;
    double inv_se = 0.0;
    bool student = false;
    double location = 0.0;
    double inv_scale = 1.0;
    double df = 1.0;
    double log_const = 0.0;
    double lower = -std::numeric_limits<double>::infinity();
    double upper = std::numeric_limits<double>::infinity();
};

/// Writes f(theta[i]) into out[i]. Spans must have equal length.
void evaluate(const ProductIntegrand& params, std::span<const double> theta, std::span<double> out);

/// Element-wise exp / log, mainly for equivalence tests of the vector paths.
void exp(std::span<const double> x, std::span<double> out);
void log(std::span<const double> x, std::span<double> out);

bool isa_supported(Isa isa) noexcept;
Isa active_isa() noexcept;
/// Overrides the runtime choice (tests, benchmarks). Throws std::invalid_argument
/// if the CPU or build lacks the requested ISA.
void set_isa(Isa isa);

namespace scalar {
void evaluate(const ProductIntegrand& params, std::span<const double> theta, std::span<double> out);
void exp(std::span<const double> x, std::span<double> out);
void log(std::span<const double> x, std::span<double> out);
}  // namespace scalar

#if defined(SDBF_HAVE_AVX2_KERNELS)
namespace avx2 {
void evaluate(const ProductIntegrand& params, std::span<const double> theta, std::span<double> out);
void exp(std::span<const double> x, std::span<double> out);
void log(std::span<const double> x, std::span<double> out);
}  // namespace avx2
#endif

}  // namespace sdbf::kernels
