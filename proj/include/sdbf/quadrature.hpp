#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace sdbf {

struct IntegrationResult {
    double value = 0.0;
    double error_estimate = 0.0;
    std::size_t evaluations = 0;
};

struct QuadratureOptions {
    double rel_tol = 1e-8;
    double abs_tol = 1e-12;
    /// Maximum number of panel bisections.
    std::size_t max_subdivisions = 1000;
    /// Interior points where the interval is split before adaptation starts.
    std::vector<double> split_points;
    /// Length scale of the rational map used on infinite tails.
    double tail_scale = 1.0;
};

/// Thrown when the error target is not met within the subdivision budget.
/// Carries the estimate with the smallest error seen.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, IntegrationResult best)
        : std::runtime_error(what), best_(best) {}
    const IntegrationResult& best() const noexcept { return best_; }

private:
    IntegrationResult best_;
};

/// Integrand evaluated on a batch of abscissae: out[i] = f(x[i]).
using BatchIntegrand = std::function<void(std::span<const double>, std::span<double>)>;

/// Globally adaptive 21-point Gauss-Kronrod quadrature over [lower, upper];
/// either bound may be infinite. Infinite tails are mapped onto [0, 1) with
/// theta = a +/- s t / (1 - t). Stops once
/// error_estimate <= max(abs_tol, rel_tol * |value|).
IntegrationResult integrate_batch(const BatchIntegrand& f, double lower, double upper,
                                  const QuadratureOptions& options = {});

IntegrationResult integrate(const std::function<double(double)>& f, double lower, double upper,
                            const QuadratureOptions& options = {});

}  // namespace sdbf
