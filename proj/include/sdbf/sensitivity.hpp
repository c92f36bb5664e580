#pragma once

#include <cstddef>
#include <vector>

#include "sdbf/bayes.hpp"

namespace sdbf {

enum class VariedField { scale, location, df };

std::string_view to_string(VariedField field) noexcept;
/// Throws DomainError for unknown names.
VariedField parse_varied_field(std::string_view name);

struct SensitivitySpec {
    HypothesisTest base;
    VariedField vary = VariedField::scale;
    std::vector<double> grid;
    std::vector<Method> methods{Method::savage_dickey_quadrature};
    EvaluationOptions options{};
    /// Worker threads; 0 picks the hardware concurrency. Results do not depend on it.
    std::size_t threads = 1;
};

struct SensitivityRow {
    double varied_value;
    PriorSpec prior;
    /// One outcome per requested method, in request order.
    std::vector<MethodOutcome> outcomes;
};

/// Throws DomainError if the grid is empty, not strictly increasing, or not
/// strictly positive when varying scale or df.
void validate(const SensitivitySpec& spec);

/// Base prior with the varied field replaced.
PriorSpec vary_prior(const PriorSpec& base, VariedField field, double value);

/// One row per grid value, in grid order. Per-cell failures are recorded in
/// the outcomes; the sweep itself only throws from validate().
std::vector<SensitivityRow> sweep(const ApproxLikelihood& likelihood, const SensitivitySpec& spec);

std::vector<double> log_spaced(double lo, double hi, std::size_t n);
std::vector<double> linear_spaced(double lo, double hi, std::size_t n);

}  // namespace sdbf
