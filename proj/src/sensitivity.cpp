#include "sdbf/sensitivity.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <optional>
#include <thread>

#include "sdbf/errors.hpp"

namespace sdbf {

std::string_view to_string(VariedField field) noexcept {
    switch (field) {
        case VariedField::scale: return "scale";
        case VariedField::location: return "location";
        case VariedField::df: return "df";
    }
    return "unknown";
}

VariedField parse_varied_field(std::string_view name) {
    if (name == "scale") return VariedField::scale;
    if (name == "location") return VariedField::location;
    if (name == "df") return VariedField::df;
    throw DomainError("unknown prior field '" + std::string(name) + "' (expected scale, location or df)");
}

void validate(const SensitivitySpec& spec) {
    if (spec.grid.empty()) throw DomainError("sensitivity grid is empty");
    if (spec.methods.empty()) throw DomainError("no methods requested");
    for (std::size_t i = 0; i < spec.grid.size(); ++i) {
        const double v = spec.grid[i];
        if (!std::isfinite(v)) throw DomainError("sensitivity grid values must be finite");
        if (spec.vary != VariedField::location && !(v > 0.0))
            throw DomainError("scale and df grids must be strictly positive");
        if (i > 0 && !(v > spec.grid[i - 1])) throw DomainError("sensitivity grid must be strictly increasing");
    }
}

PriorSpec vary_prior(const PriorSpec& base, VariedField field, double value) {
    switch (field) {
        case VariedField::scale: return base.with_scale(value);
        case VariedField::location: return base.with_location(value);
        case VariedField::df: return base.with_df(value);
    }
    return base;
}

std::vector<SensitivityRow> sweep(const ApproxLikelihood& likelihood, const SensitivitySpec& spec) {
    validate(spec);
    const std::size_t n = spec.grid.size();
    std::vector<std::optional<SensitivityRow>> slots(n);

    auto run_row = [&](std::size_t i) {
        const double v = spec.grid[i];
        const PriorSpec prior = vary_prior(spec.base.prior, spec.vary, v);
        const HypothesisTest test(spec.base.theta0, prior);
        slots[i] = SensitivityRow{v, prior, evaluate_all(spec.methods, likelihood, test, spec.options)};
    };

    std::size_t workers = spec.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : spec.threads;
    workers = std::min(workers, n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) run_row(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < n; i = next++) run_row(i);
            });
        }
    }
    std::vector<SensitivityRow> rows;
    rows.reserve(n);
    for (auto& slot : slots) rows.push_back(std::move(*slot));
    return rows;
}

std::vector<double> log_spaced(double lo, double hi, std::size_t n) {
    if (!(lo > 0.0) || !(hi > lo) || n < 2) throw DomainError("log grid needs 0 < lo < hi and at least two points");
    std::vector<double> out(n);
    const double a = std::log(lo);
    const double b = std::log(hi);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
    out.front() = lo;
    out.back() = hi;
    return out;
}

std::vector<double> linear_spaced(double lo, double hi, std::size_t n) {
    if (!(hi > lo) || n < 2) throw DomainError("linear grid needs lo < hi and at least two points");
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    out.back() = hi;
    return out;
}

}  // namespace sdbf
