#include "sdbf/datasets.hpp"

#include <cmath>

#include "sdbf/errors.hpp"

namespace sdbf::datasets {

TwoSampleSummary facial_feedback_summary() { return {4.63, 1.48, 53.0, 4.87, 1.32, 57.0}; }

EffectEstimate facial_feedback_estimate() { return {-0.17, 0.19}; }

PriorSpec facial_feedback_prior() { return PriorSpec::student_t(0.35, 0.102, 3.0).truncated(0.0, kInf); }

EffectEstimate survival_estimate() { return {-0.19, 0.08}; }

PriorSpec survival_weak_prior() { return PriorSpec::normal(0.0, 1.0); }

PriorSpec survival_informed_prior() { return PriorSpec::normal(0.30, 0.15).truncated(0.0, kInf); }

std::vector<MetaDatum> power_pose() {
    return {
        {0.05, 0.24, 0.5},  {0.77, 0.40, -0.5},  // Bailey
        {0.16, 0.21, 0.5},  {0.31, 0.48, -0.5},  // Ronay
        {0.33, 0.16, 0.5},  {0.22, 0.31, -0.5},  // Klaschinski
        {0.38, 0.15, 0.5},  {0.69, 0.48, -0.5},  // Bombari
        {0.16, 0.15, 0.5},  {0.11, 0.42, -0.5},  // Latu
        {0.03, 0.17, 0.5},  {0.28, 0.18, -0.5},  // Keller
    };
}

PriorSpec power_pose_prior() { return PriorSpec::cauchy(0.0, 1.0 / std::sqrt(2.0)); }

std::string_view to_string(Example example) noexcept {
    switch (example) {
        case Example::t_test: return "t_test";
        case Example::survival_weak: return "survival_weak";
        case Example::survival_informed: return "survival_informed";
        case Example::power_pose: return "power_pose";
    }
    return "unknown";
}

Example parse_example(std::string_view name) {
    for (Example e : {Example::t_test, Example::survival_weak, Example::survival_informed, Example::power_pose})
        if (name == to_string(e)) return e;
    throw DomainError("unknown example '" + std::string(name) +
                      "' (expected t_test, survival_weak, survival_informed or power_pose)");
}

std::vector<ReferenceValue> reference_values(Example example) {
    switch (example) {
        case Example::t_test:
            return {{"BF10", 0.08585957, "scripted computation on the rounded estimate"},
                    {"BF01", 11.5, "rounded in the text; 1 / 0.08585957 = 11.65"}};
        case Example::survival_weak: return {{"BF10", 1.3, ""}};
        case Example::survival_informed:
            return {{"BF01", 63.2, "from unrounded inputs; the rounded estimate gives about 63.5"},
                    {"Laplace BF01 (untruncated density)", 23.4, "full-model Laplace"}};
        case Example::power_pose:
            return {{"BF10 alpha", 87.9, ""},
                    {"BF10 beta", 0.23, ""},
                    {"Laplace BF10 alpha", 89.4, "full-model Laplace"},
                    {"Laplace BF10 beta", 0.23, "full-model Laplace"}};
    }
    return {};
}

}  // namespace sdbf::datasets
