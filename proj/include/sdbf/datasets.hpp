#pragma once

// Builtin example data and the reference results they are checked against.

#include <string>
#include <string_view>
#include <vector>

#include "sdbf/bayes.hpp"
#include "sdbf/summaries.hpp"

namespace sdbf::datasets {

/// Funniness ratings after a pen-in-mouth manipulation: smile group vs pout group.
TwoSampleSummary facial_feedback_summary();
/// The same comparison as the rounded (d, se) pair used for the reference result.
EffectEstimate facial_feedback_estimate();
/// Student-t(0.35, 0.102, df = 3) truncated to [0, inf).
PriorSpec facial_feedback_prior();

/// Log hazard ratio and its standard error from a survival comparison.
EffectEstimate survival_estimate();
/// Normal(0, 1).
PriorSpec survival_weak_prior();
/// Normal(0.30, 0.15) truncated to [0, inf).
PriorSpec survival_informed_prior();

/// Six replication studies split by familiarity with the hypothesis;
/// x = +0.5 for familiar participants, -0.5 otherwise.
std::vector<MetaDatum> power_pose();
/// Cauchy(0, 1/sqrt(2)).
PriorSpec power_pose_prior();

struct ReferenceValue {
    std::string label;
    double value;
    std::string note;
};

enum class Example { t_test, survival_weak, survival_informed, power_pose };

std::string_view to_string(Example example) noexcept;
/// Throws DomainError for unknown names.
Example parse_example(std::string_view name);

std::vector<ReferenceValue> reference_values(Example example);

}  // namespace sdbf::datasets
