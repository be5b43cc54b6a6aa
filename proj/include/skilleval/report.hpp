#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "skilleval/evidence.hpp"
#include "skilleval/scoring.hpp"

namespace skilleval {

inline constexpr int kReportVersion = 1;

struct GroupBreakdown {
    ProbeGroup group = ProbeGroup::abnormal_behavior_control;
    int passed = 0;
    int total = 0;
    double score = 0.0;  // s_g

    bool operator==(const GroupBreakdown&) const = default;
};

// Published outputs plus the per-task and per-group breakdowns that make the
// headline numbers recomputable.
struct ScoreReport {
    std::string skill_id;
    std::string skill_version;
    double utility = 0.0;         // U, rounded to one decimal
    double utility_exact = 0.0;   // U at full precision
    double security = 0.0;        // S, rounded to one decimal
    double security_exact = 0.0;  // S at full precision
    SecurityStatus status = SecurityStatus::Risky;
    std::vector<TaskScore> task_breakdown;
    std::array<GroupBreakdown, 3> group_breakdown;
    ScoringParams params;
    std::string manifest_digest;
    std::string generated_at;
    std::vector<std::string> notes;

    bool operator==(const ScoreReport&) const = default;
};

// Half-up rounding to one decimal, the display precision of published scores.
double round_one_decimal(double x);

// Computes the published outputs from normalized evidence. `frozen_time_ms`
// pins generated_at for byte-stable golden runs.
ScoreReport build_report(const EvidenceSet& evidence, const ScoringParams& params,
                         std::optional<std::int64_t> frozen_time_ms = std::nullopt);

// Deterministic serialization with stable key order; parse_report round-trips.
std::string render_json(const ScoreReport& report);
ScoreReport parse_report(std::string_view raw);

// Human-readable summary: headline scores and status first, breakdowns after.
std::string render_markdown(const ScoreReport& report);

}  // namespace skilleval
