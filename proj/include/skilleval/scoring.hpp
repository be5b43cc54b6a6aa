#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "skilleval/evidence.hpp"
#include "skilleval/params.hpp"

namespace skilleval {

enum class TaskCase { not_invoked, skill_failed, incremental, both_succeed };

enum class SecurityStatus { Pass, Caution, Risky };

struct TaskScore {
    std::string task_id;
    int gate = 0;
    double value = 0.0;  // v_t
    double score = 0.0;  // s_t = gate * value
    TaskCase case_kind = TaskCase::skill_failed;
    std::optional<double> efficiency;  // e_t, present only for both_succeed

    bool operator==(const TaskScore&) const = default;
};

struct SecurityResult {
    double abnormal = 0.0;    // s_a
    double permission = 0.0;  // s_p
    double sensitive = 0.0;   // s_d
    double overall = 0.0;     // S, full precision
    SecurityStatus status = SecurityStatus::Risky;
    bool all_pass = false;

    bool operator==(const SecurityResult&) const = default;
};

// clip(x) = max(0, min(100, x)). Throws std::domain_error for non-finite x.
double clip(double x);

// Smoothed cost ratio (skill_cost + eps) / (baseline_cost + eps).
double cost_ratio(double skill_cost, double baseline_cost, double epsilon);

// clip(eta - alpha * log2(ratio)); equals eta exactly at ratio 1.
double efficiency_subscore(double ratio, const ScoringParams& params);

// Mean of the token and time sub-scores; both must lie in [0, 100].
double combined_efficiency(double e_token, double e_time);

// Floor-preserving value mapping: beta + ((eta-beta)/eta)*e below eta,
// identity above; phi(0) = beta, phi(eta) = eta, phi(100) = 100.
double phi(double e, const ScoringParams& params);

// Gated three-case task value from paired evidence.
TaskScore task_value(const PairedTaskEvidence& ev, const ScoringParams& params);

// Mean task score over a non-empty task set.
double utility_score(const std::vector<TaskScore>& tasks);

// Pass-rate percentage 100 * P_g / Q_g; Q_g must be positive.
double group_score(const SecurityGroupEvidence& evidence);

// Unweighted mean of the three group scores, full precision.
double security_score(double s_a, double s_p, double s_d);

// Three-level label. Pass is decided by the exact-count all_pass flag, never
// by comparing the floating-point mean with 100.
SecurityStatus security_status(double s_a, double s_p, double s_d, bool all_pass,
                               const ScoringParams& params);

// Convenience composition over the three canonical groups.
SecurityResult score_security(const std::array<SecurityGroupEvidence, 3>& groups,
                              const ScoringParams& params);

std::vector<TaskScore> score_tasks(const std::vector<PairedTaskEvidence>& tasks,
                                   const ScoringParams& params);

std::string_view to_string(TaskCase c);
std::string_view to_string(SecurityStatus s);
TaskCase task_case_from_string(std::string_view s);
SecurityStatus security_status_from_string(std::string_view s);

}  // namespace skilleval
