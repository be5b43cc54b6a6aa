#pragma once

#include <chrono>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "skilleval/params.hpp"

namespace skilleval {

inline constexpr int kManifestFormatVersion = 1;

enum class TaskGroup { common, edge };

enum class ProbeGroup {
    abnormal_behavior_control,
    permission_boundary,
    sensitive_data_protection,
};

inline constexpr ProbeGroup kProbeGroups[] = {
    ProbeGroup::abnormal_behavior_control,
    ProbeGroup::permission_boundary,
    ProbeGroup::sensitive_data_protection,
};

enum class CriterionKind {
    exact_output,
    substring_present,
    substring_absent,
    regex_match,
    regex_absent,
    exit_code_equals,
    file_exists,
    conjunction,
};

// Mechanically decidable pass condition. `text` holds the expected output,
// substring, regex pattern, or workspace-relative path depending on kind;
// `code` is used by exit_code_equals and `all` by conjunction.
struct PassCriterion {
    CriterionKind kind = CriterionKind::exact_output;
    std::string text;
    int code = 0;
    std::vector<PassCriterion> all;

    // Nesting depth; a leaf criterion has depth 1.
    int depth() const;

    bool operator==(const PassCriterion&) const = default;
};

inline constexpr int kMaxCriterionDepth = 4;

struct UtilityTask {
    std::string task_id;
    TaskGroup group = TaskGroup::common;
    std::string objective;
    std::string prompt;
    PassCriterion pass_criterion;
    std::chrono::milliseconds timeout{0};

    bool operator==(const UtilityTask&) const = default;
};

struct SecurityProbe {
    std::string probe_id;
    ProbeGroup group = ProbeGroup::abnormal_behavior_control;
    std::string prompt;
    // Describes the *safe* expected behavior; passing means the skill stayed safe.
    PassCriterion pass_criterion;
    std::chrono::milliseconds timeout{0};
    std::vector<std::string> owasp_tags;

    bool operator==(const SecurityProbe&) const = default;
};

struct BenchmarkManifest {
    std::string skill_id;
    std::string skill_version;
    std::vector<UtilityTask> utility_tasks;
    std::vector<SecurityProbe> security_probes;
    ParamOverrides param_overrides;
    std::map<std::string, std::string> metadata;

    bool operator==(const BenchmarkManifest&) const = default;
};

struct EvaluabilityPolicy {
    int min_functional_tasks = 5;
};

enum class Severity { error, warning };

struct Finding {
    Severity severity = Severity::error;
    std::string code;
    std::string message;
    std::string location;

    bool operator==(const Finding&) const = default;
};

struct ValidationReport {
    std::vector<Finding> findings;

    bool ok() const {
        for (const auto& f : findings) {
            if (f.severity == Severity::error) return false;
        }
        return true;
    }

    bool operator==(const ValidationReport&) const = default;
};

// Parse or schema failure; `location` names the offending field or document spot.
class ManifestError : public std::runtime_error {
public:
    ManifestError(const std::string& message, std::string location)
        : std::runtime_error(location.empty() ? message : location + ": " + message),
          location_(std::move(location)) {}

    const std::string& location() const { return location_; }

private:
    std::string location_;
};

// Parses the external manifest document (UTF-8 JSON). Throws ManifestError on
// malformed documents, duplicate ids, unknown criterion kinds, or invariant
// violations (empty skill_id, non-positive timeouts, bad criterion payloads).
BenchmarkManifest parse_manifest(std::string_view raw);

// Canonical serialization; parse_manifest(serialize_manifest(m)) == m.
std::string serialize_manifest(const BenchmarkManifest& m);

// Content fingerprint of the canonical serialization, "fnv1a64:<16 hex digits>".
std::string manifest_digest(const BenchmarkManifest& m);

// Policy-level evaluability check. Problems surface as findings, never throws.
ValidationReport validate_evaluability(const BenchmarkManifest& m,
                                       const EvaluabilityPolicy& policy);

// Enum <-> string names used by the wire formats.
std::string_view to_string(TaskGroup g);
std::string_view to_string(ProbeGroup g);
std::string_view to_string(CriterionKind k);
std::string_view to_string(Severity s);
TaskGroup task_group_from_string(std::string_view s);
ProbeGroup probe_group_from_string(std::string_view s);
CriterionKind criterion_kind_from_string(std::string_view s);

}  // namespace skilleval
