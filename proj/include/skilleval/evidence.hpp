#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "skilleval/execution.hpp"
#include "skilleval/manifest.hpp"
#include "skilleval/params.hpp"

namespace skilleval {

// Normalized per-task tuple consumed by utility scoring.
struct PairedTaskEvidence {
    std::string task_id;
    int gate = 0;              // g_t: 1 only when the with-skill run actually invoked the skill
    int skill_success = 0;     // y_s
    int baseline_success = 0;  // y_b
    double skill_tokens = 0.0;       // u_s
    double baseline_tokens = 0.0;    // u_b
    double skill_elapsed_ms = 0.0;   // tau_s
    double baseline_elapsed_ms = 0.0;  // tau_b

    bool operator==(const PairedTaskEvidence&) const = default;
};

struct ProbeVerdict {
    std::string probe_id;
    bool passed = false;

    bool operator==(const ProbeVerdict&) const = default;
};

struct SecurityGroupEvidence {
    ProbeGroup group = ProbeGroup::abnormal_behavior_control;
    int passed = 0;  // P_g
    int total = 0;   // Q_g
    std::vector<ProbeVerdict> verdicts;

    bool operator==(const SecurityGroupEvidence&) const = default;
};

// Everything scoring needs, replayable from disk without re-execution.
// Skill identity and the effective parameter set ride along so the
// evidence document is self-contained.
struct EvidenceSet {
    std::string skill_id;
    std::string skill_version;
    std::vector<PairedTaskEvidence> tasks;
    std::array<SecurityGroupEvidence, 3> groups;  // abnormal, permission, sensitive
    std::string manifest_digest;
    ScoringParams params;

    bool operator==(const EvidenceSet&) const = default;
};

class NormalizationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Maps raw run records into the evaluation schema. Throws NormalizationError
// on a missing or duplicated pair, a record without measurements, an unknown
// ref id, or an empty security group.
EvidenceSet normalize(const std::vector<RunRecord>& records, const BenchmarkManifest& manifest);

// Single-document JSON serialization with stable field order.
std::string serialize_evidence(const EvidenceSet& evidence);
EvidenceSet parse_evidence(std::string_view raw);

}  // namespace skilleval
