#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "skilleval/manifest.hpp"

namespace skilleval {

enum class RunCondition { baseline, with_skill, security_probe };

enum class RunStatus { success, failure, timeout, executor_error };

// The invocation marker contract: a harness that actually invokes the skill
// emits this prefix followed by the skill id as its own output line.
inline constexpr std::string_view kInvocationMarkerPrefix = "SKILLTESTER_INVOKE skill=";

struct InvocationEvidence {
    bool invoked = false;
    std::vector<std::string> marker_lines;

    bool operator==(const InvocationEvidence&) const = default;
};

struct RunRecord {
    std::string ref_id;
    RunCondition condition = RunCondition::baseline;
    RunStatus status = RunStatus::executor_error;
    InvocationEvidence invocation;
    // Executors always fill these (0 when nothing was consumed); absence only
    // arises in hand-built records and is rejected at normalization.
    std::optional<std::uint64_t> tokens;
    std::optional<std::uint64_t> elapsed_ms;
    std::string output;
    std::optional<int> exit_code;
    std::string started_at;

    bool operator==(const RunRecord&) const = default;
};

enum class ExecutorKind { external_command, replay, scripted };

// One entry of the scripted executor's outcome table. `raw_status` uses the
// external result contract vocabulary; "success" entries still go through
// pass-criterion evaluation like any completed run.
struct ScriptedOutcome {
    std::string raw_status = "success";
    std::uint64_t tokens = 0;
    std::uint64_t elapsed_ms = 0;
    std::string output;
    std::optional<int> exit_code;
    // Files written into the run workspace before criterion evaluation,
    // relative path -> content. Lets fixtures drive file_exists criteria.
    std::map<std::string, std::string> files;

    bool operator==(const ScriptedOutcome&) const = default;
};

struct ExecutorBinding {
    ExecutorKind kind = ExecutorKind::scripted;
    // external_command: run via `/bin/sh -c command` with the prompt on stdin
    // and the JSON result contract expected on stdout.
    std::string command;
    std::map<std::string, std::string> env;
    // replay: directory of recorded result-contract files.
    std::filesystem::path replay_dir;
    // scripted: outcome table keyed by "<ref_id>/<condition>".
    std::map<std::string, ScriptedOutcome> outcomes;
};

struct RunOptions {
    int jobs = 1;
    // Pins every started_at to this epoch-millisecond instant.
    std::optional<std::int64_t> frozen_time_ms;
};

// Batch-level failure (unusable workspace, misconfigured binding). Individual
// run failures never throw; they surface as executor_error records.
class ExecutionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Runs every utility task once per condition. Returns 2 * |utility_tasks|
// records in manifest order, baseline before with_skill for each task.
std::vector<RunRecord> run_paired(const BenchmarkManifest& manifest,
                                  const ExecutorBinding& executor,
                                  const std::filesystem::path& workspace,
                                  const RunOptions& options = {});

// Runs every security probe once. Returns |security_probes| records in
// manifest order with condition security_probe.
std::vector<RunRecord> run_security(const BenchmarkManifest& manifest,
                                    const ExecutorBinding& executor,
                                    const std::filesystem::path& workspace,
                                    const RunOptions& options = {});

// Scans captured output for invocation marker lines naming skill_id.
// Baseline runs always report invoked = false.
InvocationEvidence detect_invocation(std::string_view output, std::string_view skill_id,
                                     RunCondition condition);

// Evaluates a pass criterion against a record and its run workspace.
bool evaluate_criterion(const PassCriterion& criterion, const RunRecord& record,
                        const std::filesystem::path& workspace);

// Per-run workspace subdirectory (wiped before each run).
std::filesystem::path run_workspace_dir(const std::filesystem::path& workspace,
                                        std::string_view ref_id, RunCondition condition);

// Key into the scripted outcome table and replay file names.
std::string outcome_key(std::string_view ref_id, RunCondition condition);

// Newline-delimited JSON sink, one record per line with stable field order.
void write_runs_jsonl(const std::vector<RunRecord>& records, std::ostream& out);
std::vector<RunRecord> read_runs_jsonl(std::istream& in);

// Scripted outcome tables are stored as a JSON document {"outcomes": {...}}.
std::map<std::string, ScriptedOutcome> parse_scripted_outcomes(std::string_view raw);

std::string_view to_string(RunCondition c);
std::string_view to_string(RunStatus s);
RunCondition run_condition_from_string(std::string_view s);
RunStatus run_status_from_string(std::string_view s);

}  // namespace skilleval
