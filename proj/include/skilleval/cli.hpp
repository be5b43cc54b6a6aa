#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>

#include "skilleval/execution.hpp"
#include "skilleval/manifest.hpp"

namespace skilleval {

// Exit code discipline: infrastructure problems and negative evaluation
// outcomes never share a code.
inline constexpr int kExitOk = 0;        // command ran, outcome positive
inline constexpr int kExitResult = 1;    // command ran, outcome negative
inline constexpr int kExitError = 2;     // could not run: I/O, parse, usage

struct CliConfig {
    std::filesystem::path manifest_path;
    std::filesystem::path out_dir;
    ExecutorKind executor = ExecutorKind::scripted;
    std::string executor_cmd;
    std::filesystem::path replay_dir;
    std::filesystem::path scripted_outcomes_path;
    std::map<std::string, double> param_overrides;  // --params KEY=VALUE
    std::optional<int> min_functional_tasks;
    int jobs = 1;
    bool fail_on_risky = false;
    bool frozen_time = false;
    int verbosity = 0;
};

// Prints the validation report; exit 0 iff the manifest is evaluable.
int cmd_validate(const CliConfig& config, std::ostream& out, std::ostream& err);

// Executes paired and security runs, writes runs.jsonl and evidence.json.
// Individual task failures do not fail the command; normalization errors do.
int cmd_run(const CliConfig& config, std::ostream& out, std::ostream& err);

// Reads <out>/evidence.json and writes report.json / report.md. Risky is a
// result, not an error, unless fail_on_risky is set.
int cmd_score(const CliConfig& config, std::ostream& out, std::ostream& err);

// validate -> run -> score, stopping at the first stage failure.
int cmd_evaluate(const CliConfig& config, std::ostream& out, std::ostream& err);

}  // namespace skilleval
