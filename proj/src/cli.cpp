#include "skilleval/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "skilleval/evidence.hpp"
#include "skilleval/report.hpp"
#include "skilleval/scoring.hpp"

namespace skilleval {

namespace fs = std::filesystem;

namespace {

// started_at / generated_at pin for --frozen-time golden runs.
constexpr std::int64_t kFrozenEpochMs = 0;

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot read file: " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write file: " + path.string());
    }
    out << content;
}

BenchmarkManifest load_manifest(const CliConfig& config) {
    return parse_manifest(read_file(config.manifest_path));
}

EvaluabilityPolicy policy_from(const CliConfig& config) {
    EvaluabilityPolicy policy;
    if (config.min_functional_tasks) policy.min_functional_tasks = *config.min_functional_tasks;
    return policy;
}

ExecutorBinding binding_from(const CliConfig& config) {
    ExecutorBinding binding;
    binding.kind = config.executor;
    switch (config.executor) {
        case ExecutorKind::external_command:
            binding.command = config.executor_cmd;
            break;
        case ExecutorKind::replay:
            binding.replay_dir = config.replay_dir;
            break;
        case ExecutorKind::scripted:
            if (config.scripted_outcomes_path.empty()) {
                throw std::runtime_error("scripted executor requires --scripted-outcomes");
            }
            binding.outcomes = parse_scripted_outcomes(read_file(config.scripted_outcomes_path));
            break;
    }
    return binding;
}

ParamOverrides cli_overrides(const CliConfig& config) {
    ParamOverrides ov;
    for (const auto& [key, value] : config.param_overrides) {
        if (key == "eta") ov.eta = value;
        else if (key == "alpha") ov.alpha = value;
        else if (key == "beta") ov.beta = value;
        else if (key == "theta_s") ov.theta_s = value;
        else if (key == "epsilon") ov.epsilon = value;
        else throw std::runtime_error("unknown scoring parameter '" + key + "'");
    }
    return ov;
}

void print_findings(const ValidationReport& report, std::ostream& out) {
    for (const auto& f : report.findings) {
        out << to_string(f.severity) << " [" << f.code << "] " << f.location << ": " << f.message
            << "\n";
    }
    out << (report.ok() ? "manifest is evaluable" : "manifest is NOT evaluable") << "\n";
}

int score_from_evidence(const CliConfig& config, const EvidenceSet& evidence, std::ostream& out,
                        std::ostream& err) {
    ScoringParams params;
    try {
        params = apply_overrides(evidence.params, cli_overrides(config));
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    }
    std::optional<std::int64_t> frozen;
    if (config.frozen_time) frozen = kFrozenEpochMs;

    ScoreReport report;
    try {
        report = build_report(evidence, params, frozen);
    } catch (const std::exception& e) {
        err << "error: scoring failed: " << e.what() << "\n";
        return kExitResult;
    }
    try {
        write_file(config.out_dir / "report.json", render_json(report));
        write_file(config.out_dir / "report.md", render_markdown(report));
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    }
    char headline[96];
    std::snprintf(headline, sizeof(headline), "utility %.1f security %.1f status %s",
                  report.utility, report.security,
                  std::string(to_string(report.status)).c_str());
    out << headline << "\n";
    if (config.fail_on_risky && report.status == SecurityStatus::Risky) {
        err << "security status is Risky\n";
        return kExitResult;
    }
    return kExitOk;
}

}  // namespace

int cmd_validate(const CliConfig& config, std::ostream& out, std::ostream& err) {
    BenchmarkManifest manifest;
    try {
        manifest = load_manifest(config);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    }
    const ValidationReport report = validate_evaluability(manifest, policy_from(config));
    print_findings(report, out);
    return report.ok() ? kExitOk : kExitResult;
}

int cmd_run(const CliConfig& config, std::ostream& out, std::ostream& err) {
    BenchmarkManifest manifest;
    ExecutorBinding binding;
    try {
        manifest = load_manifest(config);
        binding = binding_from(config);
        fs::create_directories(config.out_dir);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    }

    const ValidationReport validation = validate_evaluability(manifest, policy_from(config));
    if (!validation.ok()) {
        print_findings(validation, err);
        return kExitResult;
    }

    RunOptions options;
    options.jobs = config.jobs;
    if (config.frozen_time) options.frozen_time_ms = kFrozenEpochMs;

    std::vector<RunRecord> records;
    try {
        const fs::path workspace = config.out_dir / "workspace";
        records = run_paired(manifest, binding, workspace, options);
        auto probe_records = run_security(manifest, binding, workspace, options);
        records.insert(records.end(), probe_records.begin(), probe_records.end());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    }

    if (config.verbosity > 0) {
        for (const auto& rec : records) {
            out << to_string(rec.condition) << " " << rec.ref_id << ": "
                << to_string(rec.status) << "\n";
        }
    }

    try {
        std::ostringstream jsonl;
        write_runs_jsonl(records, jsonl);
        write_file(config.out_dir / "runs.jsonl", jsonl.str());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    }

    EvidenceSet evidence;
    try {
        evidence = normalize(records, manifest);
    } catch (const std::exception& e) {
        err << "error: normalization failed: " << e.what() << "\n";
        return kExitResult;
    }
    try {
        write_file(config.out_dir / "evidence.json", serialize_evidence(evidence));
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    }
    out << records.size() << " runs recorded (" << manifest.utility_tasks.size()
        << " tasks x 2 conditions + " << manifest.security_probes.size() << " probes)\n";
    return kExitOk;
}

int cmd_score(const CliConfig& config, std::ostream& out, std::ostream& err) {
    EvidenceSet evidence;
    try {
        evidence = parse_evidence(read_file(config.out_dir / "evidence.json"));
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    }
    return score_from_evidence(config, evidence, out, err);
}

int cmd_evaluate(const CliConfig& config, std::ostream& out, std::ostream& err) {
    const int validate_rc = cmd_validate(config, out, err);
    if (validate_rc != kExitOk) return validate_rc;
    const int run_rc = cmd_run(config, out, err);
    if (run_rc != kExitOk) return run_rc;
    return cmd_score(config, out, err);
}

}  // namespace skilleval
