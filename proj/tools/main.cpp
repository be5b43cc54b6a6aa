#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "skilleval/cli.hpp"

namespace {

using skilleval::CliConfig;

void add_common_flags(CLI::App* cmd, CliConfig& config, bool needs_manifest, bool needs_out) {
    if (needs_manifest) {
        cmd->add_option("--manifest", config.manifest_path, "Benchmark manifest document")
            ->required();
    }
    if (needs_out) {
        auto* out = cmd->add_option("--out", config.out_dir, "Output directory");
        if (const char* env = std::getenv("SKILLEVAL_OUT"); env != nullptr && *env != '\0') {
            config.out_dir = env;
        } else {
            out->required();
        }
    }
    cmd->add_option("--min-functional-tasks", config.min_functional_tasks,
                    "Evaluability policy: minimum functional task count");
    cmd->add_flag("--frozen-time", config.frozen_time,
                  "Pin all timestamps for byte-stable outputs");
    cmd->add_flag("-v,--verbose", config.verbosity, "Increase verbosity");
}

void add_executor_flags(CLI::App* cmd, CliConfig& config, std::string& executor_name) {
    cmd->add_option("--executor", executor_name, "Executor: external, replay, or scripted")
        ->check(CLI::IsMember({"external", "replay", "scripted"}))
        ->required();
    cmd->add_option("--executor-cmd", config.executor_cmd,
                    "Harness command for the external executor");
    cmd->add_option("--replay-dir", config.replay_dir,
                    "Recorded artifact directory for the replay executor");
    cmd->add_option("--scripted-outcomes", config.scripted_outcomes_path,
                    "Outcome table for the scripted executor");
    cmd->add_option("--jobs", config.jobs, "Concurrent task slots")
        ->check(CLI::PositiveNumber);
}

void add_scoring_flags(CLI::App* cmd, std::vector<std::string>& params_kv, CliConfig& config) {
    cmd->add_option("--params", params_kv,
                    "Scoring parameter overrides as KEY=VALUE (eta, alpha, beta, theta_s, "
                    "epsilon)")
        ->delimiter(',');
    cmd->add_flag("--fail-on-risky", config.fail_on_risky,
                  "Exit nonzero when the security status is Risky");
}

bool parse_params_kv(const std::vector<std::string>& pairs, CliConfig& config,
                     std::ostream& err) {
    for (const auto& kv : pairs) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 >= kv.size()) {
            err << "error: --params expects KEY=VALUE, got '" << kv << "'\n";
            return false;
        }
        try {
            config.param_overrides[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
        } catch (const std::exception&) {
            err << "error: --params value in '" << kv << "' is not a number\n";
            return false;
        }
    }
    return true;
}

// Returns false when the executor flags are inconsistent.
bool resolve_executor(const std::string& name, CliConfig& config, std::ostream& err) {
    if (name == "external") config.executor = skilleval::ExecutorKind::external_command;
    else if (name == "replay") config.executor = skilleval::ExecutorKind::replay;
    else config.executor = skilleval::ExecutorKind::scripted;

    const bool has_cmd = !config.executor_cmd.empty();
    const bool has_replay = !config.replay_dir.empty();
    const bool has_scripted = !config.scripted_outcomes_path.empty();
    bool ok = true;
    if (config.executor == skilleval::ExecutorKind::external_command) {
        ok = has_cmd && !has_replay && !has_scripted;
    } else if (config.executor == skilleval::ExecutorKind::replay) {
        ok = has_replay && !has_cmd && !has_scripted;
    } else {
        ok = has_scripted && !has_cmd && !has_replay;
    }
    if (!ok) {
        err << "error: executor '" << name
            << "' requires exactly its own settings flag (--executor-cmd, --replay-dir, or "
               "--scripted-outcomes)\n";
    }
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Comparative utility and security evaluation for agent skills"};
    app.require_subcommand(1);

    CliConfig config;
    std::string executor_name = "scripted";
    std::vector<std::string> params_kv;

    auto* validate = app.add_subcommand("validate", "Check a manifest for evaluability");
    add_common_flags(validate, config, /*needs_manifest=*/true, /*needs_out=*/false);

    auto* run = app.add_subcommand("run", "Execute paired tasks and security probes");
    add_common_flags(run, config, true, true);
    add_executor_flags(run, config, executor_name);

    auto* score = app.add_subcommand("score", "Score saved evidence into a report");
    add_common_flags(score, config, /*needs_manifest=*/false, /*needs_out=*/true);
    add_scoring_flags(score, params_kv, config);

    auto* evaluate = app.add_subcommand("evaluate", "Validate, run, and score in one pass");
    add_common_flags(evaluate, config, true, true);
    add_executor_flags(evaluate, config, executor_name);
    add_scoring_flags(evaluate, params_kv, config);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return skilleval::kExitError;
    }

    if (!parse_params_kv(params_kv, config, std::cerr)) {
        return skilleval::kExitError;
    }
    if ((run->parsed() || evaluate->parsed()) &&
        !resolve_executor(executor_name, config, std::cerr)) {
        return skilleval::kExitError;
    }

    try {
        if (validate->parsed()) return skilleval::cmd_validate(config, std::cout, std::cerr);
        if (run->parsed()) return skilleval::cmd_run(config, std::cout, std::cerr);
        if (score->parsed()) return skilleval::cmd_score(config, std::cout, std::cerr);
        return skilleval::cmd_evaluate(config, std::cout, std::cerr);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return skilleval::kExitError;
    }
}
