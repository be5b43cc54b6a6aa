#include "skilleval/execution.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <cctype>
#include <cerrno>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <ctime>
#include <fstream>
#include <mutex>
#include <regex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "skilleval/fnv.hpp"

extern char** environ;

namespace skilleval {

using ordered_json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

std::int64_t now_epoch_ms() {
    using namespace std::chrono;
    return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

std::string format_timestamp(std::int64_t epoch_ms) {
    std::time_t secs = static_cast<std::time_t>(epoch_ms / 1000);
    int ms = static_cast<int>(epoch_ms % 1000);
    std::tm tm{};
    gmtime_r(&secs, &tm);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900,
                  tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec, ms);
    return buf;
}

// Filename-safe form of an opaque id. Ids that needed rewriting get a short
// content-hash suffix so distinct ids cannot share a run directory.
std::string sanitize_component(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char ch : s) {
        const bool ok = std::isalnum(static_cast<unsigned char>(ch)) || ch == '.' || ch == '_' ||
                        ch == '-';
        out += ok ? ch : '_';
    }
    if (out != s) {
        char suffix[16];
        std::snprintf(suffix, sizeof(suffix), "-%08x",
                      static_cast<unsigned>(fnv1a64(s) & 0xffffffffu));
        out += suffix;
    }
    if (out.empty()) out = "_";
    return out;
}

// Raw executor outcome before the status rules are applied.
struct RawResult {
    enum class Kind { completed_ok, completed_failed, timed_out, error };
    Kind kind = Kind::error;
    std::optional<std::uint64_t> tokens;
    std::optional<std::uint64_t> elapsed_ms;
    std::string output;
    std::optional<int> exit_code;
    std::string error;
};

struct RunContext {
    std::string ref_id;
    RunCondition condition = RunCondition::baseline;
    std::string skill_id;
    const std::string* prompt = nullptr;
    const PassCriterion* criterion = nullptr;
    std::uint64_t timeout_ms = 0;
};

RawResult contract_violation(std::string why, std::string raw_output) {
    RawResult r;
    r.kind = RawResult::Kind::error;
    r.error = std::move(why);
    r.output = std::move(raw_output);
    return r;
}

// Parses the external-command result contract (one JSON object on stdout).
RawResult parse_result_contract(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const ordered_json::parse_error& e) {
        return contract_violation(std::string("result contract is not valid JSON: ") + e.what(),
                                  text);
    }
    if (!j.is_object()) {
        return contract_violation("result contract must be a JSON object", text);
    }
    if (!j.contains("status") || !j["status"].is_string()) {
        return contract_violation("result contract missing string field 'status'", text);
    }
    const std::string status = j["status"].get<std::string>();
    RawResult r;
    if (status == "success") {
        r.kind = RawResult::Kind::completed_ok;
    } else if (status == "failure") {
        r.kind = RawResult::Kind::completed_failed;
    } else if (status == "timeout") {
        r.kind = RawResult::Kind::timed_out;
    } else {
        return contract_violation("result contract has unknown status '" + status + "'", text);
    }
    for (const char* key : {"tokens", "elapsed_ms"}) {
        if (!j.contains(key) || !j[key].is_number_integer() || j[key].get<std::int64_t>() < 0) {
            return contract_violation(
                std::string("result contract missing non-negative integer field '") + key + "'",
                text);
        }
    }
    r.tokens = j["tokens"].get<std::uint64_t>();
    r.elapsed_ms = j["elapsed_ms"].get<std::uint64_t>();
    if (!j.contains("output") || !j["output"].is_string()) {
        return contract_violation("result contract missing string field 'output'", text);
    }
    r.output = j["output"].get<std::string>();
    if (j.contains("exit_code") && !j["exit_code"].is_null()) {
        if (!j["exit_code"].is_number_integer()) {
            return contract_violation("result contract field 'exit_code' must be an integer",
                                      text);
        }
        r.exit_code = j["exit_code"].get<int>();
    }
    return r;
}

std::once_flag g_sigpipe_once;

void close_fd(int& fd) {
    if (fd >= 0) {
        ::close(fd);
        fd = -1;
    }
}

// The child runs in its own process group so a timeout kill also reaps
// whatever the harness command spawned underneath itself.
void kill_run_group(pid_t pid) {
    ::kill(-pid, SIGKILL);
    ::kill(pid, SIGKILL);
}

RawResult run_external(const ExecutorBinding& binding, const RunContext& ctx,
                       const fs::path& run_dir) {
    std::call_once(g_sigpipe_once, [] { ::signal(SIGPIPE, SIG_IGN); });

    // O_CLOEXEC matters under --jobs: children forked by sibling threads must
    // not inherit this run's pipe ends, or stdin EOF never arrives.
    int in_pipe[2] = {-1, -1};
    int out_pipe[2] = {-1, -1};
    if (::pipe2(in_pipe, O_CLOEXEC) != 0 || ::pipe2(out_pipe, O_CLOEXEC) != 0) {
        close_fd(in_pipe[0]);
        close_fd(in_pipe[1]);
        return contract_violation(std::string("pipe2() failed: ") + std::strerror(errno), "");
    }

    // Assemble argv/envp before fork; the child only calls async-signal-safe
    // functions between fork and execve.
    std::map<std::string, std::string> env;
    for (char** e = environ; *e != nullptr; ++e) {
        const char* eq = std::strchr(*e, '=');
        if (eq == nullptr) continue;
        env[std::string(*e, static_cast<std::size_t>(eq - *e))] = eq + 1;
    }
    for (const auto& [k, v] : binding.env) env[k] = v;
    env["SKILLEVAL_SKILL_ID"] = ctx.skill_id;
    env["SKILLEVAL_REF_ID"] = ctx.ref_id;
    env["SKILLEVAL_CONDITION"] = std::string(to_string(ctx.condition));
    env["SKILLEVAL_WORKSPACE"] = run_dir.string();
    env["SKILLEVAL_TIMEOUT_MS"] = std::to_string(ctx.timeout_ms);

    std::vector<std::string> env_storage;
    env_storage.reserve(env.size());
    for (const auto& [k, v] : env) env_storage.push_back(k + "=" + v);
    std::vector<char*> envp;
    envp.reserve(env_storage.size() + 1);
    for (auto& kv : env_storage) envp.push_back(kv.data());
    envp.push_back(nullptr);

    std::string command = binding.command;
    std::string dir = run_dir.string();
    char arg_sh[] = "sh";
    char arg_c[] = "-c";
    char* argv[] = {arg_sh, arg_c, command.data(), nullptr};

    const auto start = Clock::now();
    const auto deadline = start + std::chrono::milliseconds(ctx.timeout_ms);

    pid_t pid = ::fork();
    if (pid < 0) {
        for (int* fd : {&in_pipe[0], &in_pipe[1], &out_pipe[0], &out_pipe[1]}) close_fd(*fd);
        return contract_violation(std::string("fork() failed: ") + std::strerror(errno), "");
    }
    if (pid == 0) {
        ::setpgid(0, 0);
        ::dup2(in_pipe[0], STDIN_FILENO);
        ::dup2(out_pipe[1], STDOUT_FILENO);
        for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) ::close(fd);
        if (::chdir(dir.c_str()) != 0) _exit(127);
        ::execve("/bin/sh", argv, envp.data());
        _exit(127);
    }

    ::setpgid(pid, pid);  // mirror of the child's call, whichever runs first wins
    close_fd(in_pipe[0]);
    close_fd(out_pipe[1]);
    ::fcntl(in_pipe[1], F_SETFL, O_NONBLOCK);

    const std::string& prompt = *ctx.prompt;
    std::size_t prompt_off = 0;
    std::string captured;
    bool timed_out = false;

    while (out_pipe[0] >= 0) {
        const auto now = Clock::now();
        if (now >= deadline) {
            kill_run_group(pid);
            timed_out = true;
            break;
        }
        const int wait_ms = static_cast<int>(std::min<std::int64_t>(
            std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count() + 1,
            1000));

        struct pollfd fds[2];
        int nfds = 0;
        fds[nfds].fd = out_pipe[0];
        fds[nfds].events = POLLIN;
        fds[nfds].revents = 0;
        ++nfds;
        if (in_pipe[1] >= 0) {
            fds[nfds].fd = in_pipe[1];
            fds[nfds].events = POLLOUT;
            fds[nfds].revents = 0;
            ++nfds;
        }
        int rc = ::poll(fds, nfds, wait_ms);
        if (rc < 0) {
            if (errno == EINTR) continue;
            kill_run_group(pid);
            break;
        }
        if (rc == 0) continue;

        if (fds[0].revents & (POLLIN | POLLHUP | POLLERR)) {
            char buf[4096];
            ssize_t n = ::read(out_pipe[0], buf, sizeof(buf));
            if (n > 0) {
                captured.append(buf, static_cast<std::size_t>(n));
            } else if (n == 0 || (n < 0 && errno != EAGAIN && errno != EINTR)) {
                close_fd(out_pipe[0]);
            }
        }
        if (nfds > 1 && (fds[1].revents & (POLLOUT | POLLERR | POLLHUP))) {
            if (fds[1].revents & (POLLERR | POLLHUP)) {
                close_fd(in_pipe[1]);
            } else {
                ssize_t n = ::write(in_pipe[1], prompt.data() + prompt_off,
                                    prompt.size() - prompt_off);
                if (n > 0) prompt_off += static_cast<std::size_t>(n);
                if ((n < 0 && errno != EAGAIN && errno != EINTR) || prompt_off >= prompt.size()) {
                    close_fd(in_pipe[1]);
                }
            }
        }
    }
    close_fd(in_pipe[1]);
    close_fd(out_pipe[0]);

    int status = 0;
    if (timed_out) {
        ::waitpid(pid, &status, 0);
    } else {
        // Output is closed; give the child until the deadline to exit.
        while (true) {
            pid_t r = ::waitpid(pid, &status, WNOHANG);
            if (r == pid || r < 0) break;
            if (Clock::now() >= deadline) {
                kill_run_group(pid);
                ::waitpid(pid, &status, 0);
                timed_out = true;
                break;
            }
            std::this_thread::sleep_for(std::chrono::milliseconds(2));
        }
    }

    const std::uint64_t measured_ms = static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count());

    if (timed_out) {
        RawResult r;
        r.kind = RawResult::Kind::timed_out;
        r.tokens = 0;
        r.elapsed_ms = measured_ms;
        r.output = captured;
        return r;
    }

    RawResult r = parse_result_contract(captured);
    if (r.kind == RawResult::Kind::error && !r.elapsed_ms) {
        r.elapsed_ms = measured_ms;
        r.tokens = 0;
    }
    return r;
}

fs::path replay_artifact_path(const ExecutorBinding& binding, std::string_view ref_id,
                              RunCondition condition) {
    return binding.replay_dir / (sanitize_component(ref_id) + "." +
                                 std::string(to_string(condition)) + ".json");
}

RawResult run_replay(const ExecutorBinding& binding, const RunContext& ctx) {
    const fs::path file = replay_artifact_path(binding, ctx.ref_id, ctx.condition);
    std::ifstream in(file, std::ios::binary);
    if (!in) {
        return contract_violation("replay artifact not found: " + file.string(), "");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_result_contract(ss.str());
}

RawResult run_scripted(const ExecutorBinding& binding, const RunContext& ctx,
                       const fs::path& run_dir) {
    auto it = binding.outcomes.find(outcome_key(ctx.ref_id, ctx.condition));
    if (it == binding.outcomes.end()) {
        return contract_violation(
            "no scripted outcome for '" + outcome_key(ctx.ref_id, ctx.condition) + "'", "");
    }
    const ScriptedOutcome& o = it->second;
    for (const auto& [rel, content] : o.files) {
        const fs::path target = run_dir / rel;
        fs::create_directories(target.parent_path());
        std::ofstream f(target, std::ios::binary);
        f << content;
    }
    RawResult r;
    r.tokens = o.tokens;
    r.elapsed_ms = o.elapsed_ms;
    r.output = o.output;
    r.exit_code = o.exit_code;
    if (o.raw_status == "success") {
        r.kind = RawResult::Kind::completed_ok;
    } else if (o.raw_status == "failure") {
        r.kind = RawResult::Kind::completed_failed;
    } else if (o.raw_status == "timeout") {
        r.kind = RawResult::Kind::timed_out;
    } else {
        r.kind = RawResult::Kind::error;
        r.error = "scripted executor_error";
    }
    return r;
}

// Applies the status rules: a run that exceeds its timeout is a timeout
// regardless of what the executor reported, and completed runs get their
// final success/failure from pass-criterion evaluation.
RunRecord finalize_record(const RunContext& ctx, RawResult raw, const fs::path& run_dir,
                          std::string started_at) {
    RunRecord rec;
    rec.ref_id = ctx.ref_id;
    rec.condition = ctx.condition;
    rec.started_at = std::move(started_at);
    rec.tokens = raw.tokens.value_or(0);
    rec.output = raw.output;
    rec.exit_code = raw.exit_code;
    if (!raw.error.empty()) {
        rec.output = "[executor error] " + raw.error + (raw.output.empty() ? "" : "\n") +
                     raw.output;
    }

    switch (raw.kind) {
        case RawResult::Kind::error:
            rec.status = RunStatus::executor_error;
            rec.elapsed_ms = raw.elapsed_ms.value_or(0);
            break;
        case RawResult::Kind::timed_out:
            rec.status = RunStatus::timeout;
            rec.elapsed_ms = std::max(raw.elapsed_ms.value_or(ctx.timeout_ms), ctx.timeout_ms);
            break;
        case RawResult::Kind::completed_ok:
        case RawResult::Kind::completed_failed: {
            const std::uint64_t elapsed = raw.elapsed_ms.value_or(0);
            rec.elapsed_ms = elapsed;
            if (elapsed > ctx.timeout_ms) {
                rec.status = RunStatus::timeout;
            } else if (raw.kind == RawResult::Kind::completed_failed) {
                rec.status = RunStatus::failure;
            } else {
                rec.status = evaluate_criterion(*ctx.criterion, rec, run_dir)
                                 ? RunStatus::success
                                 : RunStatus::failure;
            }
            break;
        }
    }
    rec.invocation = detect_invocation(rec.output, ctx.skill_id, ctx.condition);
    return rec;
}

RunRecord execute_one(const BenchmarkManifest& manifest, const ExecutorBinding& executor,
                      const fs::path& workspace, const RunOptions& options,
                      const RunContext& ctx) {
    const std::string started_at =
        format_timestamp(options.frozen_time_ms ? *options.frozen_time_ms : now_epoch_ms());
    (void)manifest;
    try {
        const fs::path run_dir = run_workspace_dir(workspace, ctx.ref_id, ctx.condition);
        std::error_code ec;
        fs::remove_all(run_dir, ec);
        fs::create_directories(run_dir);

        RawResult raw;
        switch (executor.kind) {
            case ExecutorKind::external_command:
                raw = run_external(executor, ctx, run_dir);
                break;
            case ExecutorKind::replay:
                raw = run_replay(executor, ctx);
                break;
            case ExecutorKind::scripted:
                raw = run_scripted(executor, ctx, run_dir);
                break;
        }
        return finalize_record(ctx, std::move(raw), run_dir, started_at);
    } catch (const std::exception& e) {
        RunRecord rec;
        rec.ref_id = ctx.ref_id;
        rec.condition = ctx.condition;
        rec.status = RunStatus::executor_error;
        rec.tokens = 0;
        rec.elapsed_ms = 0;
        rec.output = std::string("[executor error] ") + e.what();
        rec.started_at = started_at;
        return rec;
    }
}

void check_workspace(const fs::path& workspace) {
    std::error_code ec;
    fs::create_directories(workspace, ec);
    const fs::path probe = workspace / ".skilleval_write_probe";
    {
        std::ofstream f(probe, std::ios::binary);
        if (!f) {
            throw ExecutionError("workspace is not writable: " + workspace.string());
        }
    }
    fs::remove(probe, ec);
}

void check_binding(const ExecutorBinding& executor) {
    switch (executor.kind) {
        case ExecutorKind::external_command:
            if (executor.command.empty()) {
                throw ExecutionError("external_command executor requires a command");
            }
            break;
        case ExecutorKind::replay:
            if (executor.replay_dir.empty() || !fs::is_directory(executor.replay_dir)) {
                throw ExecutionError("replay executor requires an existing artifact directory");
            }
            break;
        case ExecutorKind::scripted:
            break;
    }
}

std::vector<RunRecord> run_items(const BenchmarkManifest& manifest,
                                 const ExecutorBinding& executor, const fs::path& workspace,
                                 const RunOptions& options,
                                 const std::vector<RunContext>& items) {
    check_binding(executor);
    check_workspace(workspace);
    if (executor.kind == ExecutorKind::replay) {
        // Replay is only meaningful over a complete artifact set; a gap is a
        // configuration error, not a run failure.
        for (const auto& ctx : items) {
            const fs::path file = replay_artifact_path(executor, ctx.ref_id, ctx.condition);
            if (!fs::exists(file)) {
                throw ExecutionError("replay artifact missing: " + file.string());
            }
        }
    }

    std::vector<RunRecord> records(items.size());
    const int jobs = std::max(1, options.jobs);
    if (jobs <= 1 || items.size() <= 1) {
        for (std::size_t i = 0; i < items.size(); ++i) {
            records[i] = execute_one(manifest, executor, workspace, options, items[i]);
        }
        return records;
    }

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= items.size()) break;
            records[i] = execute_one(manifest, executor, workspace, options, items[i]);
        }
    };
    std::vector<std::thread> pool;
    const std::size_t n_threads = std::min<std::size_t>(static_cast<std::size_t>(jobs),
                                                        items.size());
    pool.reserve(n_threads);
    for (std::size_t i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    return records;
}

ordered_json record_to_json(const RunRecord& r) {
    ordered_json j;
    j["ref_id"] = r.ref_id;
    j["condition"] = std::string(to_string(r.condition));
    j["status"] = std::string(to_string(r.status));
    ordered_json inv;
    inv["invoked"] = r.invocation.invoked;
    inv["marker_lines"] = r.invocation.marker_lines;
    j["invocation"] = std::move(inv);
    if (r.tokens) j["tokens"] = *r.tokens; else j["tokens"] = nullptr;
    if (r.elapsed_ms) j["elapsed"] = *r.elapsed_ms; else j["elapsed"] = nullptr;
    j["output"] = r.output;
    if (r.exit_code) j["exit_code"] = *r.exit_code; else j["exit_code"] = nullptr;
    j["started_at"] = r.started_at;
    return j;
}

RunRecord record_from_json(const ordered_json& j) {
    RunRecord r;
    r.ref_id = j.at("ref_id").get<std::string>();
    r.condition = run_condition_from_string(j.at("condition").get<std::string>());
    r.status = run_status_from_string(j.at("status").get<std::string>());
    if (j.contains("invocation")) {
        const auto& inv = j.at("invocation");
        r.invocation.invoked = inv.value("invoked", false);
        if (inv.contains("marker_lines")) {
            r.invocation.marker_lines = inv.at("marker_lines").get<std::vector<std::string>>();
        }
    }
    if (j.contains("tokens") && !j.at("tokens").is_null()) {
        r.tokens = j.at("tokens").get<std::uint64_t>();
    }
    if (j.contains("elapsed") && !j.at("elapsed").is_null()) {
        r.elapsed_ms = j.at("elapsed").get<std::uint64_t>();
    }
    r.output = j.value("output", std::string());
    if (j.contains("exit_code") && !j.at("exit_code").is_null()) {
        r.exit_code = j.at("exit_code").get<int>();
    }
    r.started_at = j.value("started_at", std::string());
    return r;
}

}  // namespace

std::string_view to_string(RunCondition c) {
    switch (c) {
        case RunCondition::baseline: return "baseline";
        case RunCondition::with_skill: return "with_skill";
        case RunCondition::security_probe: return "security_probe";
    }
    return "?";
}

std::string_view to_string(RunStatus s) {
    switch (s) {
        case RunStatus::success: return "success";
        case RunStatus::failure: return "failure";
        case RunStatus::timeout: return "timeout";
        case RunStatus::executor_error: return "executor_error";
    }
    return "?";
}

RunCondition run_condition_from_string(std::string_view s) {
    if (s == "baseline") return RunCondition::baseline;
    if (s == "with_skill") return RunCondition::with_skill;
    if (s == "security_probe") return RunCondition::security_probe;
    throw ExecutionError("unknown run condition '" + std::string(s) + "'");
}

RunStatus run_status_from_string(std::string_view s) {
    if (s == "success") return RunStatus::success;
    if (s == "failure") return RunStatus::failure;
    if (s == "timeout") return RunStatus::timeout;
    if (s == "executor_error") return RunStatus::executor_error;
    throw ExecutionError("unknown run status '" + std::string(s) + "'");
}

std::string outcome_key(std::string_view ref_id, RunCondition condition) {
    return std::string(ref_id) + "/" + std::string(to_string(condition));
}

std::filesystem::path run_workspace_dir(const fs::path& workspace, std::string_view ref_id,
                                        RunCondition condition) {
    return workspace / sanitize_component(ref_id) / std::string(to_string(condition));
}

InvocationEvidence detect_invocation(std::string_view output, std::string_view skill_id,
                                     RunCondition condition) {
    InvocationEvidence ev;
    if (condition == RunCondition::baseline) return ev;

    const std::string marker = std::string(kInvocationMarkerPrefix) + std::string(skill_id);
    std::size_t pos = 0;
    while (pos <= output.size()) {
        std::size_t end = output.find('\n', pos);
        if (end == std::string_view::npos) end = output.size();
        std::string_view line = output.substr(pos, end - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line == marker) ev.marker_lines.emplace_back(line);
        if (end == output.size()) break;
        pos = end + 1;
    }
    ev.invoked = !ev.marker_lines.empty();
    return ev;
}

bool evaluate_criterion(const PassCriterion& criterion, const RunRecord& record,
                        const fs::path& workspace) {
    switch (criterion.kind) {
        case CriterionKind::exact_output:
            return record.output == criterion.text;
        case CriterionKind::substring_present:
            return record.output.find(criterion.text) != std::string::npos;
        case CriterionKind::substring_absent:
            return record.output.find(criterion.text) == std::string::npos;
        case CriterionKind::regex_match:
            return std::regex_search(record.output, std::regex(criterion.text));
        case CriterionKind::regex_absent:
            return !std::regex_search(record.output, std::regex(criterion.text));
        case CriterionKind::exit_code_equals:
            return record.exit_code.has_value() && *record.exit_code == criterion.code;
        case CriterionKind::file_exists:
            return fs::exists(workspace / criterion.text);
        case CriterionKind::conjunction:
            for (const auto& sub : criterion.all) {
                if (!evaluate_criterion(sub, record, workspace)) return false;
            }
            return true;
    }
    return false;
}

std::vector<RunRecord> run_paired(const BenchmarkManifest& manifest,
                                  const ExecutorBinding& executor, const fs::path& workspace,
                                  const RunOptions& options) {
    std::vector<RunContext> items;
    items.reserve(manifest.utility_tasks.size() * 2);
    for (const auto& task : manifest.utility_tasks) {
        for (RunCondition cond : {RunCondition::baseline, RunCondition::with_skill}) {
            RunContext ctx;
            ctx.ref_id = task.task_id;
            ctx.condition = cond;
            ctx.skill_id = manifest.skill_id;
            ctx.prompt = &task.prompt;
            ctx.criterion = &task.pass_criterion;
            ctx.timeout_ms = static_cast<std::uint64_t>(task.timeout.count());
            items.push_back(ctx);
        }
    }
    return run_items(manifest, executor, workspace, options, items);
}

std::vector<RunRecord> run_security(const BenchmarkManifest& manifest,
                                    const ExecutorBinding& executor, const fs::path& workspace,
                                    const RunOptions& options) {
    std::vector<RunContext> items;
    items.reserve(manifest.security_probes.size());
    for (const auto& probe : manifest.security_probes) {
        RunContext ctx;
        ctx.ref_id = probe.probe_id;
        ctx.condition = RunCondition::security_probe;
        ctx.skill_id = manifest.skill_id;
        ctx.prompt = &probe.prompt;
        ctx.criterion = &probe.pass_criterion;
        ctx.timeout_ms = static_cast<std::uint64_t>(probe.timeout.count());
        items.push_back(ctx);
    }
    return run_items(manifest, executor, workspace, options, items);
}

void write_runs_jsonl(const std::vector<RunRecord>& records, std::ostream& out) {
    for (const auto& r : records) {
        out << record_to_json(r).dump() << '\n';
    }
}

std::vector<RunRecord> read_runs_jsonl(std::istream& in) {
    std::vector<RunRecord> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            records.push_back(record_from_json(ordered_json::parse(line)));
        } catch (const std::exception& e) {
            throw ExecutionError("runs.jsonl line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return records;
}

std::map<std::string, ScriptedOutcome> parse_scripted_outcomes(std::string_view raw) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(raw);
    } catch (const ordered_json::parse_error& e) {
        throw ExecutionError(std::string("scripted outcome table is not valid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("outcomes") || !doc["outcomes"].is_object()) {
        throw ExecutionError("scripted outcome table must be {\"outcomes\": {...}}");
    }
    std::map<std::string, ScriptedOutcome> table;
    for (const auto& [key, j] : doc["outcomes"].items()) {
        if (!j.is_object()) {
            throw ExecutionError("scripted outcome '" + key + "' must be an object");
        }
        ScriptedOutcome o;
        o.raw_status = j.value("status", std::string("success"));
        if (o.raw_status != "success" && o.raw_status != "failure" && o.raw_status != "timeout" &&
            o.raw_status != "executor_error") {
            throw ExecutionError("scripted outcome '" + key + "' has unknown status '" +
                                 o.raw_status + "'");
        }
        o.tokens = j.value("tokens", 0ull);
        o.elapsed_ms = j.value("elapsed_ms", 0ull);
        o.output = j.value("output", std::string());
        if (j.contains("exit_code") && !j["exit_code"].is_null()) {
            o.exit_code = j["exit_code"].get<int>();
        }
        if (j.contains("files")) {
            const auto& files = j["files"];
            if (!files.is_object()) {
                throw ExecutionError("scripted outcome '" + key + "' files must be an object");
            }
            for (const auto& [rel, content] : files.items()) {
                if (!content.is_string()) {
                    throw ExecutionError("scripted outcome '" + key +
                                         "' file contents must be strings");
                }
                o.files[rel] = content.get<std::string>();
            }
        }
        table[key] = std::move(o);
    }
    return table;
}

}  // namespace skilleval
