#include "skilleval/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <sstream>

#include <json.hpp>

namespace skilleval {

using ordered_json = nlohmann::ordered_json;

namespace {

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

std::int64_t now_epoch_ms() {
    using namespace std::chrono;
    return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

std::string fmt1(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f", x);
    return buf;
}

ordered_json task_score_to_json(const TaskScore& t) {
    ordered_json j;
    j["task_id"] = t.task_id;
    j["gate"] = t.gate;
    j["value"] = t.value;
    j["score"] = t.score;
    j["case"] = std::string(to_string(t.case_kind));
    if (t.efficiency) j["efficiency"] = *t.efficiency; else j["efficiency"] = nullptr;
    return j;
}

TaskScore task_score_from_json(const ordered_json& j) {
    TaskScore t;
    t.task_id = j.at("task_id").get<std::string>();
    t.gate = j.at("gate").get<int>();
    t.value = j.at("value").get<double>();
    t.score = j.at("score").get<double>();
    t.case_kind = task_case_from_string(j.at("case").get<std::string>());
    if (j.contains("efficiency") && !j.at("efficiency").is_null()) {
        t.efficiency = j.at("efficiency").get<double>();
    }
    return t;
}

}  // namespace

double round_one_decimal(double x) {
    return std::floor(x * 10.0 + 0.5) / 10.0;
}

ScoreReport build_report(const EvidenceSet& evidence, const ScoringParams& params,
                         std::optional<std::int64_t> frozen_time_ms) {
    ScoreReport report;
    report.skill_id = evidence.skill_id;
    report.skill_version = evidence.skill_version;
    report.params = params;
    report.manifest_digest = evidence.manifest_digest;
    report.generated_at =
        format_timestamp(frozen_time_ms ? *frozen_time_ms : now_epoch_ms());

    report.task_breakdown = score_tasks(evidence.tasks, params);
    report.utility_exact = utility_score(report.task_breakdown);
    report.utility = round_one_decimal(report.utility_exact);

    const SecurityResult sec = score_security(evidence.groups, params);
    report.security_exact = sec.overall;
    report.security = round_one_decimal(sec.overall);
    report.status = sec.status;
    for (std::size_t i = 0; i < 3; ++i) {
        const auto& g = evidence.groups[i];
        report.group_breakdown[i] = {g.group, g.passed, g.total, group_score(g)};
    }

    report.notes.push_back(
        "Utility is comparative value relative to a matched no-skill baseline, "
        "not standalone task success.");
    if (report.status != SecurityStatus::Pass) {
        std::string below;
        for (const auto& g : report.group_breakdown) {
            if (g.score < 100.0) {
                if (!below.empty()) below += ", ";
                below += std::string(to_string(g.group)) + " (" + fmt1(g.score) + ")";
            }
        }
        report.notes.push_back("Security group(s) below full pass rate: " + below + ".");
    }
    for (std::size_t i = 0; i < evidence.tasks.size(); ++i) {
        const auto& ev = evidence.tasks[i];
        if (ev.gate == 0 && ev.skill_success == 1) {
            report.notes.push_back("Task '" + ev.task_id +
                                   "' succeeded without invoking the skill; "
                                   "no utility credit was assigned.");
        }
    }
    return report;
}

std::string render_json(const ScoreReport& report) {
    ordered_json doc;
    doc["report_version"] = kReportVersion;
    doc["skill_id"] = report.skill_id;
    doc["skill_version"] = report.skill_version;
    doc["utility"] = report.utility;
    doc["utility_exact"] = report.utility_exact;
    doc["security"] = report.security;
    doc["security_exact"] = report.security_exact;
    doc["status"] = std::string(to_string(report.status));

    ordered_json tasks = ordered_json::array();
    for (const auto& t : report.task_breakdown) tasks.push_back(task_score_to_json(t));
    doc["task_breakdown"] = std::move(tasks);

    ordered_json groups = ordered_json::array();
    for (const auto& g : report.group_breakdown) {
        ordered_json jg;
        jg["group"] = std::string(to_string(g.group));
        jg["passed"] = g.passed;
        jg["total"] = g.total;
        jg["score"] = g.score;
        groups.push_back(std::move(jg));
    }
    doc["group_breakdown"] = std::move(groups);

    ordered_json params;
    params["eta"] = report.params.eta;
    params["alpha"] = report.params.alpha;
    params["beta"] = report.params.beta;
    params["theta_s"] = report.params.theta_s;
    params["epsilon"] = report.params.epsilon;
    doc["params"] = std::move(params);

    doc["manifest_digest"] = report.manifest_digest;
    doc["generated_at"] = report.generated_at;
    doc["notes"] = report.notes;
    return doc.dump(2) + "\n";
}

ScoreReport parse_report(std::string_view raw) {
    ordered_json doc = ordered_json::parse(raw);
    ScoreReport report;
    report.skill_id = doc.at("skill_id").get<std::string>();
    report.skill_version = doc.value("skill_version", std::string());
    report.utility = doc.at("utility").get<double>();
    report.utility_exact = doc.at("utility_exact").get<double>();
    report.security = doc.at("security").get<double>();
    report.security_exact = doc.at("security_exact").get<double>();
    report.status = security_status_from_string(doc.at("status").get<std::string>());
    for (const auto& jt : doc.at("task_breakdown")) {
        report.task_breakdown.push_back(task_score_from_json(jt));
    }
    const auto& groups = doc.at("group_breakdown");
    for (std::size_t i = 0; i < 3 && i < groups.size(); ++i) {
        const auto& jg = groups[i];
        report.group_breakdown[i] = {probe_group_from_string(jg.at("group").get<std::string>()),
                                     jg.at("passed").get<int>(), jg.at("total").get<int>(),
                                     jg.at("score").get<double>()};
    }
    const auto& params = doc.at("params");
    report.params.eta = params.at("eta").get<double>();
    report.params.alpha = params.at("alpha").get<double>();
    report.params.beta = params.at("beta").get<double>();
    report.params.theta_s = params.at("theta_s").get<double>();
    report.params.epsilon = params.at("epsilon").get<double>();
    report.manifest_digest = doc.value("manifest_digest", std::string());
    report.generated_at = doc.value("generated_at", std::string());
    if (doc.contains("notes")) {
        report.notes = doc.at("notes").get<std::vector<std::string>>();
    }
    return report;
}

std::string render_markdown(const ScoreReport& report) {
    std::ostringstream md;
    md << "# Skill evaluation report\n\n";
    md << "- **Skill:** " << report.skill_id;
    if (!report.skill_version.empty()) md << " (version " << report.skill_version << ")";
    md << "\n";
    md << "- **Utility score:** " << fmt1(report.utility) << "\n";
    md << "- **Security score:** " << fmt1(report.security) << "\n";
    md << "- **Security status:** " << to_string(report.status) << "\n\n";

    if (!report.notes.empty()) {
        md << "## Notes\n\n";
        for (const auto& note : report.notes) md << "- " << note << "\n";
        md << "\n";
    }

    if (report.status != SecurityStatus::Pass) {
        md << "## Warnings\n\n";
        for (const auto& g : report.group_breakdown) {
            if (g.score < 100.0) {
                md << "- " << to_string(g.group) << " passed " << g.passed << " of " << g.total
                   << " probes (score " << fmt1(g.score) << ")\n";
            }
        }
        md << "\n";
    }

    md << "## Utility breakdown\n\n";
    md << "| Task | Case | Gate | Value | Score | Efficiency |\n";
    md << "|------|------|------|-------|-------|------------|\n";
    for (const auto& t : report.task_breakdown) {
        md << "| " << t.task_id << " | " << to_string(t.case_kind) << " | " << t.gate << " | "
           << fmt1(t.value) << " | " << fmt1(t.score) << " | "
           << (t.efficiency ? fmt1(*t.efficiency) : std::string("-")) << " |\n";
    }
    md << "\n## Security breakdown\n\n";
    md << "| Group | Passed | Total | Score |\n";
    md << "|-------|--------|-------|-------|\n";
    for (const auto& g : report.group_breakdown) {
        md << "| " << to_string(g.group) << " | " << g.passed << " | " << g.total << " | "
           << fmt1(g.score) << " |\n";
    }
    md << "\n## Parameters\n\n";
    md << "| eta | alpha | beta | theta_s | epsilon |\n";
    md << "|-----|-------|------|---------|---------|\n";
    md << "| " << report.params.eta << " | " << report.params.alpha << " | " << report.params.beta
       << " | " << report.params.theta_s << " | " << report.params.epsilon << " |\n";
    md << "\nManifest digest: `" << report.manifest_digest << "`\n";
    md << "Generated at: " << report.generated_at << "\n";
    return md.str();
}

}  // namespace skilleval
