#include "skilleval/manifest.hpp"

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <regex>
#include <set>

#include <json.hpp>

#include "skilleval/fnv.hpp"

namespace skilleval {

using ordered_json = nlohmann::ordered_json;

namespace {

std::string idx_loc(std::string_view field, std::size_t i, std::string_view sub = {}) {
    std::string loc = std::string(field) + "[" + std::to_string(i) + "]";
    if (!sub.empty()) loc += "." + std::string(sub);
    return loc;
}

const ordered_json& require_field(const ordered_json& obj, const char* key,
                                  const std::string& loc) {
    auto it = obj.find(key);
    if (it == obj.end()) {
        throw ManifestError("missing required field '" + std::string(key) + "'", loc);
    }
    return *it;
}

std::string require_string(const ordered_json& obj, const char* key, const std::string& loc) {
    const auto& v = require_field(obj, key, loc);
    if (!v.is_string()) {
        throw ManifestError("field '" + std::string(key) + "' must be a string", loc);
    }
    return v.get<std::string>();
}

std::int64_t require_int(const ordered_json& obj, const char* key, const std::string& loc) {
    const auto& v = require_field(obj, key, loc);
    if (!v.is_number_integer()) {
        throw ManifestError("field '" + std::string(key) + "' must be an integer", loc);
    }
    return v.get<std::int64_t>();
}

void check_relative_path(const std::string& path, const std::string& loc) {
    std::filesystem::path p(path);
    if (p.empty() || p.is_absolute()) {
        throw ManifestError("file_exists path must be a relative, non-empty path", loc);
    }
    for (const auto& part : p) {
        if (part == "..") {
            throw ManifestError("file_exists path must not escape the workspace", loc);
        }
    }
}

PassCriterion parse_criterion(const ordered_json& j, const std::string& loc, int depth) {
    if (!j.is_object()) {
        throw ManifestError("pass_criterion must be an object", loc);
    }
    if (depth > kMaxCriterionDepth) {
        throw ManifestError("conjunction nesting exceeds depth " +
                                std::to_string(kMaxCriterionDepth),
                            loc);
    }
    PassCriterion c;
    c.kind = criterion_kind_from_string(require_string(j, "kind", loc));
    switch (c.kind) {
        case CriterionKind::exact_output:
            c.text = require_string(j, "expected", loc);
            break;
        case CriterionKind::substring_present:
        case CriterionKind::substring_absent:
            c.text = require_string(j, "substring", loc);
            break;
        case CriterionKind::regex_match:
        case CriterionKind::regex_absent: {
            c.text = require_string(j, "pattern", loc);
            try {
                std::regex re(c.text);
            } catch (const std::regex_error& e) {
                throw ManifestError(std::string("invalid regex pattern: ") + e.what(), loc);
            }
            break;
        }
        case CriterionKind::exit_code_equals:
            c.code = static_cast<int>(require_int(j, "code", loc));
            break;
        case CriterionKind::file_exists:
            c.text = require_string(j, "path", loc);
            check_relative_path(c.text, loc);
            break;
        case CriterionKind::conjunction: {
            const auto& all = require_field(j, "all", loc);
            if (!all.is_array() || all.empty()) {
                throw ManifestError("conjunction 'all' must be a non-empty array", loc);
            }
            for (std::size_t i = 0; i < all.size(); ++i) {
                c.all.push_back(parse_criterion(all[i], loc + ".all[" + std::to_string(i) + "]",
                                                depth + 1));
            }
            break;
        }
    }
    return c;
}

ordered_json criterion_to_json(const PassCriterion& c) {
    ordered_json j;
    j["kind"] = std::string(to_string(c.kind));
    switch (c.kind) {
        case CriterionKind::exact_output:
            j["expected"] = c.text;
            break;
        case CriterionKind::substring_present:
        case CriterionKind::substring_absent:
            j["substring"] = c.text;
            break;
        case CriterionKind::regex_match:
        case CriterionKind::regex_absent:
            j["pattern"] = c.text;
            break;
        case CriterionKind::exit_code_equals:
            j["code"] = c.code;
            break;
        case CriterionKind::file_exists:
            j["path"] = c.text;
            break;
        case CriterionKind::conjunction: {
            ordered_json all = ordered_json::array();
            for (const auto& sub : c.all) all.push_back(criterion_to_json(sub));
            j["all"] = std::move(all);
            break;
        }
    }
    return j;
}

std::chrono::milliseconds parse_timeout(const ordered_json& j, const std::string& loc) {
    std::int64_t ms = require_int(j, "timeout", loc);
    if (ms <= 0) {
        throw ManifestError("timeout must be a positive millisecond count", loc + ".timeout");
    }
    return std::chrono::milliseconds(ms);
}

ParamOverrides parse_overrides(const ordered_json& j, const std::string& loc) {
    if (!j.is_object()) {
        throw ManifestError("param_overrides must be an object", loc);
    }
    ParamOverrides ov;
    for (const auto& [key, value] : j.items()) {
        if (!value.is_number()) {
            throw ManifestError("override '" + key + "' must be a number", loc);
        }
        double d = value.get<double>();
        if (key == "eta") ov.eta = d;
        else if (key == "alpha") ov.alpha = d;
        else if (key == "beta") ov.beta = d;
        else if (key == "theta_s") ov.theta_s = d;
        else if (key == "epsilon") ov.epsilon = d;
        else throw ManifestError("unknown scoring parameter '" + key + "'", loc);
    }
    return ov;
}

// Whether a leaf criterion carries a usable payload. An empty expected string,
// substring, pattern, or path makes the check vacuous or undecidable.
bool criterion_payload_ok(const PassCriterion& c) {
    switch (c.kind) {
        case CriterionKind::exact_output:
        case CriterionKind::exit_code_equals:
            return true;
        case CriterionKind::substring_present:
        case CriterionKind::substring_absent:
        case CriterionKind::regex_match:
        case CriterionKind::regex_absent:
        case CriterionKind::file_exists:
            return !c.text.empty();
        case CriterionKind::conjunction:
            if (c.all.empty()) return false;
            return std::all_of(c.all.begin(), c.all.end(), criterion_payload_ok);
    }
    return false;
}

}  // namespace

int PassCriterion::depth() const {
    int d = 1;
    for (const auto& sub : all) d = std::max(d, 1 + sub.depth());
    return d;
}

std::string_view to_string(TaskGroup g) {
    return g == TaskGroup::common ? "common" : "edge";
}

std::string_view to_string(ProbeGroup g) {
    switch (g) {
        case ProbeGroup::abnormal_behavior_control: return "abnormal_behavior_control";
        case ProbeGroup::permission_boundary: return "permission_boundary";
        case ProbeGroup::sensitive_data_protection: return "sensitive_data_protection";
    }
    return "?";
}

std::string_view to_string(CriterionKind k) {
    switch (k) {
        case CriterionKind::exact_output: return "exact_output";
        case CriterionKind::substring_present: return "substring_present";
        case CriterionKind::substring_absent: return "substring_absent";
        case CriterionKind::regex_match: return "regex_match";
        case CriterionKind::regex_absent: return "regex_absent";
        case CriterionKind::exit_code_equals: return "exit_code_equals";
        case CriterionKind::file_exists: return "file_exists";
        case CriterionKind::conjunction: return "conjunction";
    }
    return "?";
}

std::string_view to_string(Severity s) {
    return s == Severity::error ? "error" : "warning";
}

TaskGroup task_group_from_string(std::string_view s) {
    if (s == "common") return TaskGroup::common;
    if (s == "edge") return TaskGroup::edge;
    throw ManifestError("unknown task group '" + std::string(s) + "'", "group");
}

ProbeGroup probe_group_from_string(std::string_view s) {
    for (ProbeGroup g : kProbeGroups) {
        if (s == to_string(g)) return g;
    }
    throw ManifestError("unknown security group '" + std::string(s) + "'", "group");
}

CriterionKind criterion_kind_from_string(std::string_view s) {
    static constexpr CriterionKind kinds[] = {
        CriterionKind::exact_output,   CriterionKind::substring_present,
        CriterionKind::substring_absent, CriterionKind::regex_match,
        CriterionKind::regex_absent,   CriterionKind::exit_code_equals,
        CriterionKind::file_exists,    CriterionKind::conjunction,
    };
    for (CriterionKind k : kinds) {
        if (s == to_string(k)) return k;
    }
    throw ManifestError("unknown pass-criterion kind '" + std::string(s) + "'",
                        "pass_criterion.kind");
}

BenchmarkManifest parse_manifest(std::string_view raw) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(raw);
    } catch (const ordered_json::parse_error& e) {
        throw ManifestError(std::string("malformed document: ") + e.what(),
                            "byte " + std::to_string(e.byte));
    }
    if (!doc.is_object()) {
        throw ManifestError("manifest document must be a JSON object", "$");
    }

    std::int64_t version = require_int(doc, "format_version", "$");
    if (version != kManifestFormatVersion) {
        throw ManifestError("unsupported format_version " + std::to_string(version) +
                                " (expected " + std::to_string(kManifestFormatVersion) + ")",
                            "format_version");
    }

    BenchmarkManifest m;
    const auto& skill = require_field(doc, "skill", "$");
    if (!skill.is_object()) {
        throw ManifestError("'skill' must be an object", "skill");
    }
    m.skill_id = require_string(skill, "skill_id", "skill");
    if (m.skill_id.empty()) {
        throw ManifestError("skill_id must be non-empty", "skill.skill_id");
    }
    if (skill.contains("skill_version")) {
        if (!skill["skill_version"].is_string()) {
            throw ManifestError("skill_version must be a string", "skill.skill_version");
        }
        m.skill_version = skill["skill_version"].get<std::string>();
    }

    const auto& tasks = require_field(doc, "utility_tasks", "$");
    if (!tasks.is_array()) {
        throw ManifestError("'utility_tasks' must be an array", "utility_tasks");
    }
    std::set<std::string> task_ids;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        const std::string loc = idx_loc("utility_tasks", i);
        const auto& jt = tasks[i];
        if (!jt.is_object()) throw ManifestError("task must be an object", loc);
        UtilityTask t;
        t.task_id = require_string(jt, "task_id", loc);
        if (t.task_id.empty()) throw ManifestError("task_id must be non-empty", loc);
        if (!task_ids.insert(t.task_id).second) {
            throw ManifestError("duplicate task_id '" + t.task_id + "'", loc);
        }
        t.group = task_group_from_string(require_string(jt, "group", loc));
        t.objective = require_string(jt, "objective", loc);
        t.prompt = require_string(jt, "prompt", loc);
        t.pass_criterion =
            parse_criterion(require_field(jt, "pass_criterion", loc), loc + ".pass_criterion", 1);
        t.timeout = parse_timeout(jt, loc);
        m.utility_tasks.push_back(std::move(t));
    }

    const auto& probes = require_field(doc, "security_probes", "$");
    if (!probes.is_array()) {
        throw ManifestError("'security_probes' must be an array", "security_probes");
    }
    std::set<std::string> probe_ids;
    for (std::size_t i = 0; i < probes.size(); ++i) {
        const std::string loc = idx_loc("security_probes", i);
        const auto& jp = probes[i];
        if (!jp.is_object()) throw ManifestError("probe must be an object", loc);
        SecurityProbe p;
        p.probe_id = require_string(jp, "probe_id", loc);
        if (p.probe_id.empty()) throw ManifestError("probe_id must be non-empty", loc);
        if (!probe_ids.insert(p.probe_id).second) {
            throw ManifestError("duplicate probe_id '" + p.probe_id + "'", loc);
        }
        p.group = probe_group_from_string(require_string(jp, "group", loc));
        p.prompt = require_string(jp, "prompt", loc);
        p.pass_criterion =
            parse_criterion(require_field(jp, "pass_criterion", loc), loc + ".pass_criterion", 1);
        p.timeout = parse_timeout(jp, loc);
        if (jp.contains("owasp_tags")) {
            const auto& tags = jp["owasp_tags"];
            if (!tags.is_array()) throw ManifestError("owasp_tags must be an array", loc);
            for (const auto& tag : tags) {
                if (!tag.is_string()) throw ManifestError("owasp_tags entries must be strings", loc);
                p.owasp_tags.push_back(tag.get<std::string>());
            }
        }
        m.security_probes.push_back(std::move(p));
    }

    if (doc.contains("param_overrides")) {
        m.param_overrides = parse_overrides(doc["param_overrides"], "param_overrides");
        try {
            apply_overrides(ScoringParams{}, m.param_overrides);
        } catch (const std::domain_error& e) {
            throw ManifestError(e.what(), "param_overrides");
        }
    }
    if (doc.contains("metadata")) {
        const auto& meta = doc["metadata"];
        if (!meta.is_object()) throw ManifestError("metadata must be an object", "metadata");
        for (const auto& [key, value] : meta.items()) {
            if (!value.is_string()) {
                throw ManifestError("metadata values must be strings", "metadata." + key);
            }
            m.metadata[key] = value.get<std::string>();
        }
    }
    return m;
}

std::string serialize_manifest(const BenchmarkManifest& m) {
    ordered_json doc;
    doc["format_version"] = kManifestFormatVersion;
    ordered_json skill;
    skill["skill_id"] = m.skill_id;
    skill["skill_version"] = m.skill_version;
    doc["skill"] = std::move(skill);

    ordered_json tasks = ordered_json::array();
    for (const auto& t : m.utility_tasks) {
        ordered_json jt;
        jt["task_id"] = t.task_id;
        jt["group"] = std::string(to_string(t.group));
        jt["objective"] = t.objective;
        jt["prompt"] = t.prompt;
        jt["pass_criterion"] = criterion_to_json(t.pass_criterion);
        jt["timeout"] = t.timeout.count();
        tasks.push_back(std::move(jt));
    }
    doc["utility_tasks"] = std::move(tasks);

    ordered_json probes = ordered_json::array();
    for (const auto& p : m.security_probes) {
        ordered_json jp;
        jp["probe_id"] = p.probe_id;
        jp["group"] = std::string(to_string(p.group));
        jp["prompt"] = p.prompt;
        jp["pass_criterion"] = criterion_to_json(p.pass_criterion);
        jp["timeout"] = p.timeout.count();
        if (!p.owasp_tags.empty()) jp["owasp_tags"] = p.owasp_tags;
        probes.push_back(std::move(jp));
    }
    doc["security_probes"] = std::move(probes);

    ordered_json ov = ordered_json::object();
    if (m.param_overrides.eta) ov["eta"] = *m.param_overrides.eta;
    if (m.param_overrides.alpha) ov["alpha"] = *m.param_overrides.alpha;
    if (m.param_overrides.beta) ov["beta"] = *m.param_overrides.beta;
    if (m.param_overrides.theta_s) ov["theta_s"] = *m.param_overrides.theta_s;
    if (m.param_overrides.epsilon) ov["epsilon"] = *m.param_overrides.epsilon;
    if (!ov.empty()) doc["param_overrides"] = std::move(ov);

    if (!m.metadata.empty()) {
        ordered_json meta = ordered_json::object();
        for (const auto& [key, value] : m.metadata) meta[key] = value;
        doc["metadata"] = std::move(meta);
    }
    return doc.dump(2) + "\n";
}

std::string manifest_digest(const BenchmarkManifest& m) {
    std::uint64_t h = fnv1a64(serialize_manifest(m));
    char buf[32];
    std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx", static_cast<unsigned long long>(h));
    return buf;
}

ValidationReport validate_evaluability(const BenchmarkManifest& m,
                                       const EvaluabilityPolicy& policy) {
    ValidationReport report;
    auto add = [&](Severity sev, std::string code, std::string message, std::string loc) {
        report.findings.push_back(
            {sev, std::move(code), std::move(message), std::move(loc)});
    };

    int edge_tasks = 0;
    for (std::size_t i = 0; i < m.utility_tasks.size(); ++i) {
        const auto& t = m.utility_tasks[i];
        const std::string loc = "utility_tasks[" + t.task_id + "]";
        if (t.objective.empty()) {
            add(Severity::error, "missing_objective", "task has no objective", loc);
        }
        if (!criterion_payload_ok(t.pass_criterion)) {
            add(Severity::error, "missing_pass_criterion",
                "task pass criterion has an empty payload and is not decidable", loc);
        }
        if (t.group == TaskGroup::edge) ++edge_tasks;
    }
    for (const auto& p : m.security_probes) {
        const std::string loc = "security_probes[" + p.probe_id + "]";
        if (!criterion_payload_ok(p.pass_criterion)) {
            add(Severity::error, "missing_pass_criterion",
                "probe pass criterion has an empty payload and is not decidable", loc);
        }
    }

    const int n_tasks = static_cast<int>(m.utility_tasks.size());
    if (n_tasks < policy.min_functional_tasks) {
        add(Severity::error, "task_set_too_small",
            "functional task set has " + std::to_string(n_tasks) + " tasks, policy requires " +
                std::to_string(policy.min_functional_tasks),
            "utility_tasks");
    } else if (n_tasks == policy.min_functional_tasks) {
        add(Severity::warning, "task_set_at_minimum",
            "functional task set is exactly at the policy minimum of " +
                std::to_string(policy.min_functional_tasks),
            "utility_tasks");
    }
    if (edge_tasks == 0) {
        add(Severity::warning, "no_edge_tasks", "task set contains no edge functional tasks",
            "utility_tasks");
    }

    for (ProbeGroup g : kProbeGroups) {
        const bool any = std::any_of(m.security_probes.begin(), m.security_probes.end(),
                                     [g](const SecurityProbe& p) { return p.group == g; });
        if (!any) {
            add(Severity::error, "empty_security_group",
                "security group has zero probes; its pass rate would be undefined",
                "security_probes." + std::string(to_string(g)));
        }
    }
    return report;
}

void validate_params(const ScoringParams& p) {
    if (!(p.beta >= 0.0 && p.beta <= p.eta && p.eta <= 100.0)) {
        throw std::domain_error("scoring params require 0 <= beta <= eta <= 100");
    }
    if (!(p.alpha > 0.0)) {
        throw std::domain_error("scoring params require alpha > 0");
    }
    if (!(p.theta_s > 0.0 && p.theta_s < 100.0)) {
        throw std::domain_error("scoring params require 0 < theta_s < 100");
    }
    if (!(p.epsilon > 0.0)) {
        throw std::domain_error("scoring params require epsilon > 0");
    }
}

ScoringParams apply_overrides(const ScoringParams& base, const ParamOverrides& ov) {
    ScoringParams p = base;
    if (ov.eta) p.eta = *ov.eta;
    if (ov.alpha) p.alpha = *ov.alpha;
    if (ov.beta) p.beta = *ov.beta;
    if (ov.theta_s) p.theta_s = *ov.theta_s;
    if (ov.epsilon) p.epsilon = *ov.epsilon;
    validate_params(p);
    return p;
}

}  // namespace skilleval
