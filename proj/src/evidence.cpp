#include "skilleval/evidence.hpp"

#include <json.hpp>

namespace skilleval {

using ordered_json = nlohmann::ordered_json;

namespace {

std::size_t group_index(ProbeGroup g) {
    switch (g) {
        case ProbeGroup::abnormal_behavior_control: return 0;
        case ProbeGroup::permission_boundary: return 1;
        case ProbeGroup::sensitive_data_protection: return 2;
    }
    return 0;
}

void require_measurements(const RunRecord& rec) {
    if (!rec.tokens || !rec.elapsed_ms) {
        throw NormalizationError("record '" + rec.ref_id + "' (" +
                                 std::string(to_string(rec.condition)) +
                                 ") is missing token or elapsed-time measurements");
    }
}

ordered_json task_to_json(const PairedTaskEvidence& t) {
    ordered_json j;
    j["task_id"] = t.task_id;
    j["gate"] = t.gate;
    j["skill_success"] = t.skill_success;
    j["baseline_success"] = t.baseline_success;
    j["skill_tokens"] = t.skill_tokens;
    j["baseline_tokens"] = t.baseline_tokens;
    j["skill_elapsed"] = t.skill_elapsed_ms;
    j["baseline_elapsed"] = t.baseline_elapsed_ms;
    return j;
}

PairedTaskEvidence task_from_json(const ordered_json& j) {
    PairedTaskEvidence t;
    t.task_id = j.at("task_id").get<std::string>();
    t.gate = j.at("gate").get<int>();
    t.skill_success = j.at("skill_success").get<int>();
    t.baseline_success = j.at("baseline_success").get<int>();
    t.skill_tokens = j.at("skill_tokens").get<double>();
    t.baseline_tokens = j.at("baseline_tokens").get<double>();
    t.skill_elapsed_ms = j.at("skill_elapsed").get<double>();
    t.baseline_elapsed_ms = j.at("baseline_elapsed").get<double>();
    return t;
}

ordered_json group_to_json(const SecurityGroupEvidence& g) {
    ordered_json j;
    j["group"] = std::string(to_string(g.group));
    j["passed"] = g.passed;
    j["total"] = g.total;
    ordered_json verdicts = ordered_json::array();
    for (const auto& v : g.verdicts) {
        ordered_json jv;
        jv["probe_id"] = v.probe_id;
        jv["passed"] = v.passed;
        verdicts.push_back(std::move(jv));
    }
    j["verdicts"] = std::move(verdicts);
    return j;
}

SecurityGroupEvidence group_from_json(const ordered_json& j) {
    SecurityGroupEvidence g;
    g.group = probe_group_from_string(j.at("group").get<std::string>());
    g.passed = j.at("passed").get<int>();
    g.total = j.at("total").get<int>();
    for (const auto& jv : j.at("verdicts")) {
        g.verdicts.push_back({jv.at("probe_id").get<std::string>(), jv.at("passed").get<bool>()});
    }
    return g;
}

ordered_json params_to_json(const ScoringParams& p) {
    ordered_json j;
    j["eta"] = p.eta;
    j["alpha"] = p.alpha;
    j["beta"] = p.beta;
    j["theta_s"] = p.theta_s;
    j["epsilon"] = p.epsilon;
    return j;
}

ScoringParams params_from_json(const ordered_json& j) {
    ScoringParams p;
    p.eta = j.at("eta").get<double>();
    p.alpha = j.at("alpha").get<double>();
    p.beta = j.at("beta").get<double>();
    p.theta_s = j.at("theta_s").get<double>();
    p.epsilon = j.at("epsilon").get<double>();
    return p;
}

}  // namespace

EvidenceSet normalize(const std::vector<RunRecord>& records, const BenchmarkManifest& manifest) {
    EvidenceSet ev;
    ev.skill_id = manifest.skill_id;
    ev.skill_version = manifest.skill_version;
    ev.manifest_digest = manifest_digest(manifest);
    ev.params = apply_overrides(ScoringParams{}, manifest.param_overrides);

    // Index records; reject duplicates and refs the manifest does not know.
    std::map<std::string, const RunRecord*> by_key;
    for (const auto& rec : records) {
        const std::string key = outcome_key(rec.ref_id, rec.condition);
        if (!by_key.emplace(key, &rec).second) {
            throw NormalizationError("duplicate record for '" + key + "'");
        }
    }
    std::size_t consumed = 0;

    for (const auto& task : manifest.utility_tasks) {
        auto bs_it = by_key.find(outcome_key(task.task_id, RunCondition::baseline));
        auto ws_it = by_key.find(outcome_key(task.task_id, RunCondition::with_skill));
        if (bs_it == by_key.end() || ws_it == by_key.end()) {
            throw NormalizationError("missing paired records for task '" + task.task_id + "'");
        }
        const RunRecord& bs = *bs_it->second;
        const RunRecord& ws = *ws_it->second;
        require_measurements(bs);
        require_measurements(ws);
        consumed += 2;

        PairedTaskEvidence t;
        t.task_id = task.task_id;
        t.gate = ws.invocation.invoked ? 1 : 0;
        t.skill_success = ws.status == RunStatus::success ? 1 : 0;
        t.baseline_success = bs.status == RunStatus::success ? 1 : 0;
        t.skill_tokens = static_cast<double>(*ws.tokens);
        t.baseline_tokens = static_cast<double>(*bs.tokens);
        t.skill_elapsed_ms = static_cast<double>(*ws.elapsed_ms);
        t.baseline_elapsed_ms = static_cast<double>(*bs.elapsed_ms);
        ev.tasks.push_back(std::move(t));
    }

    for (std::size_t i = 0; i < 3; ++i) ev.groups[i].group = kProbeGroups[i];
    for (const auto& probe : manifest.security_probes) {
        auto it = by_key.find(outcome_key(probe.probe_id, RunCondition::security_probe));
        if (it == by_key.end()) {
            throw NormalizationError("missing record for probe '" + probe.probe_id + "'");
        }
        const RunRecord& rec = *it->second;
        ++consumed;
        const bool passed = rec.status == RunStatus::success;
        auto& group = ev.groups[group_index(probe.group)];
        group.verdicts.push_back({probe.probe_id, passed});
        group.total += 1;
        if (passed) group.passed += 1;
    }

    if (consumed != records.size()) {
        throw NormalizationError("record batch contains entries not referenced by the manifest");
    }
    for (const auto& group : ev.groups) {
        if (group.total == 0) {
            throw NormalizationError("security group '" + std::string(to_string(group.group)) +
                                     "' has no probes; its pass rate is undefined");
        }
    }
    return ev;
}

std::string serialize_evidence(const EvidenceSet& evidence) {
    ordered_json doc;
    ordered_json skill;
    skill["skill_id"] = evidence.skill_id;
    skill["skill_version"] = evidence.skill_version;
    doc["skill"] = std::move(skill);

    ordered_json tasks = ordered_json::array();
    for (const auto& t : evidence.tasks) tasks.push_back(task_to_json(t));
    doc["tasks"] = std::move(tasks);

    ordered_json groups = ordered_json::array();
    for (const auto& g : evidence.groups) groups.push_back(group_to_json(g));
    doc["groups"] = std::move(groups);

    doc["manifest_digest"] = evidence.manifest_digest;
    doc["params"] = params_to_json(evidence.params);
    return doc.dump(2) + "\n";
}

EvidenceSet parse_evidence(std::string_view raw) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(raw);
    } catch (const ordered_json::parse_error& e) {
        throw NormalizationError(std::string("evidence document is not valid JSON: ") + e.what());
    }
    try {
        EvidenceSet ev;
        const auto& skill = doc.at("skill");
        ev.skill_id = skill.at("skill_id").get<std::string>();
        ev.skill_version = skill.value("skill_version", std::string());
        for (const auto& jt : doc.at("tasks")) ev.tasks.push_back(task_from_json(jt));
        const auto& groups = doc.at("groups");
        if (!groups.is_array() || groups.size() != 3) {
            throw NormalizationError("evidence document must carry exactly three security groups");
        }
        for (std::size_t i = 0; i < 3; ++i) {
            ev.groups[i] = group_from_json(groups[i]);
            if (ev.groups[i].group != kProbeGroups[i]) {
                throw NormalizationError("evidence groups must appear in canonical order");
            }
        }
        ev.manifest_digest = doc.value("manifest_digest", std::string());
        ev.params = doc.contains("params") ? params_from_json(doc.at("params")) : ScoringParams{};
        return ev;
    } catch (const ordered_json::exception& e) {
        throw NormalizationError(std::string("evidence document is malformed: ") + e.what());
    }
}

}  // namespace skilleval
