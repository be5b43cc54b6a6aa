#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "skilleval/report.hpp"

using namespace skilleval;

namespace {

PairedTaskEvidence task(std::string id, int g, int ys, int yb, double us = 100, double ub = 100,
                        double ts = 100, double tb = 100) {
    PairedTaskEvidence ev;
    ev.task_id = std::move(id);
    ev.gate = g;
    ev.skill_success = ys;
    ev.baseline_success = yb;
    ev.skill_tokens = us;
    ev.baseline_tokens = ub;
    ev.skill_elapsed_ms = ts;
    ev.baseline_elapsed_ms = tb;
    return ev;
}

SecurityGroupEvidence group(ProbeGroup g, int passed, int total) {
    SecurityGroupEvidence ev;
    ev.group = g;
    ev.passed = passed;
    ev.total = total;
    for (int i = 0; i < total; ++i) ev.verdicts.push_back({"p" + std::to_string(i), i < passed});
    return ev;
}

// Ten tasks scoring {100 x4, 50 x4, ~70 x2} and groups whose mean is 92.0:
// the shape of the published illustrative output.
EvidenceSet illustrative_evidence() {
    EvidenceSet ev;
    ev.skill_id = "pdf-tools";
    ev.skill_version = "2.3.1";
    ev.manifest_digest = "fnv1a64:0000000000000000";
    for (int i = 0; i < 4; ++i) {
        ev.tasks.push_back(task("inc" + std::to_string(i), 1, 1, 0));
    }
    for (int i = 0; i < 4; ++i) {
        ev.tasks.push_back(task("eq" + std::to_string(i), 1, 1, 1, 999, 999, 999, 999));
    }
    // Cost ratio 2^-0.8 on both axes puts the efficiency score at 70.
    const double us = 1000.0 * std::exp2(-0.8) - 1.0;
    for (int i = 0; i < 2; ++i) {
        ev.tasks.push_back(task("eff" + std::to_string(i), 1, 1, 1, us, 999, us, 999));
    }
    ev.groups = {group(ProbeGroup::abnormal_behavior_control, 100, 100),
                 group(ProbeGroup::permission_boundary, 100, 100),
                 group(ProbeGroup::sensitive_data_protection, 19, 25)};
    return ev;
}

}  // namespace

TEST_CASE("round_one_decimal rounds half up") {
    CHECK(round_one_decimal(74.0) == 74.0);
    CHECK(round_one_decimal(0.25) == 0.3);
    CHECK(round_one_decimal(99.96) == 100.0);
    CHECK(round_one_decimal(74.04) == 74.0);
    CHECK(round_one_decimal(0.0) == 0.0);
}

TEST_CASE("build_report reproduces the illustrative headline") {
    auto ev = illustrative_evidence();
    auto report = build_report(ev, ScoringParams{}, 0);
    CHECK(report.utility == 74.0);
    CHECK(report.security == 92.0);
    CHECK(report.security_exact == 92.0);
    CHECK(report.status == SecurityStatus::Caution);
    CHECK(std::abs(report.utility_exact - 74.0) < 1e-9);
    CHECK(report.skill_id == "pdf-tools");
    CHECK(report.generated_at == "1970-01-01T00:00:00.000Z");

    bool comparative_note = false;
    bool group_note = false;
    for (const auto& note : report.notes) {
        if (note.find("matched no-skill baseline") != std::string::npos) comparative_note = true;
        if (note.find("sensitive_data_protection (76.0)") != std::string::npos) group_note = true;
    }
    CHECK(comparative_note);
    CHECK(group_note);
}

TEST_CASE("build_report handles gate-dominated and all-pass evidence") {
    EvidenceSet ev;
    ev.skill_id = "quiet-skill";
    ev.tasks.push_back(task("t1", 0, 1, 0));
    ev.tasks.push_back(task("t2", 0, 1, 1));
    ev.groups = {group(ProbeGroup::abnormal_behavior_control, 2, 2),
                 group(ProbeGroup::permission_boundary, 3, 3),
                 group(ProbeGroup::sensitive_data_protection, 1, 1)};
    auto report = build_report(ev, ScoringParams{}, 0);
    CHECK(report.utility == 0.0);
    CHECK(report.security == 100.0);
    CHECK(report.status == SecurityStatus::Pass);
    // Tasks that succeeded without invocation are flagged for the reader.
    int flagged = 0;
    for (const auto& note : report.notes) {
        if (note.find("without invoking") != std::string::npos) ++flagged;
    }
    CHECK(flagged == 2);
}

TEST_CASE("build_report on one incremental task and near-perfect groups") {
    EvidenceSet ev;
    ev.skill_id = "s";
    ev.tasks.push_back(task("only", 1, 1, 0));
    ev.groups = {group(ProbeGroup::abnormal_behavior_control, 9, 10),
                 group(ProbeGroup::permission_boundary, 9, 10),
                 group(ProbeGroup::sensitive_data_protection, 9, 10)};
    auto report = build_report(ev, ScoringParams{}, 0);
    CHECK(report.utility == 100.0);
    CHECK(report.security == 90.0);
    CHECK(report.status == SecurityStatus::Caution);
}

TEST_CASE("render_json is deterministic and round-trips") {
    auto report = build_report(illustrative_evidence(), ScoringParams{}, 0);
    const std::string a = render_json(report);
    const std::string b = render_json(report);
    CHECK(a == b);

    auto parsed = parse_report(a);
    CHECK(parsed == report);
    CHECK(render_json(parsed) == a);
}

TEST_CASE("render_json handles empty notes") {
    auto report = build_report(illustrative_evidence(), ScoringParams{}, 0);
    report.notes.clear();
    auto parsed = parse_report(render_json(report));
    CHECK(parsed.notes.empty());
}

TEST_CASE("markdown leads with the headline and orders sections") {
    auto report = build_report(illustrative_evidence(), ScoringParams{}, 0);
    const std::string md = render_markdown(report);
    const auto status_pos = md.find("**Security status:** Caution");
    const auto warn_pos = md.find("## Warnings");
    const auto breakdown_pos = md.find("## Utility breakdown");
    REQUIRE(status_pos != std::string::npos);
    REQUIRE(warn_pos != std::string::npos);
    REQUIRE(breakdown_pos != std::string::npos);
    CHECK(status_pos < warn_pos);
    CHECK(status_pos < breakdown_pos);
    CHECK(md.find("sensitive_data_protection passed 19 of 25 probes") != std::string::npos);
    CHECK(md.find("| eff0 | both_succeed | 1 |") != std::string::npos);
}

TEST_CASE("markdown omits warnings on a Pass report") {
    EvidenceSet ev;
    ev.skill_id = "s";
    ev.tasks.push_back(task("t", 1, 1, 0));
    ev.groups = {group(ProbeGroup::abnormal_behavior_control, 1, 1),
                 group(ProbeGroup::permission_boundary, 1, 1),
                 group(ProbeGroup::sensitive_data_protection, 1, 1)};
    auto report = build_report(ev, ScoringParams{}, 0);
    CHECK(report.status == SecurityStatus::Pass);
    CHECK(render_markdown(report).find("## Warnings") == std::string::npos);
}

TEST_CASE("risky markdown lists every group below full pass rate") {
    EvidenceSet ev;
    ev.skill_id = "s";
    ev.tasks.push_back(task("t", 1, 1, 0));
    ev.groups = {group(ProbeGroup::abnormal_behavior_control, 1, 2),
                 group(ProbeGroup::permission_boundary, 1, 2),
                 group(ProbeGroup::sensitive_data_protection, 2, 2)};
    auto report = build_report(ev, ScoringParams{}, 0);
    CHECK(report.status == SecurityStatus::Risky);
    const std::string md = render_markdown(report);
    CHECK(md.find("abnormal_behavior_control passed 1 of 2") != std::string::npos);
    CHECK(md.find("permission_boundary passed 1 of 2") != std::string::npos);
    CHECK(md.find("sensitive_data_protection passed") == std::string::npos);
}

TEST_CASE("property: headline numbers are recomputable from the breakdowns") {
    auto report = build_report(illustrative_evidence(), ScoringParams{}, 0);
    double sum = 0.0;
    for (const auto& t : report.task_breakdown) sum += t.score;
    CHECK(round_one_decimal(sum / report.task_breakdown.size()) == report.utility);

    double group_sum = 0.0;
    for (const auto& g : report.group_breakdown) {
        CHECK(g.score == 100.0 * g.passed / g.total);
        group_sum += g.score;
    }
    CHECK(round_one_decimal(group_sum / 3.0) == report.security);
}

TEST_CASE("build_report echoes the parameter set it used") {
    ScoringParams p;
    p.eta = 60.0;
    p.alpha = 30.0;
    auto report = build_report(illustrative_evidence(), p, 0);
    CHECK(report.params == p);
    auto parsed = parse_report(render_json(report));
    CHECK(parsed.params == p);
}
