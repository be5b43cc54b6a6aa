#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "skilleval/cli.hpp"
#include "skilleval/evidence.hpp"
#include "skilleval/execution.hpp"
#include "skilleval/manifest.hpp"
#include "skilleval/report.hpp"
#include "skilleval/scoring.hpp"

namespace py = pybind11;
using namespace skilleval;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Comparative utility and security evaluation for agent skills";

    py::register_exception<ManifestError>(m, "ManifestError", PyExc_ValueError);
    py::register_exception<ExecutionError>(m, "ExecutionError", PyExc_RuntimeError);
    py::register_exception<NormalizationError>(m, "NormalizationError", PyExc_ValueError);

    py::enum_<TaskGroup>(m, "TaskGroup")
        .value("common", TaskGroup::common)
        .value("edge", TaskGroup::edge);

    py::enum_<ProbeGroup>(m, "ProbeGroup")
        .value("abnormal_behavior_control", ProbeGroup::abnormal_behavior_control)
        .value("permission_boundary", ProbeGroup::permission_boundary)
        .value("sensitive_data_protection", ProbeGroup::sensitive_data_protection);

    py::enum_<CriterionKind>(m, "CriterionKind")
        .value("exact_output", CriterionKind::exact_output)
        .value("substring_present", CriterionKind::substring_present)
        .value("substring_absent", CriterionKind::substring_absent)
        .value("regex_match", CriterionKind::regex_match)
        .value("regex_absent", CriterionKind::regex_absent)
        .value("exit_code_equals", CriterionKind::exit_code_equals)
        .value("file_exists", CriterionKind::file_exists)
        .value("conjunction", CriterionKind::conjunction);

    py::enum_<Severity>(m, "Severity")
        .value("error", Severity::error)
        .value("warning", Severity::warning);

    py::enum_<RunCondition>(m, "RunCondition")
        .value("baseline", RunCondition::baseline)
        .value("with_skill", RunCondition::with_skill)
        .value("security_probe", RunCondition::security_probe);

    py::enum_<RunStatus>(m, "RunStatus")
        .value("success", RunStatus::success)
        .value("failure", RunStatus::failure)
        .value("timeout", RunStatus::timeout)
        .value("executor_error", RunStatus::executor_error);

    py::enum_<ExecutorKind>(m, "ExecutorKind")
        .value("external_command", ExecutorKind::external_command)
        .value("replay", ExecutorKind::replay)
        .value("scripted", ExecutorKind::scripted);

    py::enum_<TaskCase>(m, "TaskCase")
        .value("not_invoked", TaskCase::not_invoked)
        .value("skill_failed", TaskCase::skill_failed)
        .value("incremental", TaskCase::incremental)
        .value("both_succeed", TaskCase::both_succeed);

    py::enum_<SecurityStatus>(m, "SecurityStatus")
        .value("Pass", SecurityStatus::Pass)
        .value("Caution", SecurityStatus::Caution)
        .value("Risky", SecurityStatus::Risky);

    py::class_<ScoringParams>(m, "ScoringParams")
        .def(py::init<>())
        .def_readwrite("eta", &ScoringParams::eta)
        .def_readwrite("alpha", &ScoringParams::alpha)
        .def_readwrite("beta", &ScoringParams::beta)
        .def_readwrite("theta_s", &ScoringParams::theta_s)
        .def_readwrite("epsilon", &ScoringParams::epsilon)
        .def("__eq__", [](const ScoringParams& a, const ScoringParams& b) { return a == b; })
        .def("__repr__", [](const ScoringParams& p) {
            std::ostringstream ss;
            ss << "ScoringParams(eta=" << p.eta << ", alpha=" << p.alpha << ", beta=" << p.beta
               << ", theta_s=" << p.theta_s << ", epsilon=" << p.epsilon << ")";
            return ss.str();
        });

    py::class_<ParamOverrides>(m, "ParamOverrides")
        .def(py::init<>())
        .def_readwrite("eta", &ParamOverrides::eta)
        .def_readwrite("alpha", &ParamOverrides::alpha)
        .def_readwrite("beta", &ParamOverrides::beta)
        .def_readwrite("theta_s", &ParamOverrides::theta_s)
        .def_readwrite("epsilon", &ParamOverrides::epsilon);

    py::class_<PassCriterion>(m, "PassCriterion")
        .def(py::init<>())
        .def_readwrite("kind", &PassCriterion::kind)
        .def_readwrite("text", &PassCriterion::text)
        .def_readwrite("code", &PassCriterion::code)
        .def_readwrite("all", &PassCriterion::all)
        .def("depth", &PassCriterion::depth);

    py::class_<UtilityTask>(m, "UtilityTask")
        .def(py::init<>())
        .def_readwrite("task_id", &UtilityTask::task_id)
        .def_readwrite("group", &UtilityTask::group)
        .def_readwrite("objective", &UtilityTask::objective)
        .def_readwrite("prompt", &UtilityTask::prompt)
        .def_readwrite("pass_criterion", &UtilityTask::pass_criterion)
        .def_property(
            "timeout_ms", [](const UtilityTask& t) { return t.timeout.count(); },
            [](UtilityTask& t, std::int64_t ms) { t.timeout = std::chrono::milliseconds(ms); });

    py::class_<SecurityProbe>(m, "SecurityProbe")
        .def(py::init<>())
        .def_readwrite("probe_id", &SecurityProbe::probe_id)
        .def_readwrite("group", &SecurityProbe::group)
        .def_readwrite("prompt", &SecurityProbe::prompt)
        .def_readwrite("pass_criterion", &SecurityProbe::pass_criterion)
        .def_readwrite("owasp_tags", &SecurityProbe::owasp_tags)
        .def_property(
            "timeout_ms", [](const SecurityProbe& p) { return p.timeout.count(); },
            [](SecurityProbe& p, std::int64_t ms) { p.timeout = std::chrono::milliseconds(ms); });

    py::class_<BenchmarkManifest>(m, "BenchmarkManifest")
        .def(py::init<>())
        .def_readwrite("skill_id", &BenchmarkManifest::skill_id)
        .def_readwrite("skill_version", &BenchmarkManifest::skill_version)
        .def_readwrite("utility_tasks", &BenchmarkManifest::utility_tasks)
        .def_readwrite("security_probes", &BenchmarkManifest::security_probes)
        .def_readwrite("param_overrides", &BenchmarkManifest::param_overrides)
        .def_readwrite("metadata", &BenchmarkManifest::metadata);

    py::class_<EvaluabilityPolicy>(m, "EvaluabilityPolicy")
        .def(py::init<>())
        .def_readwrite("min_functional_tasks", &EvaluabilityPolicy::min_functional_tasks);

    py::class_<Finding>(m, "Finding")
        .def_readonly("severity", &Finding::severity)
        .def_readonly("code", &Finding::code)
        .def_readonly("message", &Finding::message)
        .def_readonly("location", &Finding::location);

    py::class_<ValidationReport>(m, "ValidationReport")
        .def_readonly("findings", &ValidationReport::findings)
        .def("ok", &ValidationReport::ok);

    py::class_<InvocationEvidence>(m, "InvocationEvidence")
        .def(py::init<>())
        .def_readwrite("invoked", &InvocationEvidence::invoked)
        .def_readwrite("marker_lines", &InvocationEvidence::marker_lines);

    py::class_<RunRecord>(m, "RunRecord")
        .def(py::init<>())
        .def_readwrite("ref_id", &RunRecord::ref_id)
        .def_readwrite("condition", &RunRecord::condition)
        .def_readwrite("status", &RunRecord::status)
        .def_readwrite("invocation", &RunRecord::invocation)
        .def_readwrite("tokens", &RunRecord::tokens)
        .def_readwrite("elapsed_ms", &RunRecord::elapsed_ms)
        .def_readwrite("output", &RunRecord::output)
        .def_readwrite("exit_code", &RunRecord::exit_code)
        .def_readwrite("started_at", &RunRecord::started_at);

    py::class_<ScriptedOutcome>(m, "ScriptedOutcome")
        .def(py::init<>())
        .def_readwrite("raw_status", &ScriptedOutcome::raw_status)
        .def_readwrite("tokens", &ScriptedOutcome::tokens)
        .def_readwrite("elapsed_ms", &ScriptedOutcome::elapsed_ms)
        .def_readwrite("output", &ScriptedOutcome::output)
        .def_readwrite("exit_code", &ScriptedOutcome::exit_code)
        .def_readwrite("files", &ScriptedOutcome::files);

    py::class_<ExecutorBinding>(m, "ExecutorBinding")
        .def(py::init<>())
        .def_readwrite("kind", &ExecutorBinding::kind)
        .def_readwrite("command", &ExecutorBinding::command)
        .def_readwrite("env", &ExecutorBinding::env)
        .def_readwrite("replay_dir", &ExecutorBinding::replay_dir)
        .def_readwrite("outcomes", &ExecutorBinding::outcomes);

    py::class_<RunOptions>(m, "RunOptions")
        .def(py::init<>())
        .def_readwrite("jobs", &RunOptions::jobs)
        .def_readwrite("frozen_time_ms", &RunOptions::frozen_time_ms);

    py::class_<PairedTaskEvidence>(m, "PairedTaskEvidence")
        .def(py::init<>())
        .def_readwrite("task_id", &PairedTaskEvidence::task_id)
        .def_readwrite("gate", &PairedTaskEvidence::gate)
        .def_readwrite("skill_success", &PairedTaskEvidence::skill_success)
        .def_readwrite("baseline_success", &PairedTaskEvidence::baseline_success)
        .def_readwrite("skill_tokens", &PairedTaskEvidence::skill_tokens)
        .def_readwrite("baseline_tokens", &PairedTaskEvidence::baseline_tokens)
        .def_readwrite("skill_elapsed_ms", &PairedTaskEvidence::skill_elapsed_ms)
        .def_readwrite("baseline_elapsed_ms", &PairedTaskEvidence::baseline_elapsed_ms);

    py::class_<ProbeVerdict>(m, "ProbeVerdict")
        .def(py::init<>())
        .def_readwrite("probe_id", &ProbeVerdict::probe_id)
        .def_readwrite("passed", &ProbeVerdict::passed);

    py::class_<SecurityGroupEvidence>(m, "SecurityGroupEvidence")
        .def(py::init<>())
        .def_readwrite("group", &SecurityGroupEvidence::group)
        .def_readwrite("passed", &SecurityGroupEvidence::passed)
        .def_readwrite("total", &SecurityGroupEvidence::total)
        .def_readwrite("verdicts", &SecurityGroupEvidence::verdicts);

    py::class_<EvidenceSet>(m, "EvidenceSet")
        .def(py::init<>())
        .def_readwrite("skill_id", &EvidenceSet::skill_id)
        .def_readwrite("skill_version", &EvidenceSet::skill_version)
        .def_readwrite("tasks", &EvidenceSet::tasks)
        .def_readwrite("groups", &EvidenceSet::groups)
        .def_readwrite("manifest_digest", &EvidenceSet::manifest_digest)
        .def_readwrite("params", &EvidenceSet::params);

    py::class_<TaskScore>(m, "TaskScore")
        .def(py::init<>())
        .def_readwrite("task_id", &TaskScore::task_id)
        .def_readwrite("gate", &TaskScore::gate)
        .def_readwrite("value", &TaskScore::value)
        .def_readwrite("score", &TaskScore::score)
        .def_readwrite("case_kind", &TaskScore::case_kind)
        .def_readwrite("efficiency", &TaskScore::efficiency);

    py::class_<SecurityResult>(m, "SecurityResult")
        .def_readonly("abnormal", &SecurityResult::abnormal)
        .def_readonly("permission", &SecurityResult::permission)
        .def_readonly("sensitive", &SecurityResult::sensitive)
        .def_readonly("overall", &SecurityResult::overall)
        .def_readonly("status", &SecurityResult::status)
        .def_readonly("all_pass", &SecurityResult::all_pass);

    py::class_<GroupBreakdown>(m, "GroupBreakdown")
        .def_readonly("group", &GroupBreakdown::group)
        .def_readonly("passed", &GroupBreakdown::passed)
        .def_readonly("total", &GroupBreakdown::total)
        .def_readonly("score", &GroupBreakdown::score);

    py::class_<ScoreReport>(m, "ScoreReport")
        .def_readonly("skill_id", &ScoreReport::skill_id)
        .def_readonly("skill_version", &ScoreReport::skill_version)
        .def_readonly("utility", &ScoreReport::utility)
        .def_readonly("utility_exact", &ScoreReport::utility_exact)
        .def_readonly("security", &ScoreReport::security)
        .def_readonly("security_exact", &ScoreReport::security_exact)
        .def_readonly("status", &ScoreReport::status)
        .def_readonly("task_breakdown", &ScoreReport::task_breakdown)
        .def_readonly("group_breakdown", &ScoreReport::group_breakdown)
        .def_readonly("params", &ScoreReport::params)
        .def_readonly("manifest_digest", &ScoreReport::manifest_digest)
        .def_readonly("generated_at", &ScoreReport::generated_at)
        .def_readonly("notes", &ScoreReport::notes);

    // Manifest operations.
    m.def("parse_manifest", [](const std::string& raw) { return parse_manifest(raw); },
          py::arg("raw"));
    m.def("serialize_manifest", &serialize_manifest, py::arg("manifest"));
    m.def("manifest_digest", &manifest_digest, py::arg("manifest"));
    m.def("validate_evaluability", &validate_evaluability, py::arg("manifest"),
          py::arg("policy") = EvaluabilityPolicy{});
    m.def("validate_params", &validate_params, py::arg("params"));
    m.def("apply_overrides", &apply_overrides, py::arg("base"), py::arg("overrides"));

    // Execution operations.
    m.def("run_paired", &run_paired, py::arg("manifest"), py::arg("executor"),
          py::arg("workspace"), py::arg("options") = RunOptions{},
          py::call_guard<py::gil_scoped_release>());
    m.def("run_security", &run_security, py::arg("manifest"), py::arg("executor"),
          py::arg("workspace"), py::arg("options") = RunOptions{},
          py::call_guard<py::gil_scoped_release>());
    m.def("detect_invocation", &detect_invocation, py::arg("output"), py::arg("skill_id"),
          py::arg("condition"));
    m.def("evaluate_criterion", &evaluate_criterion, py::arg("criterion"), py::arg("record"),
          py::arg("workspace"));
    m.def("parse_scripted_outcomes",
          [](const std::string& raw) { return parse_scripted_outcomes(raw); }, py::arg("raw"));
    m.def(
        "runs_to_jsonl",
        [](const std::vector<RunRecord>& records) {
            std::ostringstream out;
            write_runs_jsonl(records, out);
            return out.str();
        },
        py::arg("records"));
    m.def(
        "runs_from_jsonl",
        [](const std::string& text) {
            std::istringstream in(text);
            return read_runs_jsonl(in);
        },
        py::arg("text"));

    // Evidence operations.
    m.def("normalize", &normalize, py::arg("records"), py::arg("manifest"));
    m.def("serialize_evidence", &serialize_evidence, py::arg("evidence"));
    m.def("parse_evidence", [](const std::string& raw) { return parse_evidence(raw); },
          py::arg("raw"));

    // Scoring operations.
    m.def("clip", &clip, py::arg("x"));
    m.def("cost_ratio", &cost_ratio, py::arg("skill_cost"), py::arg("baseline_cost"),
          py::arg("epsilon") = 1.0);
    m.def("efficiency_subscore", &efficiency_subscore, py::arg("ratio"),
          py::arg("params") = ScoringParams{});
    m.def("combined_efficiency", &combined_efficiency, py::arg("e_token"), py::arg("e_time"));
    m.def("phi", &phi, py::arg("e"), py::arg("params") = ScoringParams{});
    m.def("task_value", &task_value, py::arg("evidence"), py::arg("params") = ScoringParams{});
    m.def("score_tasks", &score_tasks, py::arg("tasks"), py::arg("params") = ScoringParams{});
    m.def("utility_score", &utility_score, py::arg("tasks"));
    m.def("group_score", &group_score, py::arg("evidence"));
    m.def("security_score", &security_score, py::arg("s_a"), py::arg("s_p"), py::arg("s_d"));
    m.def("security_status", &security_status, py::arg("s_a"), py::arg("s_p"), py::arg("s_d"),
          py::arg("all_pass"), py::arg("params") = ScoringParams{});
    m.def("score_security", &score_security, py::arg("groups"),
          py::arg("params") = ScoringParams{});

    // Report operations.
    m.def("round_one_decimal", &round_one_decimal, py::arg("x"));
    m.def("build_report", &build_report, py::arg("evidence"),
          py::arg("params") = ScoringParams{},
          py::arg("frozen_time_ms") = std::optional<std::int64_t>{});
    m.def("render_json", &render_json, py::arg("report"));
    m.def("parse_report", [](const std::string& raw) { return parse_report(raw); },
          py::arg("raw"));
    m.def("render_markdown", &render_markdown, py::arg("report"));

    m.attr("INVOCATION_MARKER_PREFIX") = std::string(kInvocationMarkerPrefix);
    m.attr("MANIFEST_FORMAT_VERSION") = kManifestFormatVersion;
    m.attr("REPORT_VERSION") = kReportVersion;
    m.attr("__version__") = "0.1.0";
}
