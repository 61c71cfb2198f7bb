#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "polydrift/drift_engine.hpp"
#include "polydrift/drift_sim.hpp"
#include "polydrift/errors.hpp"
#include "polydrift/relation_discovery.hpp"
#include "polydrift/stats_core.hpp"
#include "polydrift/tabular.hpp"

namespace py = pybind11;
using namespace polydrift;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Drift detection for numeric tabular data via polynomial feature relations";

    py::register_exception<Error>(m, "PolydriftError");

    // tabular
    py::class_<ColumnStats>(m, "ColumnStats")
        .def(py::init<>())
        .def_readwrite("mean", &ColumnStats::mean)
        .def_readwrite("std", &ColumnStats::std)
        .def_readwrite("min", &ColumnStats::min)
        .def_readwrite("max", &ColumnStats::max)
        .def("__repr__", [](const ColumnStats& s) {
            return "ColumnStats(mean=" + std::to_string(s.mean) + ", std=" + std::to_string(s.std) +
                   ", min=" + std::to_string(s.min) + ", max=" + std::to_string(s.max) + ")";
        });

    py::class_<DataTable>(m, "DataTable")
        .def(py::init([](std::vector<std::string> names, std::vector<std::vector<double>> columns) {
                 return make_table(std::move(names), std::move(columns));
             }),
             py::arg("names"), py::arg("columns"))
        .def_readonly("names", &DataTable::names)
        .def_readonly("columns", &DataTable::columns)
        .def_property_readonly("n_rows", &DataTable::n_rows)
        .def_property_readonly("n_cols", &DataTable::n_cols)
        .def("column", &DataTable::column, py::arg("name"),
             py::return_value_policy::reference_internal)
        .def("__repr__", [](const DataTable& t) {
            return "DataTable(" + std::to_string(t.n_rows()) + " rows, " +
                   std::to_string(t.n_cols()) + " columns)";
        });

    py::class_<SplitPair>(m, "SplitPair")
        .def_readonly("baseline", &SplitPair::baseline)
        .def_readonly("field", &SplitPair::field)
        .def_readonly("seed", &SplitPair::seed)
        .def_readonly("fraction", &SplitPair::fraction);

    py::class_<CsvOptions>(m, "CsvOptions")
        .def(py::init<>())
        .def_readwrite("drop_incomplete_rows", &CsvOptions::drop_incomplete_rows)
        .def_readwrite("select_columns", &CsvOptions::select_columns);

    m.def("load_csv", &load_csv, py::arg("path"), py::arg("options") = CsvOptions{});
    m.def("parse_csv", &parse_csv, py::arg("text"), py::arg("options") = CsvOptions{});
    m.def("to_csv", &to_csv, py::arg("table"));
    m.def("write_csv", &write_csv, py::arg("table"), py::arg("path"));
    m.def("split_rows", &split_rows, py::arg("table"), py::arg("fraction"), py::arg("seed"));
    m.def("column_stats",
          [](const std::vector<double>& column) { return column_stats(column); },
          py::arg("column"));
    m.def("standardize",
          [](const std::vector<double>& column) { return standardize(column); },
          py::arg("column"));
    m.def("unstandardize",
          [](const std::vector<double>& standardized, const ColumnStats& stats) {
              return unstandardize(standardized, stats);
          },
          py::arg("standardized"), py::arg("stats"));
    m.def("schema_fingerprint", &schema_fingerprint, py::arg("table"));

    // stats_core
    py::enum_<Sigma2Denominator>(m, "Sigma2Denominator")
        .value("Columns", Sigma2Denominator::Columns)
        .value("Rows", Sigma2Denominator::Rows);

    py::class_<OlsFit>(m, "OlsFit")
        .def(py::init<>())
        .def_readwrite("beta", &OlsFit::beta)
        .def_readwrite("sigma2", &OlsFit::sigma2)
        .def_readwrite("r2", &OlsFit::r2)
        .def_readwrite("n_train", &OlsFit::n_train)
        .def_readwrite("dim", &OlsFit::dim);

    py::class_<CorrelationMatrix>(m, "CorrelationMatrix")
        .def_readonly("values", &CorrelationMatrix::values)
        .def_readonly("names", &CorrelationMatrix::names);

    m.def("pearson",
          [](const std::vector<double>& x, const std::vector<double>& y) { return pearson(x, y); },
          py::arg("x"), py::arg("y"));
    m.def("spearman",
          [](const std::vector<double>& x, const std::vector<double>& y) { return spearman(x, y); },
          py::arg("x"), py::arg("y"));
    m.def("correlation_matrix", &correlation_matrix, py::arg("table"));
    m.def("fit_ols", &fit_ols, py::arg("design"), py::arg("target"),
          py::arg("denominator") = Sigma2Denominator::Columns);
    m.def("gaussian_log_likelihood", &gaussian_log_likelihood, py::arg("fit"), py::arg("design"),
          py::arg("target"));
    m.def("bic", &bic, py::arg("fit"), py::arg("design"), py::arg("target"));

    py::class_<BayesFactor>(m, "BayesFactor")
        .def_readonly("bf", &BayesFactor::bf)
        .def_readonly("two_ln_bf", &BayesFactor::two_ln_bf);
    m.def("bayes_factor", &bayes_factor, py::arg("bic_1"), py::arg("bic_2"));

    // relation_discovery
    py::class_<TermExponents>(m, "TermExponents")
        .def(py::init([](std::vector<int> exponents) { return TermExponents{std::move(exponents)}; }),
             py::arg("exponents"))
        .def_readonly("exponents", &TermExponents::exponents)
        .def("degree", &TermExponents::degree);

    m.def("enumerate_terms", &enumerate_terms, py::arg("k"), py::arg("l"));
    m.def("term_count", &term_count, py::arg("k"), py::arg("l"));
    m.def("embed", &embed, py::arg("table"), py::arg("features"), py::arg("terms"));
    m.def("top_k_correlated", &top_k_correlated, py::arg("corr"), py::arg("target"), py::arg("k"));

    py::class_<Relation>(m, "Relation")
        .def_readonly("target", &Relation::target)
        .def_readonly("features", &Relation::features)
        .def_readonly("terms", &Relation::terms)
        .def_readonly("fit", &Relation::fit);

    py::class_<DiscoveryParams>(m, "DiscoveryParams")
        .def(py::init<>())
        .def_readwrite("k", &DiscoveryParams::k)
        .def_readwrite("l", &DiscoveryParams::l)
        .def_readwrite("r2_threshold", &DiscoveryParams::r2_threshold)
        .def_readwrite("sigma2_denominator", &DiscoveryParams::sigma2_denominator);

    py::class_<RelationSet>(m, "RelationSet")
        .def_readonly("strong", &RelationSet::strong)
        .def_readonly("weak", &RelationSet::weak)
        .def_readonly("hyperparams", &RelationSet::hyperparams)
        .def_readonly("source_fingerprint", &RelationSet::source_fingerprint)
        .def_readonly("diagnostics", &RelationSet::diagnostics);

    m.def("discover_relations", &discover_relations, py::arg("table"),
          py::arg("params") = DiscoveryParams{});

    // drift_engine
    py::enum_<EvidenceGrade>(m, "EvidenceGrade")
        .value("Negligible", EvidenceGrade::Negligible)
        .value("Positive", EvidenceGrade::Positive)
        .value("Strong", EvidenceGrade::Strong)
        .value("Decisive", EvidenceGrade::Decisive);
    m.def("grade_two_ln_bf", &grade_two_ln_bf, py::arg("two_ln_bf"));

    py::class_<BaselineProfile>(m, "BaselineProfile")
        .def_readonly("relations", &BaselineProfile::relations)
        .def_readonly("baseline_bic", &BaselineProfile::baseline_bic)
        .def_readonly("created_at", &BaselineProfile::created_at)
        .def_readonly("format_version", &BaselineProfile::format_version);

    py::class_<DriftFinding>(m, "DriftFinding")
        .def_readonly("target", &DriftFinding::target)
        .def_readonly("strong_relation", &DriftFinding::strong_relation)
        .def_readonly("r2_baseline", &DriftFinding::r2_baseline)
        .def_readonly("bic_baseline", &DriftFinding::bic_baseline)
        .def_readonly("bic_field", &DriftFinding::bic_field)
        .def_readonly("two_ln_bf", &DriftFinding::two_ln_bf)
        .def_readonly("bf", &DriftFinding::bf)
        .def_readonly("grade", &DriftFinding::grade)
        .def_readonly("drift", &DriftFinding::drift);

    py::class_<SkippedRelation>(m, "SkippedRelation")
        .def_readonly("target", &SkippedRelation::target)
        .def_readonly("reason", &SkippedRelation::reason);

    py::class_<DriftReport>(m, "DriftReport")
        .def_readonly("findings", &DriftReport::findings)
        .def_readonly("skipped", &DriftReport::skipped)
        .def_readonly("field_fingerprint", &DriftReport::field_fingerprint)
        .def_readonly("threshold_2lnbf", &DriftReport::threshold_2lnbf)
        .def_readonly("any_strong_drift", &DriftReport::any_strong_drift);

    m.def("build_profile", &build_profile, py::arg("table"), py::arg("params") = DiscoveryParams{});
    m.def("score_drift", &score_drift, py::arg("profile"), py::arg("field"),
          py::arg("threshold_2lnbf") = kDefaultThreshold2LnBf);
    m.def("profile_to_json", &profile_to_json, py::arg("profile"));
    m.def("profile_from_json",
          [](const std::string& text) { return profile_from_json(text); }, py::arg("text"));
    m.def("save_profile", &save_profile, py::arg("profile"), py::arg("path"));
    m.def("load_profile", &load_profile, py::arg("path"));
    m.def("report_to_json", &report_to_json, py::arg("report"));
    m.def("report_to_csv", &report_to_csv, py::arg("report"));

    // drift_sim
    py::enum_<DriftKind>(m, "DriftKind")
        .value("RowPermutation", DriftKind::RowPermutation)
        .value("Unfairness", DriftKind::Unfairness);

    py::class_<UnfairnessRoles>(m, "UnfairnessRoles")
        .def(py::init([](std::string target, std::vector<std::string> relevant,
                         std::vector<std::string> sensitive) {
                 return UnfairnessRoles{std::move(target), std::move(relevant),
                                        std::move(sensitive)};
             }),
             py::arg("target"), py::arg("relevant"), py::arg("sensitive"))
        .def_readwrite("target", &UnfairnessRoles::target)
        .def_readwrite("relevant", &UnfairnessRoles::relevant)
        .def_readwrite("sensitive", &UnfairnessRoles::sensitive);

    py::class_<SimulationSpec>(m, "SimulationSpec")
        .def(py::init<>())
        .def_readwrite("kind", &SimulationSpec::kind)
        .def_readwrite("param", &SimulationSpec::param)
        .def_readwrite("seed", &SimulationSpec::seed)
        .def_readwrite("roles", &SimulationSpec::roles);

    m.def("validate_spec", [](const SimulationSpec& spec) { validate(spec); }, py::arg("spec"));
    m.def("permute_rows", &permute_rows, py::arg("table"), py::arg("r"), py::arg("seed"));
    m.def("gen_unfair_target", &gen_unfair_target, py::arg("table"), py::arg("roles"),
          py::arg("u"), py::arg("seed"));
    m.def("apply_simulation", &apply_simulation, py::arg("table"), py::arg("spec"));

    py::class_<SweepRecord>(m, "SweepRecord")
        .def_readonly("param", &SweepRecord::param)
        .def_readonly("seed", &SweepRecord::seed)
        .def_readonly("target", &SweepRecord::target)
        .def_readonly("strong_relation", &SweepRecord::strong_relation)
        .def_readonly("r2_baseline", &SweepRecord::r2_baseline)
        .def_readonly("two_ln_bf", &SweepRecord::two_ln_bf)
        .def_readonly("drift", &SweepRecord::drift);

    py::class_<SweepRelationPoint>(m, "SweepRelationPoint")
        .def_readonly("target", &SweepRelationPoint::target)
        .def_readonly("strong_relation", &SweepRelationPoint::strong_relation)
        .def_readonly("median_r2_baseline", &SweepRelationPoint::median_r2_baseline)
        .def_readonly("median_two_ln_bf", &SweepRelationPoint::median_two_ln_bf);

    py::class_<SweepPoint>(m, "SweepPoint")
        .def_readonly("param", &SweepPoint::param)
        .def_readonly("per_relation", &SweepPoint::per_relation);

    py::class_<SweepResult>(m, "SweepResult")
        .def_readonly("kind", &SweepResult::kind)
        .def_readonly("points", &SweepResult::points)
        .def_readonly("seeds_used", &SweepResult::seeds_used)
        .def_readonly("records", &SweepResult::records);

    m.def("run_permutation_sweep", &run_permutation_sweep, py::arg("table"), py::arg("params"),
          py::arg("r_values"), py::arg("seeds"),
          py::arg("threshold_2lnbf") = kDefaultThreshold2LnBf);
    m.def("run_unfairness_sweep", &run_unfairness_sweep, py::arg("table"), py::arg("roles"),
          py::arg("u_values"), py::arg("seeds"), py::arg("params"),
          py::arg("threshold_2lnbf") = kDefaultThreshold2LnBf);
    m.def("sweep_records_csv", &sweep_records_csv, py::arg("sweep"));
    m.def("sweep_aggregate_csv", &sweep_aggregate_csv, py::arg("sweep"));
    m.def("median", &median, py::arg("values"));
}
