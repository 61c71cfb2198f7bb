#include "polydrift/drift_engine.hpp"

#include <algorithm>
#include <json.hpp>

#include "polydrift/errors.hpp"
#include "polydrift/io.hpp"

namespace polydrift {

namespace {

using nlohmann::json;

json relation_to_json(const Relation& relation, double bic_baseline) {
    json terms = json::array();
    for (const auto& term : relation.terms) terms.push_back(term.exponents);
    json beta = json::array();
    for (Eigen::Index i = 0; i < relation.fit.beta.size(); ++i)
        beta.push_back(relation.fit.beta(i));
    return json{{"target", relation.target},
                {"features", relation.features},
                {"terms", std::move(terms)},
                {"beta", std::move(beta)},
                {"sigma2", relation.fit.sigma2},
                {"r2", relation.fit.r2},
                {"n_train", relation.fit.n_train},
                {"bic_baseline", bic_baseline}};
}

std::pair<Relation, double> relation_from_json(const json& j) {
    Relation relation;
    relation.target = j.at("target").get<std::string>();
    relation.features = j.at("features").get<std::vector<std::string>>();
    for (const auto& t : j.at("terms")) {
        TermExponents term{t.get<std::vector<int>>()};
        if (term.exponents.size() != relation.features.size())
            throw CorruptProfileError("term arity does not match the feature count");
        relation.terms.push_back(std::move(term));
    }
    const auto beta = j.at("beta").get<std::vector<double>>();
    if (beta.size() != relation.terms.size())
        throw CorruptProfileError("coefficient count does not match the term count");
    relation.fit.beta = Eigen::Map<const Eigen::VectorXd>(beta.data(),
                                                          static_cast<Eigen::Index>(beta.size()));
    relation.fit.sigma2 = j.at("sigma2").get<double>();
    relation.fit.r2 = j.at("r2").get<double>();
    relation.fit.n_train = j.at("n_train").get<std::size_t>();
    relation.fit.dim = static_cast<int>(beta.size()) + 1;
    return {std::move(relation), j.at("bic_baseline").get<double>()};
}

const char* denominator_name(Sigma2Denominator d) {
    return d == Sigma2Denominator::Columns ? "columns" : "rows";
}

Sigma2Denominator denominator_from(const std::string& name) {
    if (name == "columns") return Sigma2Denominator::Columns;
    if (name == "rows") return Sigma2Denominator::Rows;
    throw CorruptProfileError("unknown sigma2 denominator: " + name);
}

json finding_to_json(const DriftFinding& f) {
    return json{{"target", f.target},
                {"strong", f.strong_relation},
                {"r2_baseline", f.r2_baseline},
                {"bic_baseline", f.bic_baseline},
                {"bic_field", f.bic_field},
                {"two_ln_bf", f.two_ln_bf},
                {"bf", f.bf},
                {"grade", to_string(f.grade)},
                {"decision", f.drift ? "Drift" : "NoDrift"}};
}

}  // namespace

const Relation& BaselineProfile::relation(std::size_t i) const {
    return i < relations.strong.size() ? relations.strong[i]
                                       : relations.weak[i - relations.strong.size()];
}

EvidenceGrade grade_two_ln_bf(double two_ln_bf) {
    if (two_ln_bf <= 2.0) return EvidenceGrade::Negligible;
    if (two_ln_bf <= 6.0) return EvidenceGrade::Positive;
    if (two_ln_bf <= 10.0) return EvidenceGrade::Strong;
    return EvidenceGrade::Decisive;
}

const char* to_string(EvidenceGrade grade) {
    switch (grade) {
        case EvidenceGrade::Negligible: return "Negligible";
        case EvidenceGrade::Positive: return "Positive";
        case EvidenceGrade::Strong: return "Strong";
        case EvidenceGrade::Decisive: return "Decisive";
    }
    return "Negligible";
}

BaselineProfile build_profile(const DataTable& table, const DiscoveryParams& params) {
    BaselineProfile profile;
    profile.relations = discover_relations(table, params);
    profile.baseline_bic.reserve(profile.relation_count());
    for (std::size_t i = 0; i < profile.relation_count(); ++i) {
        const Relation& relation = profile.relation(i);
        const Eigen::MatrixXd design = embed(table, relation.features, relation.terms);
        const auto& target = table.column(relation.target);
        const Eigen::Map<const Eigen::VectorXd> y(target.data(),
                                                  static_cast<Eigen::Index>(target.size()));
        profile.baseline_bic.push_back(bic(relation.fit, design, y));
    }
    return profile;
}

DriftReport score_drift(const BaselineProfile& profile, const DataTable& field,
                        double threshold_2lnbf) {
    if (profile.relation_count() == 0) throw EmptyProfileError("profile holds no relations");
    if (field.n_rows() < 2)
        throw DimensionMismatchError("score_drift: field table needs at least 2 rows");

    DriftReport report;
    report.threshold_2lnbf = threshold_2lnbf;
    report.field_fingerprint = schema_fingerprint(field);

    for (std::size_t i = 0; i < profile.relation_count(); ++i) {
        const Relation& relation = profile.relation(i);
        std::string missing;
        if (!field.column_index(relation.target)) missing = relation.target;
        for (const auto& f : relation.features) {
            if (missing.empty() && !field.column_index(f)) missing = f;
        }
        if (!missing.empty()) {
            report.skipped.push_back({relation.target, "missing feature: " + missing});
            continue;
        }
        const Eigen::MatrixXd design = embed(field, relation.features, relation.terms);
        const auto& target = field.column(relation.target);
        const Eigen::Map<const Eigen::VectorXd> y(target.data(),
                                                  static_cast<Eigen::Index>(target.size()));
        const double bic_field = bic(relation.fit, design, y);
        const double bic_baseline = profile.baseline_bic[i];
        const BayesFactor factor = bayes_factor(bic_baseline, bic_field);

        DriftFinding finding;
        finding.target = relation.target;
        finding.strong_relation = profile.is_strong(i);
        finding.r2_baseline = relation.fit.r2;
        finding.bic_baseline = bic_baseline;
        finding.bic_field = bic_field;
        finding.two_ln_bf = factor.two_ln_bf;
        finding.bf = factor.bf;
        finding.grade = grade_two_ln_bf(factor.two_ln_bf);
        finding.drift = factor.two_ln_bf > threshold_2lnbf;
        report.findings.push_back(std::move(finding));
    }

    std::stable_sort(report.findings.begin(), report.findings.end(),
                     [](const DriftFinding& a, const DriftFinding& b) {
                         if (a.strong_relation != b.strong_relation) return a.strong_relation;
                         return a.r2_baseline > b.r2_baseline;
                     });
    report.any_strong_drift =
        std::any_of(report.findings.begin(), report.findings.end(),
                    [](const DriftFinding& f) { return f.strong_relation && f.drift; });
    return report;
}

std::string profile_to_json(const BaselineProfile& profile) {
    json strong = json::array();
    json weak = json::array();
    const std::size_t n_strong = profile.relations.strong.size();
    for (std::size_t i = 0; i < profile.relation_count(); ++i) {
        (i < n_strong ? strong : weak)
            .push_back(relation_to_json(profile.relation(i), profile.baseline_bic[i]));
    }
    const auto& hp = profile.relations.hyperparams;
    json doc{{"format_version", profile.format_version},
             {"created_at", profile.created_at},
             {"hyperparams",
              {{"k", hp.k},
               {"l", hp.l},
               {"r2_threshold", hp.r2_threshold},
               {"sigma2_denominator", denominator_name(hp.sigma2_denominator)}}},
             {"source_fingerprint", profile.relations.source_fingerprint},
             {"strong", std::move(strong)},
             {"weak", std::move(weak)}};
    return doc.dump(2) + "\n";
}

BaselineProfile profile_from_json(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw CorruptProfileError(std::string("profile is not valid JSON: ") + e.what());
    }
    try {
        const int version = doc.at("format_version").get<int>();
        if (version != kProfileFormatVersion)
            throw VersionMismatchError("unsupported profile format_version " +
                                       std::to_string(version));
        BaselineProfile profile;
        profile.format_version = version;
        profile.created_at = doc.at("created_at").get<std::string>();
        const auto& hp = doc.at("hyperparams");
        profile.relations.hyperparams.k = hp.at("k").get<int>();
        profile.relations.hyperparams.l = hp.at("l").get<int>();
        profile.relations.hyperparams.r2_threshold = hp.at("r2_threshold").get<double>();
        profile.relations.hyperparams.sigma2_denominator =
            denominator_from(hp.at("sigma2_denominator").get<std::string>());
        profile.relations.source_fingerprint = doc.at("source_fingerprint").get<std::string>();
        for (const auto& r : doc.at("strong")) {
            auto [relation, bic_baseline] = relation_from_json(r);
            profile.relations.strong.push_back(std::move(relation));
            profile.baseline_bic.push_back(bic_baseline);
        }
        std::vector<double> weak_bic;
        for (const auto& r : doc.at("weak")) {
            auto [relation, bic_baseline] = relation_from_json(r);
            profile.relations.weak.push_back(std::move(relation));
            weak_bic.push_back(bic_baseline);
        }
        profile.baseline_bic.insert(profile.baseline_bic.end(), weak_bic.begin(), weak_bic.end());
        return profile;
    } catch (const json::exception& e) {
        throw CorruptProfileError(std::string("profile is missing fields: ") + e.what());
    }
}

void save_profile(const BaselineProfile& profile, const std::filesystem::path& path) {
    write_file_atomic(path, profile_to_json(profile));
}

BaselineProfile load_profile(const std::filesystem::path& path) {
    return profile_from_json(read_file(path));
}

std::string report_to_json(const DriftReport& report) {
    json findings = json::array();
    for (const auto& f : report.findings) findings.push_back(finding_to_json(f));
    json skipped = json::array();
    for (const auto& s : report.skipped)
        skipped.push_back(json{{"target", s.target}, {"reason", s.reason}});
    json doc{{"field_fingerprint", report.field_fingerprint},
             {"threshold_2lnbf", report.threshold_2lnbf},
             {"any_strong_drift", report.any_strong_drift},
             {"findings", std::move(findings)},
             {"skipped", std::move(skipped)}};
    return doc.dump(2) + "\n";
}

std::string report_to_csv(const DriftReport& report) {
    std::string out = "target,strong,r2_baseline,bic_baseline,bic_field,two_ln_bf,bf,grade,decision\n";
    for (const auto& f : report.findings) {
        out += f.target;
        out += f.strong_relation ? ",true," : ",false,";
        out += format_double(f.r2_baseline);
        out += ',';
        out += format_double(f.bic_baseline);
        out += ',';
        out += format_double(f.bic_field);
        out += ',';
        out += format_double(f.two_ln_bf);
        out += ',';
        out += format_double(f.bf);
        out += ',';
        out += to_string(f.grade);
        out += f.drift ? ",Drift\n" : ",NoDrift\n";
    }
    return out;
}

void save_report_json(const DriftReport& report, const std::filesystem::path& path) {
    write_file_atomic(path, report_to_json(report));
}

void save_report_csv(const DriftReport& report, const std::filesystem::path& path) {
    write_file_atomic(path, report_to_csv(report));
}

}  // namespace polydrift
