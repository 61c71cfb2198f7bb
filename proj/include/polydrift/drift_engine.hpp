#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "polydrift/relation_discovery.hpp"

namespace polydrift {

inline constexpr int kProfileFormatVersion = 1;
inline constexpr double kDefaultThreshold2LnBf = 10.0;

/// Discovered relations plus each relation's BIC on the baseline data it was
/// fit on, evaluated once at build time. Immutable after construction/load.
struct BaselineProfile {
    RelationSet relations;
    std::vector<double> baseline_bic;  // one entry per relation, strong then weak
    std::string created_at;            // empty unless stamped by the caller
    int format_version = kProfileFormatVersion;

    std::size_t relation_count() const { return relations.strong.size() + relations.weak.size(); }
    const Relation& relation(std::size_t i) const;  // strong first, then weak
    bool is_strong(std::size_t i) const { return i < relations.strong.size(); }
};

/// Kass-Raftery-style evidence bands on the 2 ln(BF) scale:
/// <=2 Negligible, <=6 Positive, <=10 Strong, >10 Decisive.
enum class EvidenceGrade { Negligible, Positive, Strong, Decisive };

EvidenceGrade grade_two_ln_bf(double two_ln_bf);
const char* to_string(EvidenceGrade grade);

struct DriftFinding {
    std::string target;
    bool strong_relation = false;
    double r2_baseline = 0.0;
    double bic_baseline = 0.0;
    double bic_field = 0.0;
    double two_ln_bf = 0.0;
    double bf = 1.0;  // may be +inf for strong drift; two_ln_bf is canonical
    EvidenceGrade grade = EvidenceGrade::Negligible;
    bool drift = false;
};

struct SkippedRelation {
    std::string target;
    std::string reason;
};

struct DriftReport {
    std::vector<DriftFinding> findings;  // strong relations first, by descending r2
    std::vector<SkippedRelation> skipped;
    std::string field_fingerprint;
    double threshold_2lnbf = kDefaultThreshold2LnBf;
    bool any_strong_drift = false;
};

/// Runs discovery and stores each relation's baseline BIC.
BaselineProfile build_profile(const DataTable& table, const DiscoveryParams& params = {});

/// Re-embeds the field data and evaluates each relation's BIC under the
/// stored parameters (no refitting), then compares against the stored
/// baseline BIC. Relations whose target or features are missing from the
/// field table are skipped with a diagnostic. Throws EmptyProfileError when
/// the profile holds no relations.
DriftReport score_drift(const BaselineProfile& profile, const DataTable& field,
                        double threshold_2lnbf = kDefaultThreshold2LnBf);

std::string profile_to_json(const BaselineProfile& profile);
BaselineProfile profile_from_json(std::string_view text);
void save_profile(const BaselineProfile& profile, const std::filesystem::path& path);
BaselineProfile load_profile(const std::filesystem::path& path);

std::string report_to_json(const DriftReport& report);
std::string report_to_csv(const DriftReport& report);
void save_report_json(const DriftReport& report, const std::filesystem::path& path);
void save_report_csv(const DriftReport& report, const std::filesystem::path& path);

}  // namespace polydrift
