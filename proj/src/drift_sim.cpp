#include "polydrift/drift_sim.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "polydrift/errors.hpp"
#include "polydrift/io.hpp"
#include "polydrift/rng.hpp"

namespace polydrift {

namespace {

// Sub-seed tags so the per-column permutations, bootstrap draws and noise
// draws are mutually independent streams derived from one user seed.
constexpr std::uint64_t kTagPermute = 0x7065726d75746530ULL;
constexpr std::uint64_t kTagUnfair = 0x756e666169723030ULL;
constexpr std::uint64_t kTagSweep = 0x7377656570303030ULL;

DataTable replace_column(const DataTable& table, const std::string& name,
                         std::vector<double> values) {
    const auto index = table.column_index(name);
    if (!index) throw UnknownFeatureError("unknown feature: " + name);
    DataTable out = table;
    out.columns[*index] = std::move(values);
    return out;
}

void require(bool condition, const std::string& message) {
    if (!condition) throw InvalidSpecError(message);
}

}  // namespace

const char* to_string(DriftKind kind) {
    return kind == DriftKind::RowPermutation ? "permute" : "unfair";
}

void validate(const SimulationSpec& spec) {
    if (spec.kind == DriftKind::RowPermutation) {
        require(spec.param >= 0.0 && spec.param <= 1.0, "permutation proportion must be in [0, 1]");
        return;
    }
    require(spec.param >= 0.0, "unfairness parameter must be >= 0");
    require(!spec.roles.target.empty(), "unfairness target is required");
    require(!spec.roles.relevant.empty(), "relevant feature list is required");
    require(!spec.roles.sensitive.empty(), "sensitive feature list is required");
    std::set<std::string> seen;
    for (const auto& f : spec.roles.relevant) {
        require(f != spec.roles.target, "target cannot be a relevant feature");
        require(seen.insert(f).second, "duplicate role feature: " + f);
    }
    for (const auto& f : spec.roles.sensitive) {
        require(f != spec.roles.target, "target cannot be a sensitive feature");
        require(seen.insert(f).second, "relevant/sensitive lists must be disjoint: " + f);
    }
}

DataTable permute_rows(const DataTable& table, double r, std::uint64_t seed) {
    require(r >= 0.0 && r <= 1.0, "permutation proportion must be in [0, 1]");
    const std::size_t n = table.n_rows();

    if (r == 0.0) {
        // Row bootstrap: whole rows resampled with replacement.
        Rng rng(Rng::mix(seed, kTagPermute));
        std::vector<std::size_t> rows(n);
        for (std::size_t i = 0; i < n; ++i) rows[i] = static_cast<std::size_t>(rng.below(n));
        DataTable out;
        out.names = table.names;
        out.columns.reserve(table.n_cols());
        for (const auto& column : table.columns) {
            std::vector<double> values;
            values.reserve(n);
            for (const std::size_t i : rows) values.push_back(column[i]);
            out.columns.push_back(std::move(values));
        }
        return out;
    }

    const auto count = static_cast<std::size_t>(r * static_cast<double>(n));
    DataTable out = table;
    for (std::size_t j = 0; j < out.n_cols(); ++j) {
        Rng rng(Rng::mix(seed, Rng::mix(kTagPermute, j + 1)));
        const std::vector<std::size_t> positions = sample_indices(rng, n, count);
        std::vector<double> selected;
        selected.reserve(count);
        for (const std::size_t p : positions) selected.push_back(out.columns[j][p]);
        shuffle_values(rng, selected);
        for (std::size_t i = 0; i < count; ++i) out.columns[j][positions[i]] = selected[i];
    }
    return out;
}

std::vector<double> gen_unfair_target(const DataTable& table, const UnfairnessRoles& roles,
                                      double u, std::uint64_t seed) {
    SimulationSpec spec{DriftKind::Unfairness, u, seed, roles};
    validate(spec);

    const std::size_t n = table.n_rows();
    const auto& original = table.column(roles.target);
    const ColumnStats target_stats = column_stats(original);
    if (target_stats.std == 0.0) throw ZeroVarianceError("unfairness target is constant");

    auto [target_std, unused] = standardize(original);
    const std::size_t q = roles.relevant.size() + roles.sensitive.size();
    Eigen::MatrixXd design(n, q + 1);
    design.col(0).setOnes();
    std::size_t col = 1;
    for (const auto& lists : {&roles.relevant, &roles.sensitive}) {
        for (const auto& name : *lists) {
            auto [values, stats] = standardize(table.column(name));
            design.col(static_cast<Eigen::Index>(col++)) =
                Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(n));
        }
    }

    const Eigen::Map<const Eigen::VectorXd> y(target_std.data(), static_cast<Eigen::Index>(n));
    const OlsFit base = fit_ols(design, y, Sigma2Denominator::Rows);
    // Noise matches the empirical residual variance of the base fit, so the
    // u = 0 generator mimics the realism of the original target.
    const double noise_std = std::sqrt((design * base.beta - y).squaredNorm() /
                                       static_cast<double>(n));

    Eigen::VectorXd scaled = base.beta;
    for (std::size_t s = 0; s < roles.sensitive.size(); ++s) {
        scaled(static_cast<Eigen::Index>(1 + roles.relevant.size() + s)) *= u;
    }

    Rng rng(Rng::mix(seed, kTagUnfair));
    Eigen::VectorXd generated = design * scaled;
    for (Eigen::Index i = 0; i < generated.size(); ++i) generated(i) += noise_std * rng.gaussian();

    // Affine rescale to the original target's exact mean and population std.
    std::vector<double> values(generated.data(), generated.data() + generated.size());
    const ColumnStats generated_stats = column_stats(values);
    if (generated_stats.std == 0.0)
        throw ZeroVarianceError("generated target is constant; roles carry no signal");
    for (double& v : values) {
        v = (v - generated_stats.mean) / generated_stats.std * target_stats.std +
            target_stats.mean;
    }
    return values;
}

DataTable apply_simulation(const DataTable& table, const SimulationSpec& spec) {
    validate(spec);
    if (spec.kind == DriftKind::RowPermutation) {
        return permute_rows(table, spec.param, spec.seed);
    }
    return replace_column(table, spec.roles.target,
                          gen_unfair_target(table, spec.roles, spec.param, spec.seed));
}

double median(std::vector<double> values) {
    if (values.empty()) throw Error("median of empty set");
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    if (values.size() % 2 == 1) return values[mid];
    return 0.5 * (values[mid - 1] + values[mid]);
}

namespace {

void append_records(SweepResult& sweep, const DriftReport& report, double param,
                    std::uint64_t seed) {
    for (const auto& f : report.findings) {
        sweep.records.push_back(SweepRecord{param, seed, f.target, f.strong_relation,
                                            f.r2_baseline, f.two_ln_bf, f.drift});
    }
}

// Median aggregation per (param, target) across seeds; relation order within
// a point is by target name so results are seed-order independent.
void aggregate_points(SweepResult& sweep, const std::vector<double>& params) {
    for (const double param : params) {
        std::map<std::string, std::vector<const SweepRecord*>> by_target;
        for (const auto& record : sweep.records) {
            if (record.param == param) by_target[record.target].push_back(&record);
        }
        SweepPoint point;
        point.param = param;
        for (const auto& [target, records] : by_target) {
            std::vector<double> bf_values, r2_values;
            std::size_t strong_votes = 0;
            for (const auto* record : records) {
                bf_values.push_back(record->two_ln_bf);
                r2_values.push_back(record->r2_baseline);
                if (record->strong_relation) ++strong_votes;
            }
            point.per_relation.push_back(SweepRelationPoint{
                target, strong_votes * 2 > records.size(), median(std::move(r2_values)),
                median(std::move(bf_values))});
        }
        sweep.points.push_back(std::move(point));
    }
}

void require_ascending(const std::vector<double>& values, const std::string& what) {
    require(!values.empty(), what + " list must not be empty");
    for (std::size_t i = 1; i < values.size(); ++i) {
        require(values[i] > values[i - 1], what + " list must be strictly ascending");
    }
}

}  // namespace

SweepResult run_permutation_sweep(const DataTable& table, const DiscoveryParams& params,
                                  const std::vector<double>& r_values,
                                  const std::vector<std::uint64_t>& seeds,
                                  double threshold_2lnbf) {
    require_ascending(r_values, "r");
    for (const double r : r_values) require(r >= 0.0 && r <= 1.0, "r values must be in [0, 1]");
    require(!seeds.empty(), "seed list must not be empty");

    SweepResult sweep;
    sweep.kind = DriftKind::RowPermutation;
    sweep.seeds_used = seeds;
    for (const std::uint64_t seed : seeds) {
        const SplitPair split = split_rows(table, 0.5, seed);
        const BaselineProfile profile = build_profile(split.baseline, params);
        for (std::size_t i = 0; i < r_values.size(); ++i) {
            const DataTable drifted =
                permute_rows(split.field, r_values[i], Rng::mix(seed, Rng::mix(kTagSweep, i)));
            append_records(sweep, score_drift(profile, drifted, threshold_2lnbf), r_values[i],
                           seed);
        }
    }
    aggregate_points(sweep, r_values);
    return sweep;
}

SweepResult run_unfairness_sweep(const DataTable& table, const UnfairnessRoles& roles,
                                 const std::vector<double>& u_values,
                                 const std::vector<std::uint64_t>& seeds,
                                 const DiscoveryParams& params, double threshold_2lnbf) {
    require_ascending(u_values, "u");
    require(u_values.front() == 0.0, "u list must start at 0");
    require(!seeds.empty(), "seed list must not be empty");

    SweepResult sweep;
    sweep.kind = DriftKind::Unfairness;
    sweep.seeds_used = seeds;
    for (const std::uint64_t seed : seeds) {
        const SplitPair split = split_rows(table, 0.5, seed);
        const DataTable baseline = replace_column(
            split.baseline, roles.target,
            gen_unfair_target(split.baseline, roles, 0.0, Rng::mix(seed, kTagUnfair)));
        const BaselineProfile profile = build_profile(baseline, params);
        for (std::size_t i = 0; i < u_values.size(); ++i) {
            // Only the synthetic target is regenerated; the field features stay.
            const DataTable drifted = replace_column(
                split.field, roles.target,
                gen_unfair_target(split.field, roles, u_values[i], Rng::mix(seed, Rng::mix(kTagSweep, i))));
            append_records(sweep, score_drift(profile, drifted, threshold_2lnbf), u_values[i],
                           seed);
        }
    }
    aggregate_points(sweep, u_values);
    return sweep;
}

std::string sweep_records_csv(const SweepResult& sweep) {
    std::string out = "kind,param,seed,target,r2_baseline,two_ln_bf,decision\n";
    for (const auto& record : sweep.records) {
        out += to_string(sweep.kind);
        out += ',';
        out += format_double(record.param);
        out += ',';
        out += std::to_string(record.seed);
        out += ',';
        out += record.target;
        out += ',';
        out += format_double(record.r2_baseline);
        out += ',';
        out += format_double(record.two_ln_bf);
        out += record.drift ? ",Drift\n" : ",NoDrift\n";
    }
    return out;
}

std::string sweep_aggregate_csv(const SweepResult& sweep) {
    std::string out = "kind,param,target,median_two_ln_bf\n";
    for (const auto& point : sweep.points) {
        for (const auto& relation : point.per_relation) {
            out += to_string(sweep.kind);
            out += ',';
            out += format_double(point.param);
            out += ',';
            out += relation.target;
            out += ',';
            out += format_double(relation.median_two_ln_bf);
            out += '\n';
        }
    }
    return out;
}

}  // namespace polydrift
