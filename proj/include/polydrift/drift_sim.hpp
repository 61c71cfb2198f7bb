#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "polydrift/drift_engine.hpp"
#include "polydrift/tabular.hpp"

namespace polydrift {

enum class DriftKind { RowPermutation, Unfairness };

const char* to_string(DriftKind kind);

/// Feature roles for the unfairness injection: the synthetic target should
/// depend on the relevant features; the sensitive features' influence is
/// scaled by the unfairness parameter u.
struct UnfairnessRoles {
    std::string target;
    std::vector<std::string> relevant;
    std::vector<std::string> sensitive;
};

struct SimulationSpec {
    DriftKind kind = DriftKind::RowPermutation;
    double param = 0.0;  // R in [0,1] for permutation; u >= 0 for unfairness
    std::uint64_t seed = 0;
    UnfairnessRoles roles;  // unfairness only
};

/// Throws InvalidSpecError when the spec violates its invariants
/// (param range, empty/overlapping role lists, target in a role list).
void validate(const SimulationSpec& spec);

/// r > 0: per column, floor(r*n) distinct positions are selected uniformly
/// and their values permuted in place, independently across columns (marginals
/// preserved, inter-feature association disrupted). r = 0: the table's rows
/// are resampled with replacement. Deterministic per seed.
DataTable permute_rows(const DataTable& table, double r, std::uint64_t seed);

/// Synthetic target: standardize the target and role features, fit the target
/// on [1 | relevant | sensitive], scale the sensitive coefficients by u,
/// generate with Gaussian noise at the fit's residual variance, then rescale
/// affinely to the original target's exact mean and population std.
std::vector<double> gen_unfair_target(const DataTable& table, const UnfairnessRoles& roles,
                                      double u, std::uint64_t seed);

/// Applies the spec to a table: permutes rows, or replaces the target column
/// with the synthetic unfair target.
DataTable apply_simulation(const DataTable& table, const SimulationSpec& spec);

struct SweepRecord {
    double param = 0.0;
    std::uint64_t seed = 0;
    std::string target;
    bool strong_relation = false;
    double r2_baseline = 0.0;
    double two_ln_bf = 0.0;
    bool drift = false;
};

struct SweepRelationPoint {
    std::string target;
    bool strong_relation = false;
    double median_r2_baseline = 0.0;
    double median_two_ln_bf = 0.0;
};

struct SweepPoint {
    double param = 0.0;
    std::vector<SweepRelationPoint> per_relation;
};

struct SweepResult {
    DriftKind kind = DriftKind::RowPermutation;
    std::vector<SweepPoint> points;  // ascending by param; medians over seeds
    std::vector<std::uint64_t> seeds_used;
    std::vector<SweepRecord> records;  // raw per-seed scores
};

/// Per seed: split 50/50, build a profile on the baseline half, then score a
/// permuted copy of the field half at each r. Medians aggregate over seeds.
SweepResult run_permutation_sweep(const DataTable& table, const DiscoveryParams& params,
                                  const std::vector<double>& r_values,
                                  const std::vector<std::uint64_t>& seeds,
                                  double threshold_2lnbf = kDefaultThreshold2LnBf);

/// Per seed: split 50/50, replace the target on the baseline half with its
/// u=0 synthetic version and build a profile, then for each u regenerate the
/// field half's synthetic target at that u (features unchanged) and score.
/// u_values must be ascending and start at 0.
SweepResult run_unfairness_sweep(const DataTable& table, const UnfairnessRoles& roles,
                                 const std::vector<double>& u_values,
                                 const std::vector<std::uint64_t>& seeds,
                                 const DiscoveryParams& params,
                                 double threshold_2lnbf = kDefaultThreshold2LnBf);

/// CSV with one row per (param, seed, relation) score.
std::string sweep_records_csv(const SweepResult& sweep);

/// CSV with one row per (param, relation) median.
std::string sweep_aggregate_csv(const SweepResult& sweep);

double median(std::vector<double> values);

}  // namespace polydrift
