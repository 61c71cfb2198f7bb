#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "polydrift/stats_core.hpp"
#include "polydrift/tabular.hpp"

namespace polydrift {

/// One monomial: exponents[j] is the power of the j-th chosen feature.
/// The all-zeros vector is the constant term 1.
struct TermExponents {
    std::vector<int> exponents;

    int degree() const;
    bool operator==(const TermExponents&) const = default;
};

/// All exponent vectors over k features with total degree <= l, in canonical
/// order: total degree ascending; within a degree, balanced interaction terms
/// before pure powers (sorted-descending exponent pattern ascending), ties by
/// earlier-feature precedence. Count is C(k+l, k).
std::vector<TermExponents> enumerate_terms(int k, int l);

/// C(k+l, k): the embedding size for k features, max degree l.
std::uint64_t term_count(int k, int l);

/// n x |terms| design matrix; column t evaluates term t rowwise. The
/// constant term yields an all-ones column.
Eigen::MatrixXd embed(const DataTable& table, const std::vector<std::string>& features,
                      const std::vector<TermExponents>& terms);

/// The k non-constant features (excluding the target) with largest absolute
/// correlation to the target, descending; ties broken by smaller column index.
std::vector<std::string> top_k_correlated(const CorrelationMatrix& corr,
                                          const std::string& target, int k);

/// One fitted polynomial relation predicting `target` from the embedding of
/// `features`.
struct Relation {
    std::string target;
    std::vector<std::string> features;   // ordered as selected (descending |corr|)
    std::vector<TermExponents> terms;    // aligned with fit.beta
    OlsFit fit;
};

struct DiscoveryParams {
    int k = 2;
    int l = 2;
    double r2_threshold = 0.9;
    Sigma2Denominator sigma2_denominator = Sigma2Denominator::Columns;
};

struct RelationSet {
    std::vector<Relation> strong;  // fit.r2 >= r2_threshold
    std::vector<Relation> weak;    // kept for strong-vs-weak contrast experiments
    DiscoveryParams hyperparams;
    std::string source_fingerprint;
    std::vector<std::string> diagnostics;  // skipped targets, with reasons
};

/// For every non-constant feature as target: select the top-k correlates,
/// build the degree-<=l embedding, fit OLS, and retain the relation as strong
/// or weak by its R^2. Targets that hit rank deficiency, a degenerate target,
/// or too few candidate features are skipped with a diagnostic. Throws
/// TableTooSmallError unless table.n > C(k+l, k).
RelationSet discover_relations(const DataTable& table, const DiscoveryParams& params = {});

}  // namespace polydrift
