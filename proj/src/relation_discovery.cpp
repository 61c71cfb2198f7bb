#include "polydrift/relation_discovery.hpp"

#include <algorithm>
#include <numeric>

#include "polydrift/errors.hpp"

namespace polydrift {

namespace {

// Canonical within-degree order: balanced interaction terms come before pure
// powers, matching how the embedding is conventionally written out; ties go
// to earlier features.
bool term_less(const TermExponents& a, const TermExponents& b) {
    const int da = a.degree();
    const int db = b.degree();
    if (da != db) return da < db;
    std::vector<int> pa = a.exponents;
    std::vector<int> pb = b.exponents;
    std::sort(pa.rbegin(), pa.rend());
    std::sort(pb.rbegin(), pb.rend());
    if (pa != pb) return pa < pb;
    return a.exponents > b.exponents;
}

void enumerate_recursive(int slot, int k, int remaining, std::vector<int>& current,
                         std::vector<TermExponents>& out) {
    if (slot == k) {
        out.push_back(TermExponents{current});
        return;
    }
    for (int e = 0; e <= remaining; ++e) {
        current[slot] = e;
        enumerate_recursive(slot + 1, k, remaining - e, current, out);
    }
    current[slot] = 0;
}

}  // namespace

int TermExponents::degree() const {
    return std::accumulate(exponents.begin(), exponents.end(), 0);
}

std::uint64_t term_count(int k, int l) {
    // C(k+l, k)
    std::uint64_t result = 1;
    for (int i = 1; i <= k; ++i) {
        result = result * static_cast<std::uint64_t>(l + i) / static_cast<std::uint64_t>(i);
    }
    return result;
}

std::vector<TermExponents> enumerate_terms(int k, int l) {
    if (k < 1) throw Error("enumerate_terms: k must be >= 1");
    if (l < 0) throw Error("enumerate_terms: l must be >= 0");
    std::vector<TermExponents> terms;
    std::vector<int> current(static_cast<std::size_t>(k), 0);
    enumerate_recursive(0, k, l, current, terms);
    std::sort(terms.begin(), terms.end(), term_less);
    return terms;
}

Eigen::MatrixXd embed(const DataTable& table, const std::vector<std::string>& features,
                      const std::vector<TermExponents>& terms) {
    const std::size_t n = table.n_rows();
    std::vector<const std::vector<double>*> cols;
    cols.reserve(features.size());
    for (const auto& f : features) cols.push_back(&table.column(f));

    Eigen::MatrixXd design(n, terms.size());
    for (std::size_t t = 0; t < terms.size(); ++t) {
        const auto& exponents = terms[t].exponents;
        if (exponents.size() != features.size())
            throw DimensionMismatchError("embed: term arity != feature count");
        design.col(t).setOnes();
        for (std::size_t j = 0; j < exponents.size(); ++j) {
            for (int rep = 0; rep < exponents[j]; ++rep) {
                design.col(t).array() *= Eigen::Map<const Eigen::ArrayXd>(cols[j]->data(), n);
            }
        }
    }
    return design;
}

std::vector<std::string> top_k_correlated(const CorrelationMatrix& corr,
                                          const std::string& target, int k) {
    const auto m = corr.names.size();
    std::size_t target_index = m;
    for (std::size_t i = 0; i < m; ++i) {
        if (corr.names[i] == target) target_index = i;
    }
    if (target_index == m) throw UnknownFeatureError("unknown feature: " + target);

    // Diagonal 0 marks a constant column; those never qualify as candidates.
    std::vector<std::size_t> candidates;
    for (std::size_t j = 0; j < m; ++j) {
        if (j != target_index && corr.values(j, j) == 1.0) candidates.push_back(j);
    }
    if (candidates.size() < static_cast<std::size_t>(k))
        throw NotEnoughFeaturesError("top_k_correlated: fewer than k non-constant features");

    std::stable_sort(candidates.begin(), candidates.end(), [&](std::size_t a, std::size_t b) {
        const double ca = corr.values(target_index, a);
        const double cb = corr.values(target_index, b);
        if (ca != cb) return ca > cb;
        return a < b;
    });
    std::vector<std::string> names;
    names.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) names.push_back(corr.names[candidates[static_cast<std::size_t>(i)]]);
    return names;
}

RelationSet discover_relations(const DataTable& table, const DiscoveryParams& params) {
    if (table.n_rows() <= term_count(params.k, params.l))
        throw TableTooSmallError("discover_relations: need more rows than embedding terms");

    const CorrelationMatrix corr = correlation_matrix(table);
    const std::vector<TermExponents> terms = enumerate_terms(params.k, params.l);

    RelationSet set;
    set.hyperparams = params;
    set.source_fingerprint = schema_fingerprint(table);

    for (std::size_t t = 0; t < table.n_cols(); ++t) {
        const std::string& target = table.names[t];
        if (corr.values(t, t) != 1.0) {
            set.diagnostics.push_back(target + ": skipped (constant column)");
            continue;
        }
        std::vector<std::string> features;
        try {
            features = top_k_correlated(corr, target, params.k);
        } catch (const NotEnoughFeaturesError&) {
            set.diagnostics.push_back(target + ": skipped (fewer than k candidate features)");
            continue;
        }
        const Eigen::MatrixXd design = embed(table, features, terms);
        const Eigen::Map<const Eigen::VectorXd> y(table.columns[t].data(),
                                                  static_cast<Eigen::Index>(table.n_rows()));
        Relation relation;
        relation.target = target;
        relation.features = features;
        relation.terms = terms;
        try {
            relation.fit = fit_ols(design, y, params.sigma2_denominator);
        } catch (const RankDeficientError&) {
            set.diagnostics.push_back(target + ": skipped (collinear embedding)");
            continue;
        } catch (const DegenerateTargetError&) {
            set.diagnostics.push_back(target + ": skipped (degenerate target)");
            continue;
        }
        if (relation.fit.r2 >= params.r2_threshold) {
            set.strong.push_back(std::move(relation));
        } else {
            set.weak.push_back(std::move(relation));
        }
    }
    return set;
}

}  // namespace polydrift
