#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "oracles.hpp"
#include "polydrift/errors.hpp"
#include "polydrift/relation_discovery.hpp"
#include "polydrift/rng.hpp"
#include "test_data.hpp"

using namespace polydrift;

namespace {

std::vector<std::vector<int>> raw(const std::vector<TermExponents>& terms) {
    std::vector<std::vector<int>> out;
    for (const auto& t : terms) out.push_back(t.exponents);
    return out;
}

}  // namespace

TEST_CASE("enumerate_terms reproduces the canonical k=l=2 embedding") {
    const auto terms = raw(enumerate_terms(2, 2));
    const std::vector<std::vector<int>> expected{{0, 0}, {1, 0}, {0, 1}, {1, 1}, {2, 0}, {0, 2}};
    CHECK(terms == expected);
}

TEST_CASE("enumerate_terms degenerate and counted cases") {
    CHECK(raw(enumerate_terms(1, 1)) == std::vector<std::vector<int>>{{0}, {1}});
    CHECK(enumerate_terms(2, 3).size() == 10);
    CHECK(enumerate_terms(1, 0).size() == 1);

    for (int k = 1; k <= 6; ++k) {
        for (int l = 0; l <= 6; ++l) {
            const auto terms = enumerate_terms(k, l);
            CHECK(terms.size() == oracles::pascal_binomial(k + l, k));
            CHECK(terms.size() == term_count(k, l));
            // Distinct, degree-graded, first term constant.
            std::set<std::vector<int>> unique;
            int previous_degree = 0;
            for (const auto& term : terms) {
                CHECK(unique.insert(term.exponents).second);
                CHECK(term.degree() >= previous_degree);
                CHECK(term.degree() <= l);
                previous_degree = term.degree();
            }
            CHECK(terms.front().degree() == 0);
        }
    }
}

TEST_CASE("embed evaluates monomials rowwise") {
    const DataTable t = make_table({"a"}, {{2.0, 3.0}});
    const Eigen::MatrixXd design = embed(t, {"a"}, enumerate_terms(1, 2));
    CHECK(design.rows() == 2);
    CHECK(design.cols() == 3);
    CHECK(design(0, 0) == 1.0);
    CHECK(design(1, 0) == 1.0);
    CHECK(design(0, 1) == 2.0);
    CHECK(design(1, 1) == 3.0);
    CHECK(design(0, 2) == 4.0);
    CHECK(design(1, 2) == 9.0);
}

TEST_CASE("embed ignores zero-exponent features") {
    const DataTable t = make_table({"a", "b"}, {{2.0, 5.0}, {7.0, 11.0}});
    const std::vector<TermExponents> terms{TermExponents{{1, 0}}, TermExponents{{0, 0}}};
    const Eigen::MatrixXd design = embed(t, {"a", "b"}, terms);
    CHECK(design(0, 0) == 2.0);  // (1,0) is just column a
    CHECK(design(1, 0) == 5.0);
    CHECK(design(0, 1) == 1.0);  // all-zeros term is the constant
    CHECK(design(1, 1) == 1.0);
}

TEST_CASE("embed rejects unknown features") {
    const DataTable t = make_table({"a"}, {{1.0, 2.0}});
    CHECK_THROWS_AS(embed(t, {"zzz"}, enumerate_terms(1, 1)), UnknownFeatureError);
}

TEST_CASE("top_k_correlated picks the strongest correlates") {
    Rng rng(3);
    const std::size_t n = 400;
    std::vector<double> x1(n), x2(n), x3(n);
    for (std::size_t i = 0; i < n; ++i) {
        x1[i] = rng.gaussian();
        x2[i] = 2.0 * x1[i];
        x3[i] = rng.gaussian();
    }
    const DataTable t = make_table({"x1", "x2", "x3"}, {x1, x2, x3});
    const CorrelationMatrix corr = correlation_matrix(t);
    CHECK(top_k_correlated(corr, "x1", 1) == std::vector<std::string>{"x2"});
    // k = m-1 returns everything else, sorted by descending correlation.
    CHECK(top_k_correlated(corr, "x1", 2) == std::vector<std::string>{"x2", "x3"});
    CHECK_THROWS_AS(top_k_correlated(corr, "x1", 3), NotEnoughFeaturesError);
    CHECK_THROWS_AS(top_k_correlated(corr, "nope", 1), UnknownFeatureError);
}

TEST_CASE("top_k_correlated breaks exact ties by column index") {
    // b and c are identical, so both correlate equally with a.
    std::vector<double> a{1.0, 2.0, 3.0, 4.0};
    std::vector<double> b{1.5, 2.5, 3.0, 4.5};
    const DataTable t = make_table({"a", "b", "c"}, {a, b, b});
    const CorrelationMatrix corr = correlation_matrix(t);
    CHECK(top_k_correlated(corr, "a", 1) == std::vector<std::string>{"b"});
}

TEST_CASE("top_k_correlated skips constant columns") {
    const DataTable t = make_table({"a", "b", "c"},
                                   {{1.0, 2.0, 3.0}, {9.0, 9.0, 9.0}, {2.0, 1.0, 3.0}});
    const CorrelationMatrix corr = correlation_matrix(t);
    CHECK(top_k_correlated(corr, "a", 1) == std::vector<std::string>{"c"});
    CHECK_THROWS_AS(top_k_correlated(corr, "a", 2), NotEnoughFeaturesError);
}

TEST_CASE("discover_relations finds the planted relation with sane coefficients") {
    const DataTable t = testdata::planted_table(21, 2000);
    const RelationSet set = discover_relations(t);

    const auto planted = std::find_if(set.strong.begin(), set.strong.end(),
                                      [](const Relation& r) { return r.target == "y"; });
    REQUIRE(planted != set.strong.end());
    CHECK(planted->features == std::vector<std::string>{"x1", "x2"});
    CHECK(planted->fit.r2 >= 0.99);

    // Standard errors from the unbiased residual variance and (X^T X)^{-1}.
    const Eigen::MatrixXd design = embed(t, planted->features, planted->terms);
    const auto& y = t.column("y");
    const Eigen::Map<const Eigen::VectorXd> target(y.data(), static_cast<Eigen::Index>(y.size()));
    const Eigen::VectorXd residual = target - design * planted->fit.beta;
    const double sigma2_unbiased =
        residual.squaredNorm() / static_cast<double>(design.rows() - design.cols());
    const Eigen::MatrixXd xtx_inverse = (design.transpose() * design).inverse();
    const std::vector<double> truth{3.0, 2.0, -1.0, 0.5, 0.0, 0.0};
    for (Eigen::Index j = 0; j < planted->fit.beta.size(); ++j) {
        const double se = std::sqrt(sigma2_unbiased * xtx_inverse(j, j));
        CHECK(std::abs(planted->fit.beta(j) - truth[static_cast<std::size_t>(j)]) <= 3.0 * se);
    }

    // No relation may use its own target as a feature.
    for (const auto* group : {&set.strong, &set.weak}) {
        for (const auto& relation : *group) {
            CHECK(std::find(relation.features.begin(), relation.features.end(),
                            relation.target) == relation.features.end());
            CHECK(relation.terms.front().degree() == 0);
            CHECK(relation.fit.beta.size() ==
                  static_cast<Eigen::Index>(relation.terms.size()));
        }
    }
}

TEST_CASE("discover_relations on pure noise rarely finds strong relations") {
    int empty = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const DataTable t = testdata::noise_table(1000 + seed, 300, 4);
        if (discover_relations(t).strong.empty()) ++empty;
    }
    CHECK(empty >= 99);
}

TEST_CASE("zero threshold sends every fitted relation to strong") {
    const DataTable t = testdata::noise_table(55, 200, 4);
    DiscoveryParams params;
    params.r2_threshold = 0.0;  // vacuous threshold
    const RelationSet set = discover_relations(t, params);
    CHECK(set.weak.empty());
    CHECK(set.strong.size() == 4);
}

TEST_CASE("discover_relations is deterministic") {
    const DataTable t = testdata::planted_table(31, 800);
    const RelationSet a = discover_relations(t);
    const RelationSet b = discover_relations(t);
    REQUIRE(a.strong.size() == b.strong.size());
    REQUIRE(a.weak.size() == b.weak.size());
    for (std::size_t i = 0; i < a.strong.size(); ++i) {
        CHECK(a.strong[i].target == b.strong[i].target);
        CHECK(a.strong[i].fit.beta == b.strong[i].fit.beta);
    }
    CHECK(a.source_fingerprint == b.source_fingerprint);
}

TEST_CASE("refitting a strong relation reproduces its coefficients") {
    const DataTable t = testdata::planted_table(41, 1000);
    const RelationSet set = discover_relations(t);
    REQUIRE(!set.strong.empty());
    for (const auto& relation : set.strong) {
        const Eigen::MatrixXd design = embed(t, relation.features, relation.terms);
        const auto& y = t.column(relation.target);
        const Eigen::Map<const Eigen::VectorXd> target(y.data(),
                                                       static_cast<Eigen::Index>(y.size()));
        const OlsFit refit = fit_ols(design, target, set.hyperparams.sigma2_denominator);
        CHECK((refit.beta - relation.fit.beta).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("positive rescaling changes beta but not R2 or the partition") {
    const DataTable t = testdata::planted_table(51, 1000);
    DataTable scaled = t;
    const auto x1 = scaled.column_index("x1");
    REQUIRE(x1.has_value());
    for (double& v : scaled.columns[*x1]) v *= 12.5;

    const RelationSet a = discover_relations(t);
    const RelationSet b = discover_relations(scaled);
    REQUIRE(a.strong.size() == b.strong.size());
    REQUIRE(a.weak.size() == b.weak.size());
    for (std::size_t i = 0; i < a.strong.size(); ++i) {
        CHECK(a.strong[i].target == b.strong[i].target);
        CHECK(b.strong[i].fit.r2 == doctest::Approx(a.strong[i].fit.r2).epsilon(1e-9));
    }
    for (std::size_t i = 0; i < a.weak.size(); ++i) {
        CHECK(a.weak[i].target == b.weak[i].target);
        CHECK(b.weak[i].fit.r2 == doctest::Approx(a.weak[i].fit.r2).epsilon(1e-9));
    }
}

TEST_CASE("discover_relations rejects tables smaller than the embedding") {
    const DataTable t = testdata::noise_table(1, 6, 4);  // needs n > 6 for k=l=2
    CHECK_THROWS_AS(discover_relations(t), TableTooSmallError);
}

TEST_CASE("constant columns are skipped with diagnostics") {
    DataTable t = testdata::noise_table(77, 100, 4);
    for (double& v : t.columns[2]) v = 3.0;
    const RelationSet set = discover_relations(t);
    for (const auto* group : {&set.strong, &set.weak}) {
        for (const auto& relation : *group) {
            CHECK(relation.target != "c2");
            CHECK(std::find(relation.features.begin(), relation.features.end(), "c2") ==
                  relation.features.end());
        }
    }
    CHECK(!set.diagnostics.empty());
}

TEST_CASE("collinear embeddings are skipped, not solved") {
    // A 0/1 column has x^2 == x, so its embedding is rank deficient whenever
    // it is chosen as a feature.
    Rng rng(88);
    const std::size_t n = 200;
    std::vector<double> flag(n), echo(n), other(n);
    for (std::size_t i = 0; i < n; ++i) {
        flag[i] = rng.uniform01() < 0.5 ? 0.0 : 1.0;
        echo[i] = flag[i] + 0.01 * rng.gaussian();
        other[i] = rng.gaussian();
    }
    const DataTable t = make_table({"flag", "echo", "other"}, {flag, echo, other});
    const RelationSet set = discover_relations(t);
    bool skipped_for_collinearity = false;
    for (const auto& diagnostic : set.diagnostics) {
        if (diagnostic.find("collinear") != std::string::npos) skipped_for_collinearity = true;
    }
    CHECK(skipped_for_collinearity);
}
