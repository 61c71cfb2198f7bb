#include "polydrift/stats_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "polydrift/errors.hpp"

namespace polydrift {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Average ranks, ties share the mean of their rank range.
std::vector<double> ranks(std::span<const double> values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> rank(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        const double shared = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t t = i; t <= j; ++t) rank[order[t]] = shared;
        i = j + 1;
    }
    return rank;
}

}  // namespace

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw DimensionMismatchError("pearson: length mismatch");
    const std::size_t n = x.size();
    if (n < 2) throw DimensionMismatchError("pearson: need at least 2 points");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw ZeroVarianceError("pearson: constant input");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double spearman(std::span<const double> x, std::span<const double> y) {
    const auto rx = ranks(x);
    const auto ry = ranks(y);
    return pearson(rx, ry);
}

CorrelationMatrix correlation_matrix(const DataTable& table) {
    const std::size_t m = table.n_cols();
    const std::size_t n = table.n_rows();
    if (n < 2) throw DimensionMismatchError("correlation_matrix: need at least 2 rows");

    // Center columns once; constant columns get zero norm.
    Eigen::MatrixXd centered(n, m);
    Eigen::VectorXd norm(m);
    for (std::size_t j = 0; j < m; ++j) {
        const auto& column = table.columns[j];
        const double mean =
            std::accumulate(column.begin(), column.end(), 0.0) / static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) centered(i, j) = column[i] - mean;
        norm(j) = centered.col(j).norm();
    }

    CorrelationMatrix corr;
    corr.names = table.names;
    corr.values = Eigen::MatrixXd::Zero(m, m);
    for (std::size_t i = 0; i < m; ++i) {
        if (norm(i) == 0.0) continue;  // constant column: whole row/col stays 0
        corr.values(i, i) = 1.0;
        for (std::size_t j = i + 1; j < m; ++j) {
            if (norm(j) == 0.0) continue;
            const double r = centered.col(i).dot(centered.col(j)) / (norm(i) * norm(j));
            const double a = std::min(std::abs(r), 1.0);
            corr.values(i, j) = a;
            corr.values(j, i) = a;
        }
    }
    return corr;
}

OlsFit fit_ols(const Eigen::MatrixXd& design, const Eigen::VectorXd& target,
               Sigma2Denominator denominator) {
    const auto n = design.rows();
    const auto p = design.cols();
    if (target.size() != n) throw DimensionMismatchError("fit_ols: design/target row mismatch");
    if (n <= p) throw InsufficientRowsError("fit_ols: need more rows than design columns");

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    if (sv(0) == 0.0 || sv(sv.size() - 1) < kRankTolerance * sv(0))
        throw RankDeficientError("fit_ols: design is rank deficient");

    const double tmin = target.minCoeff();
    const double tmax = target.maxCoeff();
    if (tmin == tmax) throw DegenerateTargetError("fit_ols: target is constant");

    OlsFit fit;
    fit.beta = svd.solve(target);
    const Eigen::VectorXd residual = target - design * fit.beta;
    const double rss = residual.squaredNorm();
    const double tss = (target.array() - target.mean()).matrix().squaredNorm();
    fit.r2 = std::clamp(1.0 - rss / tss, 0.0, 1.0);
    const double denom = denominator == Sigma2Denominator::Columns ? static_cast<double>(p)
                                                                   : static_cast<double>(n);
    fit.sigma2 = rss / denom;
    fit.n_train = static_cast<std::size_t>(n);
    fit.dim = static_cast<int>(p) + 1;
    return fit;
}

double gaussian_log_likelihood(const OlsFit& fit, const Eigen::MatrixXd& design,
                               const Eigen::VectorXd& target) {
    if (design.cols() != fit.beta.size())
        throw DimensionMismatchError("log_likelihood: design width != coefficient count");
    if (design.rows() != target.size())
        throw DimensionMismatchError("log_likelihood: design/target row mismatch");
    const double s2 = std::max(fit.sigma2, kSigma2Floor);
    const double n = static_cast<double>(design.rows());
    const double rss = (design * fit.beta - target).squaredNorm();
    return -0.5 * n * std::log(kTwoPi * s2) - rss / (2.0 * s2);
}

double bic(const OlsFit& fit, const Eigen::MatrixXd& design, const Eigen::VectorXd& target) {
    const double ll = gaussian_log_likelihood(fit, design, target);
    const double n = static_cast<double>(design.rows());
    return -2.0 * ll + static_cast<double>(fit.dim) * std::log(n);
}

BayesFactor bayes_factor(double bic_1, double bic_2) {
    BayesFactor result;
    result.two_ln_bf = bic_2 - bic_1;  // == -(bic_1 - bic_2), without the -0.0
    result.bf = std::exp(0.5 * result.two_ln_bf);
    return result;
}

}  // namespace polydrift
