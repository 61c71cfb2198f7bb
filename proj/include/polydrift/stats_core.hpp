#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "polydrift/tabular.hpp"

namespace polydrift {

/// Denominator used for the regression error variance sigma2 = RSS / denom.
///   Columns: divide by the number of design columns. The likelihood scale is
///            then independent of the sample size, which keeps Bayes-Factor
///            drift scores comparable across dataset sizes (null scores stay
///            near 0 instead of growing with sqrt(n)).
///   Rows:    divide by the row count (the Gaussian MLE).
enum class Sigma2Denominator { Columns, Rows };

/// sigma2 values below this floor are clamped before entering the
/// log-likelihood, so exact-fit relations stay finite.
inline constexpr double kSigma2Floor = 1e-12;

/// Designs whose smallest singular value is below kRankTolerance times the
/// largest are rejected as rank deficient.
inline constexpr double kRankTolerance = 1e-10;

struct OlsFit {
    Eigen::VectorXd beta;        // aligned with design columns; beta[0] is the
                                 // intercept when column 0 is constant 1
    double sigma2 = 0.0;         // RSS / denominator, see Sigma2Denominator
    double r2 = 0.0;             // 1 - RSS/TSS, clamped to [0, 1]
    std::size_t n_train = 0;     // rows used for the fit
    int dim = 0;                 // model dimension: len(beta) + 1 (error variance)
};

struct CorrelationMatrix {
    Eigen::MatrixXd values;  // m x m absolute Pearson correlations
    std::vector<std::string> names;
};

/// Sample Pearson correlation in [-1, 1]. Throws ZeroVarianceError when
/// either input is constant; lengths must match and be >= 2.
double pearson(std::span<const double> x, std::span<const double> y);

/// Spearman rank correlation (average ranks on ties).
double spearman(std::span<const double> x, std::span<const double> y);

/// Entry (i, j) = |pearson(X_i, X_j)|; entries involving a constant column
/// are 0, including that column's diagonal.
CorrelationMatrix correlation_matrix(const DataTable& table);

/// Least-squares fit via SVD (orthogonal decomposition; the normal equations
/// exist only as a test oracle). Throws InsufficientRowsError when n <= p,
/// RankDeficientError below kRankTolerance, DegenerateTargetError on a
/// constant target.
OlsFit fit_ols(const Eigen::MatrixXd& design, const Eigen::VectorXd& target,
               Sigma2Denominator denominator = Sigma2Denominator::Columns);

/// Exact Gaussian log-likelihood of the supplied data under the fit's frozen
/// parameters: -(n/2) ln(2 pi s2) - sum((x_i b - y_i)^2) / (2 s2), with s2 the
/// floored fit.sigma2. The data may differ from the training data.
double gaussian_log_likelihood(const OlsFit& fit, const Eigen::MatrixXd& design,
                               const Eigen::VectorXd& target);

/// BIC = -2 LL + dim ln(n), n = row count of the supplied data.
double bic(const OlsFit& fit, const Eigen::MatrixXd& design, const Eigen::VectorXd& target);

struct BayesFactor {
    double bf = 1.0;         // exp(-(bic_1 - bic_2)/2); may overflow to +inf
    double two_ln_bf = 0.0;  // -(bic_1 - bic_2); always finite, the canonical scale
};

BayesFactor bayes_factor(double bic_1, double bic_2);

}  // namespace polydrift
