#pragma once

// Synthetic dataset builders shared by the unit and acceptance suites.

#include <cmath>
#include <cstdint>
#include <vector>

#include "polydrift/rng.hpp"
#include "polydrift/tabular.hpp"

namespace testdata {

// Six columns; y is driven by x1, x2 with a small interaction and 5%-of-signal
// noise (a strong relation, R^2 ~ 0.9975); x4 leans on x3 (a weak relation,
// R^2 ~ 0.35); x5 is pure noise.
inline polydrift::DataTable planted_table(std::uint64_t seed, std::size_t n) {
    polydrift::Rng rng(seed);
    std::vector<double> x1(n), x2(n), x3(n), x4(n), x5(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        x1[i] = rng.gaussian();
        x2[i] = rng.gaussian();
        x3[i] = rng.gaussian();
        x4[i] = 0.75 * x3[i] + rng.gaussian();
        x5[i] = rng.gaussian();
        y[i] = 3.0 + 2.0 * x1[i] - x2[i] + 0.5 * x1[i] * x2[i];
    }
    const polydrift::ColumnStats signal = polydrift::column_stats(y);
    for (std::size_t i = 0; i < n; ++i) y[i] += 0.05 * signal.std * rng.gaussian();
    return polydrift::make_table({"x1", "x2", "x3", "x4", "x5", "y"},
                                 {std::move(x1), std::move(x2), std::move(x3), std::move(x4),
                                  std::move(x5), std::move(y)});
}

// Mutually independent standard-normal columns named c0..c{m-1}.
inline polydrift::DataTable noise_table(std::uint64_t seed, std::size_t n, std::size_t m) {
    polydrift::Rng rng(seed);
    std::vector<std::string> names;
    std::vector<std::vector<double>> columns;
    for (std::size_t j = 0; j < m; ++j) {
        names.push_back("c" + std::to_string(j));
        std::vector<double> column(n);
        for (std::size_t i = 0; i < n; ++i) column[i] = rng.gaussian();
        columns.push_back(std::move(column));
    }
    return polydrift::make_table(std::move(names), std::move(columns));
}

// Loan-style dataset for the unfairness experiments: mortgage depends mostly
// on income and card spending (relevant), mildly on age and family size
// (sensitive); income/ccavg and age/famsize pairs are correlated through two
// latent factors with a small cross-link.
inline polydrift::DataTable loan_table(std::uint64_t seed, std::size_t n) {
    polydrift::Rng rng(seed);
    std::vector<double> income(n), ccavg(n), age(n), famsize(n), mortgage(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double f1 = rng.gaussian();
        const double f2 = rng.gaussian();
        income[i] = f1;
        ccavg[i] = 0.8 * f1 + 0.6 * rng.gaussian();
        age[i] = 0.3 * f1 + 0.95 * f2;
        famsize[i] = 0.7 * f2 + 0.7 * rng.gaussian();
        mortgage[i] = 1.5 * income[i] + 1.0 * ccavg[i] + 0.6 * age[i] + 0.4 * famsize[i] +
                      0.3 * rng.gaussian();
    }
    return polydrift::make_table({"income", "ccavg", "age", "famsize", "mortgage"},
                                 {std::move(income), std::move(ccavg), std::move(age),
                                  std::move(famsize), std::move(mortgage)});
}

}  // namespace testdata
