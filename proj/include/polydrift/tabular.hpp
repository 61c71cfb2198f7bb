#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace polydrift {

/// Column-oriented numeric table with named features. Immutable by
/// convention after construction; all operations below are pure functions,
/// so concurrent reads are safe.
struct DataTable {
    std::vector<std::string> names;
    std::vector<std::vector<double>> columns;

    std::size_t n_rows() const { return columns.empty() ? 0 : columns.front().size(); }
    std::size_t n_cols() const { return columns.size(); }

    std::optional<std::size_t> column_index(std::string_view name) const;
    const std::vector<double>& column(std::string_view name) const;  // throws UnknownFeatureError
};

/// Validates the DataTable invariants (equal column lengths, n >= 1, unique
/// non-empty names, all cells finite) and returns the table.
DataTable make_table(std::vector<std::string> names, std::vector<std::vector<double>> columns);

struct ColumnStats {
    double mean = 0.0;
    double std = 0.0;  // population (1/n) standard deviation
    double min = 0.0;
    double max = 0.0;
};

struct SplitPair {
    DataTable baseline;
    DataTable field;
    std::uint64_t seed = 0;
    double fraction = 0.0;
};

struct CsvOptions {
    bool drop_incomplete_rows = false;
    std::optional<std::vector<std::string>> select_columns;
};

/// Parse RFC-4180-style CSV text (header row, '.' decimal point, UTF-8).
/// Columns where no cell parses as a finite number are excluded; rows with an
/// unparseable cell in a retained column are dropped when
/// drop_incomplete_rows is set and raise ParseError otherwise.
DataTable parse_csv(std::string_view text, const CsvOptions& options = {});
DataTable load_csv(const std::filesystem::path& path, const CsvOptions& options = {});

std::string to_csv(const DataTable& table);
void write_csv(const DataTable& table, const std::filesystem::path& path);

/// Baseline gets floor(fraction * n) rows chosen uniformly at random without
/// replacement; field gets the rest. Row order within each side preserves the
/// input order. Deterministic per seed.
SplitPair split_rows(const DataTable& table, double fraction, std::uint64_t seed);

ColumnStats column_stats(std::span<const double> column);

/// Center and scale to population std 1. Returned stats carry the original
/// mean/std for inversion. Throws ZeroVarianceError on constant input.
std::pair<std::vector<double>, ColumnStats> standardize(std::span<const double> column);
std::vector<double> unstandardize(std::span<const double> standardized, const ColumnStats& stats);

bool is_constant(std::span<const double> column);

/// FNV-1a hash (hex) over the column names and row count.
std::string schema_fingerprint(const DataTable& table);

}  // namespace polydrift
