#include "polydrift/tabular.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

#include "polydrift/errors.hpp"
#include "polydrift/io.hpp"
#include "polydrift/rng.hpp"

namespace polydrift {

namespace {

// Strict cell parse: the whole trimmed cell must be a finite number.
std::optional<double> parse_cell(std::string_view cell) {
    std::size_t begin = 0;
    std::size_t end = cell.size();
    while (begin < end && (cell[begin] == ' ' || cell[begin] == '\t')) ++begin;
    while (end > begin && (cell[end - 1] == ' ' || cell[end - 1] == '\t')) --end;
    if (begin == end) return std::nullopt;
    double value = 0.0;
    const char* first = cell.data() + begin;
    const char* last = cell.data() + end;
    const auto result = std::from_chars(first, last, value);
    if (result.ec != std::errc() || result.ptr != last) return std::nullopt;
    if (!std::isfinite(value)) return std::nullopt;
    return value;
}

// RFC-4180-style record reader: quoted fields may contain commas, quotes
// escaped as "", and newlines. Accepts LF or CRLF row terminators.
std::vector<std::vector<std::string>> read_records(std::string_view text) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool quoted = false;
    bool any_field_content = false;

    auto end_field = [&] {
        record.push_back(std::move(field));
        field.clear();
    };
    auto end_record = [&] {
        end_field();
        records.push_back(std::move(record));
        record.clear();
        any_field_content = false;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        switch (c) {
            case '"':
                quoted = true;
                any_field_content = true;
                break;
            case ',':
                end_field();
                any_field_content = true;
                break;
            case '\r':
                break;
            case '\n':
                end_record();
                break;
            default:
                field += c;
                any_field_content = true;
        }
    }
    if (any_field_content || !field.empty() || !record.empty()) end_record();
    return records;
}

std::string csv_quote(const std::string& name) {
    if (name.find_first_of(",\"\n\r") == std::string::npos) return name;
    std::string quoted = "\"";
    for (const char c : name) {
        if (c == '"') quoted += "\"\"";
        else quoted += c;
    }
    quoted += '"';
    return quoted;
}

DataTable take_rows(const DataTable& table, const std::vector<std::size_t>& rows) {
    DataTable out;
    out.names = table.names;
    out.columns.reserve(table.n_cols());
    for (const auto& column : table.columns) {
        std::vector<double> values;
        values.reserve(rows.size());
        for (const std::size_t r : rows) values.push_back(column[r]);
        out.columns.push_back(std::move(values));
    }
    return out;
}

}  // namespace

std::optional<std::size_t> DataTable::column_index(std::string_view name) const {
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i] == name) return i;
    }
    return std::nullopt;
}

const std::vector<double>& DataTable::column(std::string_view name) const {
    const auto index = column_index(name);
    if (!index) throw UnknownFeatureError("unknown feature: " + std::string(name));
    return columns[*index];
}

DataTable make_table(std::vector<std::string> names, std::vector<std::vector<double>> columns) {
    if (names.size() != columns.size())
        throw Error("make_table: names and columns differ in count");
    if (columns.empty()) throw EmptyTableError("table has no columns");
    const std::size_t n = columns.front().size();
    if (n == 0) throw EmptyTableError("table has no rows");
    std::set<std::string_view> seen;
    for (std::size_t j = 0; j < names.size(); ++j) {
        if (names[j].empty()) throw Error("make_table: empty feature name");
        if (!seen.insert(names[j]).second)
            throw Error("make_table: duplicate feature name '" + names[j] + "'");
        if (columns[j].size() != n)
            throw Error("make_table: column '" + names[j] + "' has mismatched length");
        for (const double v : columns[j]) {
            if (!std::isfinite(v))
                throw Error("make_table: non-finite value in column '" + names[j] + "'");
        }
    }
    return DataTable{std::move(names), std::move(columns)};
}

DataTable parse_csv(std::string_view text, const CsvOptions& options) {
    const auto records = read_records(text);
    if (records.empty()) throw EmptyTableError("CSV has no header row");
    const auto& header = records.front();
    const std::size_t width = header.size();

    std::vector<std::size_t> retained;  // indices into the header
    if (options.select_columns) {
        for (const auto& wanted : *options.select_columns) {
            const auto it = std::find(header.begin(), header.end(), wanted);
            if (it == header.end())
                throw UnknownFeatureError("selected column not in header: " + wanted);
            retained.push_back(static_cast<std::size_t>(it - header.begin()));
        }
    } else {
        // A column is numeric when at least one cell parses as a finite number.
        std::vector<bool> numeric(width, false);
        for (std::size_t r = 1; r < records.size(); ++r) {
            for (std::size_t c = 0; c < width && c < records[r].size(); ++c) {
                if (!numeric[c] && parse_cell(records[r][c])) numeric[c] = true;
            }
        }
        for (std::size_t c = 0; c < width; ++c) {
            if (numeric[c]) retained.push_back(c);
        }
    }
    if (retained.empty()) throw EmptyTableError("no numeric columns in CSV");

    std::vector<std::string> names;
    names.reserve(retained.size());
    for (const std::size_t c : retained) names.push_back(header[c]);

    std::vector<std::vector<double>> columns(retained.size());
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& record = records[r];
        std::vector<double> row;
        row.reserve(retained.size());
        bool ok = true;
        for (std::size_t j = 0; j < retained.size(); ++j) {
            const std::size_t c = retained[j];
            const std::string_view cell = c < record.size() ? std::string_view(record[c]) : "";
            const auto value = parse_cell(cell);
            if (!value) {
                if (options.drop_incomplete_rows) {
                    ok = false;
                    break;
                }
                throw ParseError(r, header[c], std::string(cell));
            }
            row.push_back(*value);
        }
        if (!ok) continue;
        for (std::size_t j = 0; j < retained.size(); ++j) columns[j].push_back(row[j]);
    }
    if (columns.front().empty()) throw EmptyTableError("no rows remain after parsing");
    return make_table(std::move(names), std::move(columns));
}

DataTable load_csv(const std::filesystem::path& path, const CsvOptions& options) {
    return parse_csv(read_file(path), options);
}

std::string to_csv(const DataTable& table) {
    std::string out;
    for (std::size_t j = 0; j < table.n_cols(); ++j) {
        if (j) out += ',';
        out += csv_quote(table.names[j]);
    }
    out += '\n';
    const std::size_t n = table.n_rows();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < table.n_cols(); ++j) {
            if (j) out += ',';
            out += format_double(table.columns[j][i]);
        }
        out += '\n';
    }
    return out;
}

void write_csv(const DataTable& table, const std::filesystem::path& path) {
    write_file_atomic(path, to_csv(table));
}

SplitPair split_rows(const DataTable& table, double fraction, std::uint64_t seed) {
    if (!(fraction > 0.0 && fraction < 1.0))
        throw InvalidFractionError("fraction must be in (0, 1)");
    const std::size_t n = table.n_rows();
    const auto baseline_n = static_cast<std::size_t>(fraction * static_cast<double>(n));
    if (baseline_n == 0 || baseline_n == n)
        throw InvalidFractionError("split leaves one side empty");

    Rng rng(seed);
    std::vector<std::size_t> picked = sample_indices(rng, n, baseline_n);
    std::vector<bool> in_baseline(n, false);
    for (const std::size_t i : picked) in_baseline[i] = true;

    std::vector<std::size_t> baseline_rows, field_rows;
    baseline_rows.reserve(baseline_n);
    field_rows.reserve(n - baseline_n);
    for (std::size_t i = 0; i < n; ++i) {
        (in_baseline[i] ? baseline_rows : field_rows).push_back(i);
    }
    return SplitPair{take_rows(table, baseline_rows), take_rows(table, field_rows), seed, fraction};
}

ColumnStats column_stats(std::span<const double> column) {
    ColumnStats stats;
    const std::size_t n = column.size();
    double sum = 0.0;
    stats.min = column.front();
    stats.max = column.front();
    for (const double v : column) {
        sum += v;
        stats.min = std::min(stats.min, v);
        stats.max = std::max(stats.max, v);
    }
    stats.mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (const double v : column) {
        const double d = v - stats.mean;
        ss += d * d;
    }
    stats.std = std::sqrt(ss / static_cast<double>(n));
    return stats;
}

std::pair<std::vector<double>, ColumnStats> standardize(std::span<const double> column) {
    const ColumnStats stats = column_stats(column);
    if (stats.std == 0.0) throw ZeroVarianceError("cannot standardize a constant column");
    std::vector<double> out;
    out.reserve(column.size());
    for (const double v : column) out.push_back((v - stats.mean) / stats.std);
    return {std::move(out), stats};
}

std::vector<double> unstandardize(std::span<const double> standardized, const ColumnStats& stats) {
    std::vector<double> out;
    out.reserve(standardized.size());
    for (const double v : standardized) out.push_back(v * stats.std + stats.mean);
    return out;
}

bool is_constant(std::span<const double> column) {
    for (const double v : column) {
        if (v != column.front()) return false;
    }
    return true;
}

std::string schema_fingerprint(const DataTable& table) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    auto feed = [&hash](std::string_view text) {
        for (const char c : text) {
            hash ^= static_cast<unsigned char>(c);
            hash *= 0x100000001b3ULL;
        }
    };
    for (const auto& name : table.names) {
        feed(name);
        feed("\x1f");
    }
    feed("#");
    feed(std::to_string(table.n_rows()));
    std::ostringstream hex;
    hex << std::hex;
    hex.width(16);
    hex.fill('0');
    hex << hash;
    return hex.str();
}

}  // namespace polydrift
