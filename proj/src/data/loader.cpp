#include "cryptwnn/data/loader.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include <fmt/format.h>

namespace cryptwnn::data {
namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        std::string cell = line.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        // Trim surrounding blanks; fixtures never rely on them.
        const auto b = cell.find_first_not_of(" \t");
        const auto e = cell.find_last_not_of(" \t");
        cells.push_back(b == std::string::npos ? std::string{} : cell.substr(b, e - b + 1));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return cells;
}

double parse_number(const std::string& cell, std::size_t line, const std::string& column) {
    double v = 0.0;
    const char* first = cell.data();
    const char* last = first + cell.size();
    if (!cell.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (cell.empty() || ec != std::errc{} || ptr != last || !std::isfinite(v)) {
        throw DataError(fmt::format("row {}, column {}: cannot parse '{}' as a number", line, column, cell));
    }
    return v;
}

}  // namespace

RawTable read_csv(const std::filesystem::path& path, bool has_header) {
    std::ifstream in(path);
    if (!in) throw DataError(fmt::format("cannot open {}", path.string()));
    RawTable t;
    std::string line;
    std::size_t line_no = 0;
    bool header_pending = has_header;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        if (header_pending) {
            t.header = split_line(line);
            header_pending = false;
            t.first_data_line = line_no + 1;
            continue;
        }
        if (t.rows.empty()) t.first_data_line = line_no;
        t.rows.push_back(split_line(line));
    }
    return t;
}

Dataset encode_categorical(const RawTable& table, const DatasetSchema& schema) {
    const std::size_t n_cols = schema.columns.size() + 1;
    // Column positions: the header decides when present, otherwise target is last.
    std::vector<std::size_t> feature_pos(schema.columns.size());
    std::size_t target_pos = n_cols - 1;
    if (!table.header.empty()) {
        if (table.header.size() != n_cols) {
            throw DataError(fmt::format("{}: header has {} columns, schema expects {}", schema.name,
                                        table.header.size(), n_cols));
        }
        auto find = [&](const std::string& name) {
            for (std::size_t i = 0; i < table.header.size(); ++i) {
                if (table.header[i] == name) return i;
            }
            throw DataError(fmt::format("{}: column {} missing from header", schema.name, name));
        };
        for (std::size_t c = 0; c < schema.columns.size(); ++c) feature_pos[c] = find(schema.columns[c].name);
        target_pos = find(schema.target_column);
    } else {
        for (std::size_t c = 0; c < schema.columns.size(); ++c) feature_pos[c] = c;
    }

    Dataset d;
    d.name = schema.name;
    d.n_features = schema.columns.size();
    for (const auto& c : schema.columns) d.feature_names.push_back(c.name);
    d.features.reserve(table.rows.size() * d.n_features);
    d.labels.reserve(table.rows.size());

    std::vector<double> x(d.n_features);
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& cells = table.rows[r];
        const std::size_t line = table.first_data_line + r;
        if (cells.size() != n_cols) {
            throw DataError(fmt::format("{}: row {} has {} fields, expected {}", schema.name, line,
                                        cells.size(), n_cols));
        }
        for (std::size_t c = 0; c < d.n_features; ++c) {
            const auto& spec = schema.columns[c];
            const auto& cell = cells[feature_pos[c]];
            if (cell.empty()) {
                throw DataError(fmt::format("{}: row {}, column {}: missing value", schema.name, line, spec.name));
            }
            if (spec.type == ColumnType::categorical) {
                const auto it = spec.levels.find(cell);
                if (it == spec.levels.end()) {
                    throw DataError(fmt::format("{}: row {}, column {}: unknown level '{}'", schema.name,
                                                line, spec.name, cell));
                }
                x[c] = it->second;
            } else {
                x[c] = parse_number(cell, line, spec.name);
            }
        }
        const auto& raw_label = cells[target_pos];
        const auto it = schema.label_map.find(raw_label);
        if (it == schema.label_map.end()) {
            throw DataError(fmt::format("{}: row {}, column {}: unknown target value '{}'", schema.name,
                                        line, schema.target_column, raw_label));
        }
        d.push_back(x, it->second);
    }
    d.provenance.push_back(fmt::format("loaded {} rows from {}{}", d.size(), schema.file,
                                       schema.surrogate ? " (synthetic stand-in)" : ""));
    bool any_categorical = false;
    for (const auto& c : schema.columns) any_categorical |= c.type == ColumnType::categorical;
    if (any_categorical) d.provenance.push_back("ordinal encoding of categorical columns");
    return d;
}

Dataset load_dataset(const std::filesystem::path& path, const DatasetSchema& schema) {
    return encode_categorical(read_csv(path, schema.has_header), schema);
}

void check_expected_counts(const Dataset& d, const DatasetSchema& schema) {
    const auto c = d.class_counts();
    if (d.size() != schema.expected_samples || c[0] != schema.expected_class0 ||
        c[1] != schema.expected_class1) {
        throw DataError(fmt::format("{}: loaded {} rows ({}/{}), expected {} ({}/{})", schema.name, d.size(),
                                    c[0], c[1], schema.expected_samples, schema.expected_class0,
                                    schema.expected_class1));
    }
}

}  // namespace cryptwnn::data
