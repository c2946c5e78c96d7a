/**
 * @file schema.hpp
 * @brief Per-dataset descriptors stored as JSON next to the CSV fixtures.
 *
 * Schema file keys:
 *   name, display_name      identifier and table label
 *   group, order            result grouping ("health" or "finance") and row order
 *   file, sha256            CSV file name relative to the schema, hex SHA-256 of its bytes
 *   has_header              whether the first CSV line holds column names
 *   source, surrogate       provenance text; true when the file is a synthetic stand-in
 *   columns                 [{name, type: "numeric" | "categorical", levels: {level: code}}]
 *   target                  {column, mapping: {raw value: 0 | 1}}
 *   expected                {samples, class0, class1} counts before balancing
 *   preprocessing           {standardize, smote, ordinal_encode}
 */
#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace cryptwnn::data {

enum class ColumnType { numeric, categorical };

struct ColumnSpec {
    std::string name;
    ColumnType type = ColumnType::numeric;
    std::map<std::string, double> levels;  ///< categorical only
};

struct Preprocessing {
    bool standardize = false;
    bool smote = false;
    bool ordinal_encode = false;
};

struct DatasetSchema {
    std::string name;
    std::string display_name;
    std::string group;
    int order = 0;
    std::string file;
    std::string sha256;
    bool has_header = true;
    std::string source;
    bool surrogate = false;
    std::vector<ColumnSpec> columns;  ///< feature columns, in CSV order
    std::string target_column;
    std::map<std::string, int> label_map;
    std::size_t expected_samples = 0;
    std::size_t expected_class0 = 0;
    std::size_t expected_class1 = 0;
    Preprocessing preprocessing;
    std::filesystem::path directory;  ///< directory the schema was loaded from

    std::filesystem::path csv_path() const { return directory / file; }
};

/// Parse and validate one schema file. Level maps must be injective per column.
DatasetSchema load_schema(const std::filesystem::path& path);

/// Every `*.schema.json` in `dir`, sorted by (group order, order).
std::vector<DatasetSchema> load_registry(const std::filesystem::path& dir);

/// Registry entry by name; throws DataError listing the known names.
const DatasetSchema& find_schema(const std::vector<DatasetSchema>& registry, const std::string& name);

/// Directory of the bundled fixtures, fixed at build time.
std::filesystem::path default_dataset_dir();

/// Lowercase hex SHA-256 of a file's bytes.
std::string file_sha256(const std::filesystem::path& path);

}  // namespace cryptwnn::data
