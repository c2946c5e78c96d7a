/**
 * @file loader.hpp
 * @brief CSV reading and schema-driven conversion to a Dataset.
 */
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "cryptwnn/data/dataset.hpp"
#include "cryptwnn/data/schema.hpp"

namespace cryptwnn::data {

/// Untyped CSV cells. Row numbers in errors are 1-based file lines.
struct RawTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::size_t first_data_line = 1;
};

/// Comma-delimited, unquoted, UTF-8. Blank lines are skipped; a trailing CR is stripped.
RawTable read_csv(const std::filesystem::path& path, bool has_header);

/**
 * @brief Convert raw cells to a Dataset: numeric columns parsed, categorical columns
 * mapped through their level codes, target mapped through the label map.
 *
 * The target is the schema's target column. Throws DataError naming row and column on
 * arity mismatch, empty cells, unparseable numbers and unknown levels.
 */
Dataset encode_categorical(const RawTable& table, const DatasetSchema& schema);

/// read_csv followed by encode_categorical.
Dataset load_dataset(const std::filesystem::path& path, const DatasetSchema& schema);

/// Throws DataError if size or class counts differ from the schema's expected values.
void check_expected_counts(const Dataset& d, const DatasetSchema& schema);

}  // namespace cryptwnn::data
