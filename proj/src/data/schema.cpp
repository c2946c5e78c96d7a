#include "cryptwnn/data/schema.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <fstream>
#include <set>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "cryptwnn/data/dataset.hpp"

#ifndef CRYPTWNN_DATASET_DIR
#define CRYPTWNN_DATASET_DIR "data/datasets"
#endif

namespace cryptwnn::data {
namespace {

using nlohmann::json;

int group_rank(const std::string& group) {
    if (group == "health") return 0;
    if (group == "finance") return 1;
    return 2;
}

ColumnSpec parse_column(const json& j, const std::string& schema_name) {
    ColumnSpec c;
    c.name = j.at("name").get<std::string>();
    const auto type = j.at("type").get<std::string>();
    if (type == "numeric") {
        c.type = ColumnType::numeric;
    } else if (type == "categorical") {
        c.type = ColumnType::categorical;
        std::set<double> codes;
        for (const auto& [level, code] : j.at("levels").items()) {
            const double v = code.get<double>();
            if (!codes.insert(v).second) {
                throw DataError(fmt::format("{}: column {} maps two levels to {}", schema_name,
                                            c.name, v));
            }
            c.levels.emplace(level, v);
        }
        if (c.levels.empty()) {
            throw DataError(fmt::format("{}: column {} has no levels", schema_name, c.name));
        }
    } else {
        throw DataError(fmt::format("{}: column {} has unknown type '{}'", schema_name, c.name, type));
    }
    return c;
}

}  // namespace

DatasetSchema load_schema(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError(fmt::format("cannot open schema {}", path.string()));
    DatasetSchema s;
    try {
        const json j = json::parse(in);
        s.name = j.at("name").get<std::string>();
        s.display_name = j.value("display_name", s.name);
        s.group = j.value("group", std::string{});
        s.order = j.value("order", 0);
        s.file = j.at("file").get<std::string>();
        s.sha256 = j.value("sha256", std::string{});
        s.has_header = j.value("has_header", true);
        s.source = j.value("source", std::string{});
        s.surrogate = j.value("surrogate", false);
        for (const auto& c : j.at("columns")) s.columns.push_back(parse_column(c, s.name));
        const auto& t = j.at("target");
        s.target_column = t.at("column").get<std::string>();
        std::set<int> seen;
        for (const auto& [raw, label] : t.at("mapping").items()) {
            const int v = label.get<int>();
            if (v != 0 && v != 1) {
                throw DataError(fmt::format("{}: target value {} maps to {}", s.name, raw, v));
            }
            seen.insert(v);
            s.label_map.emplace(raw, v);
        }
        if (seen.size() != 2) throw DataError(fmt::format("{}: target mapping must cover 0 and 1", s.name));
        const auto& e = j.at("expected");
        s.expected_samples = e.at("samples").get<std::size_t>();
        s.expected_class0 = e.at("class0").get<std::size_t>();
        s.expected_class1 = e.at("class1").get<std::size_t>();
        if (j.contains("preprocessing")) {
            const auto& p = j["preprocessing"];
            s.preprocessing.standardize = p.value("standardize", false);
            s.preprocessing.smote = p.value("smote", false);
            s.preprocessing.ordinal_encode = p.value("ordinal_encode", false);
        }
    } catch (const json::exception& e) {
        throw DataError(fmt::format("schema {}: {}", path.string(), e.what()));
    }
    s.directory = path.parent_path();
    return s;
}

std::vector<DatasetSchema> load_registry(const std::filesystem::path& dir) {
    std::vector<DatasetSchema> out;
    if (!std::filesystem::is_directory(dir)) {
        throw DataError(fmt::format("dataset directory {} does not exist", dir.string()));
    }
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        const auto name = entry.path().filename().string();
        if (name.size() > 12 && name.ends_with(".schema.json")) out.push_back(load_schema(entry.path()));
    }
    std::sort(out.begin(), out.end(), [](const DatasetSchema& a, const DatasetSchema& b) {
        return std::tuple(group_rank(a.group), a.order, a.name) <
               std::tuple(group_rank(b.group), b.order, b.name);
    });
    return out;
}

const DatasetSchema& find_schema(const std::vector<DatasetSchema>& registry, const std::string& name) {
    for (const auto& s : registry) {
        if (s.name == name) return s;
    }
    std::string known;
    for (const auto& s : registry) known += (known.empty() ? "" : ", ") + s.name;
    throw DataError(fmt::format("unknown dataset '{}' (known: {})", name, known));
}

std::filesystem::path default_dataset_dir() { return CRYPTWNN_DATASET_DIR; }

std::string file_sha256(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError(fmt::format("cannot open {}", path.string()));
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
    std::array<char, 1 << 16> buf{};
    while (in) {
        in.read(buf.data(), buf.size());
        EVP_DigestUpdate(ctx, buf.data(), static_cast<std::size_t>(in.gcount()));
    }
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx, md.data(), &len);
    EVP_MD_CTX_free(ctx);
    std::string hex;
    for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", md[i]);
    return hex;
}

}  // namespace cryptwnn::data
