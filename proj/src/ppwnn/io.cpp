#include "cryptwnn/ppwnn/io.hpp"

#include <array>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "cryptwnn/ckks/errors.hpp"
#include "cryptwnn/ckks/serialization.hpp"

namespace cryptwnn::ppwnn {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kFormat = "cryptwnn-encrypted-params";
constexpr int kVersion = 1;

std::string hex(std::span<const std::uint8_t> bytes) {
    std::string s;
    for (auto b : bytes) s += fmt::format("{:02x}", b);
    return s;
}

void put_u64(std::vector<std::uint8_t>& buf, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) buf.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint64_t get_u64(std::span<const std::uint8_t> buf, std::size_t& pos) {
    if (pos + 8 > buf.size()) throw ckks::FormatError("truncated checkpoint group file");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf[pos + i]) << (8 * i);
    pos += 8;
    return v;
}

void write_group(const fs::path& path, const ckks::CkksContext& ctx, const std::vector<Ciphertext>& cts) {
    std::vector<std::uint8_t> buf;
    put_u64(buf, cts.size());
    for (const auto& c : cts) {
        const auto bytes = ckks::serialize(ctx, c);
        put_u64(buf, bytes.size());
        buf.insert(buf.end(), bytes.begin(), bytes.end());
    }
    ckks::write_file(path.string(), buf);
}

std::vector<Ciphertext> read_group(const fs::path& path, const ckks::ContextPtr& ctx, std::size_t expected) {
    const auto buf = ckks::read_file(path.string());
    std::size_t pos = 0;
    const auto n = get_u64(buf, pos);
    if (n != expected) {
        throw ckks::FormatError(fmt::format("{} holds {} ciphertexts, expected {}", path.string(), n, expected));
    }
    std::vector<Ciphertext> out;
    out.reserve(n);
    for (std::uint64_t k = 0; k < n; ++k) {
        const auto len = get_u64(buf, pos);
        if (pos + len > buf.size()) throw ckks::FormatError("truncated checkpoint group file");
        out.push_back(ckks::deserialize_ciphertext(ctx, std::span(buf).subspan(pos, len)));
        pos += len;
    }
    return out;
}

std::array<std::size_t, 4> group_sizes(const wnn::WnnShape& s) {
    return {s.nin * s.nhn, s.nhn, s.nhn, s.nhn};
}

}  // namespace

void save_encrypted_checkpoint(const fs::path& dir, const ckks::CkksContext& ctx, const EncryptedWnnParams& enc,
                               const std::string& config_hash) {
    fs::create_directories(dir);
    const auto values = enc.values.groups();
    const auto deltas = enc.momentum.groups();
    for (std::size_t k = 0; k < values.size(); ++k) {
        const std::string name = wnn::ParamGroups::kNames[k];
        write_group(dir / ("param_" + name + ".bin"), ctx, *values[k]);
        write_group(dir / ("delta_" + name + ".bin"), ctx, *deltas[k]);
    }
    write_group(dir / "inv_a.bin", ctx, enc.inv_a);
    const json manifest = {
        {"format", kFormat},
        {"version", kVersion},
        {"shape", {{"nin", enc.shape.nin}, {"nhn", enc.shape.nhn}, {"nout", wnn::WnnShape::nout}}},
        {"generation", enc.generation},
        {"config_hash", config_hash},
        {"ckks_params_hash", hex(ctx.params_hash())},
        {"insecure", ctx.insecure()},
    };
    std::ofstream out(dir / "manifest.json");
    out << manifest.dump(2) << '\n';
    if (!out) throw std::runtime_error("cannot write " + (dir / "manifest.json").string());
}

LoadedCheckpoint load_encrypted_checkpoint(const fs::path& dir, const ckks::ContextPtr& ctx) {
    std::ifstream in(dir / "manifest.json");
    if (!in) throw std::runtime_error("cannot open " + (dir / "manifest.json").string());
    const json m = json::parse(in);
    if (m.at("format") != kFormat || m.at("version") != kVersion) {
        throw ckks::FormatError("not an encrypted parameter checkpoint: " + dir.string());
    }
    if (m.at("ckks_params_hash").get<std::string>() != hex(ctx->params_hash())) {
        throw ckks::ContextMismatchError("checkpoint was written under different CKKS parameters");
    }
    LoadedCheckpoint out;
    auto& p = out.params;
    p.shape.nin = m.at("shape").at("nin").get<std::size_t>();
    p.shape.nhn = m.at("shape").at("nhn").get<std::size_t>();
    p.shape.validate();
    p.generation = m.at("generation").get<std::uint64_t>();
    out.config_hash = m.at("config_hash").get<std::string>();
    const auto sizes = group_sizes(p.shape);
    auto values = p.values.groups();
    auto deltas = p.momentum.groups();
    for (std::size_t k = 0; k < values.size(); ++k) {
        const std::string name = wnn::ParamGroups::kNames[k];
        *values[k] = read_group(dir / ("param_" + name + ".bin"), ctx, sizes[k]);
        *deltas[k] = read_group(dir / ("delta_" + name + ".bin"), ctx, sizes[k]);
    }
    p.inv_a = read_group(dir / "inv_a.bin", ctx, p.shape.nhn);
    return out;
}

TrainingLog::TrainingLog(const fs::path& path) : out_(path) {
    if (!out_) throw std::runtime_error("cannot write training log " + path.string());
    out_ << "epoch,batch,mse,elapsed_ms\n";
}

void TrainingLog::record(const wnn::BatchEvent& e) {
    out_ << fmt::format("{},{},{:.17g},{:.3f}\n", e.epoch, e.batch, e.mse, e.elapsed_ms);
    out_.flush();
}

}  // namespace cryptwnn::ppwnn
