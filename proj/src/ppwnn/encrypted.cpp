#include "cryptwnn/ppwnn/encrypted.hpp"

#include <atomic>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include <fmt/format.h>
#include <unistd.h>

#include "cryptwnn/ckks/encoder.hpp"
#include "cryptwnn/ckks/encryptor.hpp"
#include "cryptwnn/ckks/errors.hpp"
#include "cryptwnn/ckks/serialization.hpp"

namespace cryptwnn::ppwnn {
namespace fs = std::filesystem;

struct EncryptedDataset::Impl {
    ckks::ContextPtr ctx;
    std::size_t nin = 0;
    std::size_t count = 0;
    std::vector<EncryptedSample> memory;
    fs::path dir;  // empty when in memory

    ~Impl() {
        if (!dir.empty()) {
            std::error_code ec;
            fs::remove_all(dir, ec);
        }
    }

    fs::path file(std::size_t i) const { return dir / fmt::format("sample_{:07}.bin", i); }
};

namespace {

void write_u64(std::ofstream& out, std::uint64_t v) { out.write(reinterpret_cast<const char*>(&v), sizeof v); }

std::uint64_t read_u64(std::ifstream& in) {
    std::uint64_t v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!in) throw ckks::FormatError("truncated spilled sample");
    return v;
}

fs::path make_spill_dir(const fs::path& parent) {
    static std::atomic<unsigned> counter{0};
    const fs::path base = parent.empty() ? fs::temp_directory_path() : parent;
    const auto dir = base / fmt::format("cryptwnn_spill_{}_{}", ::getpid(), counter.fetch_add(1));
    fs::create_directories(dir);
    return dir;
}

}  // namespace

std::size_t fresh_ciphertext_bytes(const ckks::CkksContext& ctx) {
    return 2 * ctx.top_level() * ctx.degree() * sizeof(std::uint64_t);
}

EncryptedDataset::EncryptedDataset(ckks::ContextPtr ctx, std::size_t nin, std::size_t expected_size,
                                   const StorageOptions& storage)
    : impl_(std::make_unique<Impl>()) {
    impl_->ctx = std::move(ctx);
    impl_->nin = nin;
    const std::size_t bytes = expected_size * (nin + 1) * fresh_ciphertext_bytes(*impl_->ctx);
    if (bytes > storage.memory_budget_bytes) impl_->dir = make_spill_dir(storage.spill_parent);
}

EncryptedDataset::EncryptedDataset(EncryptedDataset&&) noexcept = default;
EncryptedDataset& EncryptedDataset::operator=(EncryptedDataset&&) noexcept = default;
EncryptedDataset::~EncryptedDataset() = default;

void EncryptedDataset::push_back(EncryptedSample s) {
    if (s.x.size() != impl_->nin) {
        throw std::invalid_argument(fmt::format("sample has {} feature ciphertexts, expected {}", s.x.size(), impl_->nin));
    }
    if (impl_->dir.empty()) {
        impl_->memory.push_back(std::move(s));
    } else {
        std::ofstream out(impl_->file(impl_->count), std::ios::binary);
        write_u64(out, s.row);
        auto put = [&](const Ciphertext& ct) {
            const auto bytes = ckks::serialize(*impl_->ctx, ct);
            write_u64(out, bytes.size());
            out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
        };
        for (const auto& ct : s.x) put(ct);
        put(s.y);
        if (!out) throw std::runtime_error(fmt::format("cannot spill sample to {}", impl_->dir.string()));
    }
    ++impl_->count;
}

EncryptedSample EncryptedDataset::at(std::size_t i) const {
    if (i >= impl_->count) throw std::out_of_range(fmt::format("sample {} of {}", i, impl_->count));
    if (impl_->dir.empty()) return impl_->memory[i];
    std::ifstream in(impl_->file(i), std::ios::binary);
    if (!in) throw std::runtime_error(fmt::format("missing spilled sample {}", i));
    EncryptedSample s;
    s.row = read_u64(in);
    std::vector<std::uint8_t> buf;
    auto get = [&] {
        buf.resize(read_u64(in));
        in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
        if (!in) throw ckks::FormatError("truncated spilled sample");
        return ckks::deserialize_ciphertext(impl_->ctx, buf);
    };
    for (std::size_t k = 0; k < impl_->nin; ++k) s.x.push_back(get());
    s.y = get();
    return s;
}

std::size_t EncryptedDataset::size() const noexcept { return impl_->count; }
std::size_t EncryptedDataset::nin() const noexcept { return impl_->nin; }
bool EncryptedDataset::spilled() const noexcept { return !impl_->dir.empty(); }
const ckks::ContextPtr& EncryptedDataset::context() const noexcept { return impl_->ctx; }

EncryptedDataset encrypt_dataset(const data::Dataset& d, const PublicKeyBundle& keys, ring::Prng& rng,
                                 const StorageOptions& storage) {
    for (std::size_t i = 0; i < d.size(); ++i) {
        for (std::size_t j = 0; j < d.n_features; ++j) {
            const double v = d.row(i)[j];
            if (!(std::abs(v) <= kMaxFeatureMagnitude)) {
                throw std::range_error(fmt::format("{}: feature {} of row {} is {}, outside +-{}", d.name, j, i, v,
                                                   kMaxFeatureMagnitude));
            }
        }
    }
    const auto& ctx = keys.context;
    const ckks::Encoder encoder(ctx);
    const ckks::Encryptor encryptor(ctx, keys.pub);
    const std::size_t top = ctx->top_level();
    const double scale = ctx->default_scale();
    EncryptedDataset out(ctx, d.n_features, d.size(), storage);
    for (std::size_t i = 0; i < d.size(); ++i) {
        EncryptedSample s;
        s.row = i;
        for (double v : d.row(i)) s.x.push_back(encryptor.encrypt(encoder.encode(v, top, scale), rng));
        s.y = encryptor.encrypt(encoder.encode(static_cast<double>(d.labels[i]), top, scale), rng);
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace cryptwnn::ppwnn
