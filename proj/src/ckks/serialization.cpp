#include "cryptwnn/ckks/serialization.hpp"

#include <zlib.h>

#include <cstring>
#include <fstream>
#include <iterator>

#include "cryptwnn/ckks/errors.hpp"

namespace cryptwnn::ckks {

namespace {

constexpr char kMagic[8] = {'C', 'W', 'N', 'N', 'C', 'K', 'K', 'S'};
constexpr std::size_t kHeaderSize = 8 + 2 + 1 + 32 + 1 + 8;

class Writer {
public:
    template <typename T>
    void put(T v) {
        for (std::size_t i = 0; i < sizeof(T); ++i) bytes.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void put_f64(double v) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, sizeof(bits));
        put(bits);
    }
    void put_bytes(const std::uint8_t* p, std::size_t n) { bytes.insert(bytes.end(), p, p + n); }

    std::vector<std::uint8_t> bytes;
};

class Reader {
public:
    explicit Reader(std::span<const std::uint8_t> b) : bytes_(b) {}

    template <typename T>
    T get() {
        need(sizeof(T));
        T v = 0;
        for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(static_cast<T>(bytes_[pos_ + i]) << (8 * i));
        pos_ += sizeof(T);
        return v;
    }
    double get_f64() {
        const auto bits = get<std::uint64_t>();
        double v;
        std::memcpy(&v, &bits, sizeof(v));
        return v;
    }
    void need(std::size_t n) const {
        if (pos_ + n > bytes_.size()) throw FormatError("truncated payload");
    }
    bool done() const { return pos_ == bytes_.size(); }

private:
    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

std::vector<std::uint8_t> frame(ObjectTag tag, const ParamsHash& hash, bool insecure,
                                const std::vector<std::uint8_t>& payload) {
    Writer w;
    w.put_bytes(reinterpret_cast<const std::uint8_t*>(kMagic), sizeof(kMagic));
    w.put(kFormatVersion);
    w.put(static_cast<std::uint8_t>(tag));
    w.put_bytes(hash.data(), hash.size());
    w.put(static_cast<std::uint8_t>(insecure ? 1 : 0));
    w.put(static_cast<std::uint64_t>(payload.size()));
    w.put_bytes(payload.data(), payload.size());
    const auto crc = static_cast<std::uint32_t>(
        crc32(0L, w.bytes.data(), static_cast<uInt>(w.bytes.size())));
    w.put(crc);
    return std::move(w.bytes);
}

std::span<const std::uint8_t> open(const CkksContext& ctx, std::span<const std::uint8_t> bytes,
                                   ObjectTag expected) {
    const Header h = read_header(bytes);
    if (h.tag != expected) throw FormatError("unexpected object tag in serialized data");
    if (h.params_hash != ctx.params_hash()) {
        throw ContextMismatchError("serialized object was produced under different CKKS parameters");
    }
    if (h.insecure != ctx.insecure()) throw ContextMismatchError("security watermark does not match context");
    return bytes.subspan(kHeaderSize, h.payload_length);
}

void write_elem(Writer& w, const ring::RingElem& e) {
    w.put(static_cast<std::uint32_t>(e.prime_count()));
    for (auto idx : e.moduli()) w.put(static_cast<std::uint32_t>(idx));
    w.put(static_cast<std::uint8_t>(e.representation()));
    for (auto v : e.data()) w.put(v);
}

ring::RingElem read_elem(Reader& r, const CkksContext& ctx) {
    const auto count = r.get<std::uint32_t>();
    if (count == 0 || count > ctx.ring()->prime_count()) throw FormatError("invalid prime count");
    std::vector<std::size_t> moduli(count);
    for (auto& m : moduli) {
        m = r.get<std::uint32_t>();
        if (m >= ctx.ring()->prime_count()) throw FormatError("invalid prime index");
    }
    const auto rep = r.get<std::uint8_t>();
    if (rep > 1) throw FormatError("invalid representation flag");
    ring::RingElem e(ctx.ring(), moduli, static_cast<ring::Representation>(rep));
    r.need(e.data().size() * 8);
    const std::size_t n = ctx.degree();
    for (std::size_t k = 0; k < count; ++k) {
        const std::uint64_t q = e.modulus_of(k).value();
        for (std::size_t i = 0; i < n; ++i) {
            const auto v = r.get<std::uint64_t>();
            if (v >= q) throw FormatError("residue not reduced modulo its prime");
            e.row(k)[i] = v;
        }
    }
    return e;
}

void write_ct(Writer& w, const Ciphertext& ct) {
    w.put(static_cast<std::uint32_t>(ct.level));
    w.put_f64(ct.scale);
    w.put(static_cast<std::uint8_t>(ct.size()));
    for (const auto& p : ct.parts) write_elem(w, p);
}

void finish(const Reader& r) {
    if (!r.done()) throw FormatError("trailing bytes in payload");
}

}  // namespace

Header read_header(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < kHeaderSize + 4) throw FormatError("serialized data shorter than the header");
    if (std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) throw FormatError("bad magic bytes");
    Reader r(bytes.subspan(8));
    Header h;
    h.version = r.get<std::uint16_t>();
    if (h.version != kFormatVersion) throw FormatError("unsupported format version " + std::to_string(h.version));
    const auto tag = r.get<std::uint8_t>();
    if (tag < 1 || tag > 6) throw FormatError("unknown object tag");
    h.tag = static_cast<ObjectTag>(tag);
    for (auto& b : h.params_hash) b = r.get<std::uint8_t>();
    const auto mark = r.get<std::uint8_t>();
    if (mark > 1) throw FormatError("invalid security watermark");
    h.insecure = mark == 1;
    h.payload_length = r.get<std::uint64_t>();
    if (h.payload_length != bytes.size() - kHeaderSize - 4) throw FormatError("payload length mismatch");
    const auto body = static_cast<std::size_t>(kHeaderSize + h.payload_length);
    const auto crc = static_cast<std::uint32_t>(crc32(0L, bytes.data(), static_cast<uInt>(body)));
    Reader tail(bytes.subspan(body));
    if (tail.get<std::uint32_t>() != crc) throw FormatError("checksum mismatch");
    return h;
}

std::vector<std::uint8_t> serialize_params(const CkksContext& ctx) {
    const CkksParams& p = ctx.params();
    Writer w;
    w.put(static_cast<std::uint64_t>(p.poly_degree));
    w.put(static_cast<std::uint32_t>(p.coeff_modulus_bits.size()));
    for (int b : p.coeff_modulus_bits) w.put(static_cast<std::uint32_t>(b));
    w.put_f64(p.scale);
    w.put(static_cast<std::uint8_t>(p.profile));
    return frame(ObjectTag::params, ctx.params_hash(), ctx.insecure(), w.bytes);
}

CkksParams deserialize_params(std::span<const std::uint8_t> bytes) {
    const Header h = read_header(bytes);
    if (h.tag != ObjectTag::params) throw FormatError("not a parameter object");
    Reader r(bytes.subspan(kHeaderSize, h.payload_length));
    CkksParams p;
    p.poly_degree = r.get<std::uint64_t>();
    const auto count = r.get<std::uint32_t>();
    if (count > 64) throw FormatError("implausible prime count");
    for (std::uint32_t i = 0; i < count; ++i) p.coeff_modulus_bits.push_back(static_cast<int>(r.get<std::uint32_t>()));
    p.scale = r.get_f64();
    const auto profile = r.get<std::uint8_t>();
    if (profile > 1) throw FormatError("invalid security profile");
    p.profile = static_cast<SecurityProfile>(profile);
    finish(r);
    try {
        p.validate();
    } catch (const std::invalid_argument& e) {
        throw FormatError(std::string("invalid parameters: ") + e.what());
    }
    if (h.insecure != (p.profile != SecurityProfile::secure)) {
        throw FormatError("security watermark contradicts the stored profile");
    }
    if (CkksContext::create(p)->params_hash() != h.params_hash) {
        throw ContextMismatchError("params hash does not match the stored parameters");
    }
    return p;
}

std::vector<std::uint8_t> serialize(const CkksContext& ctx, const Ciphertext& ct) {
    Writer w;
    write_ct(w, ct);
    return frame(ObjectTag::ciphertext, ctx.params_hash(), ctx.insecure(), w.bytes);
}

std::vector<std::uint8_t> serialize(const CkksContext& ctx, const SecretKey& sk) {
    Writer w;
    write_elem(w, sk.s);
    return frame(ObjectTag::secret_key, ctx.params_hash(), ctx.insecure(), w.bytes);
}

std::vector<std::uint8_t> serialize(const CkksContext& ctx, const PublicKey& pk) {
    Writer w;
    write_elem(w, pk.b);
    write_elem(w, pk.a);
    return frame(ObjectTag::public_key, ctx.params_hash(), ctx.insecure(), w.bytes);
}

namespace {

void write_relin(Writer& w, const RelinKey& rlk) {
    w.put(static_cast<std::uint32_t>(rlk.digits.size()));
    for (const auto& d : rlk.digits) {
        write_elem(w, d[0]);
        write_elem(w, d[1]);
    }
}

RelinKey read_relin(Reader& r, const CkksContext& ctx) {
    RelinKey rlk;
    const auto count = r.get<std::uint32_t>();
    if (count != ctx.top_level()) throw FormatError("relinearization key digit count mismatch");
    for (std::uint32_t i = 0; i < count; ++i) {
        ring::RingElem b = read_elem(r, ctx);
        ring::RingElem a = read_elem(r, ctx);
        rlk.digits.push_back({std::move(b), std::move(a)});
    }
    return rlk;
}

}  // namespace

std::vector<std::uint8_t> serialize(const CkksContext& ctx, const RelinKey& rlk) {
    Writer w;
    write_relin(w, rlk);
    return frame(ObjectTag::relin_key, ctx.params_hash(), ctx.insecure(), w.bytes);
}

std::vector<std::uint8_t> serialize(const KeySet& keys) {
    Writer w;
    write_elem(w, keys.secret.s);
    write_elem(w, keys.pub.b);
    write_elem(w, keys.pub.a);
    write_relin(w, keys.relin);
    return frame(ObjectTag::key_set, keys.context->params_hash(), keys.context->insecure(), w.bytes);
}

Ciphertext deserialize_ciphertext(const ContextPtr& ctx, std::span<const std::uint8_t> bytes) {
    Reader r(open(*ctx, bytes, ObjectTag::ciphertext));
    Ciphertext ct;
    ct.level = r.get<std::uint32_t>();
    ct.scale = r.get_f64();
    if (ct.level == 0 || ct.level > ctx->top_level()) throw FormatError("ciphertext level outside the chain");
    if (!(ct.scale > 0.0)) throw FormatError("ciphertext scale is not positive");
    const auto parts = r.get<std::uint8_t>();
    if (parts < 2 || parts > 3) throw FormatError("invalid ciphertext size");
    for (std::uint8_t i = 0; i < parts; ++i) {
        ct.parts.push_back(read_elem(r, *ctx));
        if (ct.parts.back().prime_count() != ct.level) throw FormatError("ciphertext component level mismatch");
    }
    finish(r);
    return ct;
}

SecretKey deserialize_secret_key(const ContextPtr& ctx, std::span<const std::uint8_t> bytes) {
    Reader r(open(*ctx, bytes, ObjectTag::secret_key));
    SecretKey sk{read_elem(r, *ctx)};
    finish(r);
    return sk;
}

PublicKey deserialize_public_key(const ContextPtr& ctx, std::span<const std::uint8_t> bytes) {
    Reader r(open(*ctx, bytes, ObjectTag::public_key));
    PublicKey pk;
    pk.b = read_elem(r, *ctx);
    pk.a = read_elem(r, *ctx);
    finish(r);
    return pk;
}

RelinKey deserialize_relin_key(const ContextPtr& ctx, std::span<const std::uint8_t> bytes) {
    Reader r(open(*ctx, bytes, ObjectTag::relin_key));
    RelinKey rlk = read_relin(r, *ctx);
    finish(r);
    return rlk;
}

KeySet deserialize_key_set(const ContextPtr& ctx, std::span<const std::uint8_t> bytes) {
    Reader r(open(*ctx, bytes, ObjectTag::key_set));
    KeySet keys;
    keys.context = ctx;
    keys.secret.s = read_elem(r, *ctx);
    keys.pub.b = read_elem(r, *ctx);
    keys.pub.a = read_elem(r, *ctx);
    keys.relin = read_relin(r, *ctx);
    finish(r);
    return keys;
}

void write_file(const std::string& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

std::vector<std::uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
    return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace cryptwnn::ckks
