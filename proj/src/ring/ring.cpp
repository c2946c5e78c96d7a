#include "cryptwnn/ring/ring.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>

namespace cryptwnn::ring {

RingParams::RingParams(std::size_t degree, const std::vector<std::uint64_t>& primes)
    : degree_(degree) {
    if (degree < 2 || !std::has_single_bit(degree)) {
        throw std::invalid_argument("ring degree must be a power of two >= 2, got " +
                                    std::to_string(degree));
    }
    if (primes.empty()) throw std::invalid_argument("ring needs at least one prime");
    for (std::size_t i = 0; i < primes.size(); ++i) {
        if (std::find(primes.begin(), primes.begin() + i, primes[i]) != primes.begin() + i) {
            throw std::invalid_argument("duplicate prime in modulus chain");
        }
        if (!is_prime(primes[i]) || primes[i] % (2 * degree) != 1) {
            throw std::invalid_argument("modulus " + std::to_string(primes[i]) +
                                        " is not a prime congruent to 1 mod 2N");
        }
        moduli_.emplace_back(primes[i]);
        tables_.emplace_back(degree, moduli_.back());
    }
}

std::shared_ptr<const RingParams> RingParams::create(std::size_t degree,
                                                     const std::vector<std::uint64_t>& primes) {
    return std::shared_ptr<const RingParams>(new RingParams(degree, primes));
}

std::vector<std::uint64_t> RingParams::primes() const {
    std::vector<std::uint64_t> out;
    out.reserve(moduli_.size());
    for (const auto& m : moduli_) out.push_back(m.value());
    return out;
}

RingElem::RingElem(RingParamsPtr params, std::vector<std::size_t> moduli, Representation rep)
    : params_(std::move(params)), moduli_(std::move(moduli)), rep_(rep) {
    if (!params_) throw std::invalid_argument("ring element needs parameters");
    for (std::size_t idx : moduli_) {
        if (idx >= params_->prime_count()) throw std::out_of_range("prime index out of range");
    }
    data_.assign(moduli_.size() * params_->degree(), 0);
}

RingElem RingElem::from_signed(RingParamsPtr params, std::vector<std::size_t> moduli,
                               std::span<const std::int64_t> coeffs) {
    RingElem out(std::move(params), std::move(moduli));
    if (coeffs.size() != out.degree()) {
        throw std::invalid_argument("coefficient count does not match ring degree");
    }
    for (std::size_t k = 0; k < out.prime_count(); ++k) {
        const Modulus& q = out.modulus_of(k);
        std::uint64_t* r = out.row(k);
        for (std::size_t i = 0; i < coeffs.size(); ++i) r[i] = q.from_signed(coeffs[i]);
    }
    return out;
}

bool RingElem::is_zero() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](std::uint64_t v) { return v == 0; });
}

bool RingElem::compatible(const RingElem& other) const noexcept {
    return params_ && other.params_ &&
           (params_ == other.params_ || params_->primes() == other.params_->primes()) &&
           params_->degree() == other.params_->degree() && moduli_ == other.moduli_ &&
           rep_ == other.rep_;
}

void RingElem::require_compatible(const RingElem& other, const char* op) const {
    if (!compatible(other)) {
        throw std::invalid_argument(std::string(op) +
                                    ": operands differ in degree, prime set or representation");
    }
}

RingElem& RingElem::operator+=(const RingElem& other) {
    require_compatible(other, "ring add");
    const std::size_t n = degree();
    for (std::size_t k = 0; k < moduli_.size(); ++k) {
        const std::uint64_t q = modulus_of(k).value();
        std::uint64_t* a = row(k);
        const std::uint64_t* b = other.row(k);
        for (std::size_t i = 0; i < n; ++i) {
            const std::uint64_t s = a[i] + b[i];
            a[i] = s >= q ? s - q : s;
        }
    }
    return *this;
}

RingElem& RingElem::operator-=(const RingElem& other) {
    require_compatible(other, "ring sub");
    const std::size_t n = degree();
    for (std::size_t k = 0; k < moduli_.size(); ++k) {
        const std::uint64_t q = modulus_of(k).value();
        std::uint64_t* a = row(k);
        const std::uint64_t* b = other.row(k);
        for (std::size_t i = 0; i < n; ++i) a[i] = a[i] >= b[i] ? a[i] - b[i] : a[i] + q - b[i];
    }
    return *this;
}

RingElem& RingElem::operator*=(const RingElem& other) {
    require_compatible(other, "ring pointwise mul");
    if (rep_ != Representation::ntt) {
        throw std::logic_error("pointwise product requires NTT representation");
    }
    const std::size_t n = degree();
    for (std::size_t k = 0; k < moduli_.size(); ++k) {
        const Modulus& q = modulus_of(k);
        std::uint64_t* a = row(k);
        const std::uint64_t* b = other.row(k);
        for (std::size_t i = 0; i < n; ++i) a[i] = q.mul(a[i], b[i]);
    }
    return *this;
}

RingElem& RingElem::multiply_scalar(std::span<const std::uint64_t> scalars) {
    if (scalars.size() != moduli_.size()) {
        throw std::invalid_argument("one scalar per active prime expected");
    }
    const std::size_t n = degree();
    for (std::size_t k = 0; k < moduli_.size(); ++k) {
        const Modulus& q = modulus_of(k);
        const std::uint64_t w = q.reduce(scalars[k]);
        const std::uint64_t wp = q.shoup(w);
        std::uint64_t* a = row(k);
        for (std::size_t i = 0; i < n; ++i) a[i] = mul_shoup(a[i], w, wp, q.value());
    }
    return *this;
}

bool operator==(const RingElem& a, const RingElem& b) noexcept {
    return a.compatible(b) && a.data_ == b.data_;
}

RingElem add(const RingElem& a, const RingElem& b) {
    RingElem r = a;
    r += b;
    return r;
}

RingElem sub(const RingElem& a, const RingElem& b) {
    RingElem r = a;
    r -= b;
    return r;
}

RingElem negate(const RingElem& a) {
    RingElem r = a;
    for (std::size_t k = 0; k < r.prime_count(); ++k) {
        const Modulus& q = r.modulus_of(k);
        std::uint64_t* x = r.row(k);
        for (std::size_t i = 0; i < r.degree(); ++i) x[i] = q.negate(x[i]);
    }
    return r;
}

void ntt_inplace(RingElem& elem, Direction direction) {
    const bool fwd = direction == Direction::forward;
    const Representation need = fwd ? Representation::coefficient : Representation::ntt;
    if (elem.representation() != need) {
        throw std::logic_error(fwd ? "forward NTT requires coefficient representation"
                                   : "inverse NTT requires NTT representation");
    }
    for (std::size_t k = 0; k < elem.prime_count(); ++k) {
        const NttTables& t = elem.params()->ntt(elem.moduli()[k]);
        if (fwd) {
            t.forward(elem.row(k));
        } else {
            t.inverse(elem.row(k));
        }
    }
    elem.set_representation(fwd ? Representation::ntt : Representation::coefficient);
}

RingElem ntt_transform(const RingElem& elem, Direction direction) {
    RingElem r = elem;
    ntt_inplace(r, direction);
    return r;
}

RingElem ring_mul(const RingElem& a, const RingElem& b) {
    if (!a.params() || !b.params() || a.degree() != b.degree() || a.moduli() != b.moduli()) {
        throw std::invalid_argument("ring mul: operands differ in degree or prime set");
    }
    RingElem x = a;
    if (x.representation() == Representation::coefficient) ntt_inplace(x, Direction::forward);
    if (b.representation() == Representation::coefficient) {
        x *= ntt_transform(b, Direction::forward);
    } else {
        x *= b;
    }
    if (a.representation() == Representation::coefficient) ntt_inplace(x, Direction::inverse);
    return x;
}

RingElem drop_last(const RingElem& elem) {
    if (elem.prime_count() < 2) throw std::invalid_argument("cannot drop the only prime");
    std::vector<std::size_t> moduli(elem.moduli().begin(), elem.moduli().end() - 1);
    RingElem r(elem.params(), moduli, elem.representation());
    std::copy(elem.data().begin(), elem.data().begin() + static_cast<std::ptrdiff_t>(r.data().size()),
              r.data().begin());
    return r;
}

}  // namespace cryptwnn::ring
