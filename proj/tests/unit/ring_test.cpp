#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "cryptwnn/ring/modulus.hpp"
#include "cryptwnn/ring/ntt.hpp"
#include "cryptwnn/ring/ring.hpp"
#include "cryptwnn/ring/sampler.hpp"

using namespace cryptwnn::ring;

namespace {

// Independent oracle: quadratic negacyclic convolution with explicit sign wrap.
std::vector<std::uint64_t> schoolbook(const std::vector<std::uint64_t>& a,
                                      const std::vector<std::uint64_t>& b, std::uint64_t q) {
    const std::size_t n = a.size();
    std::vector<std::uint64_t> c(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const auto prod = static_cast<std::uint64_t>(static_cast<u128>(a[i]) * b[j] % q);
            const std::size_t k = (i + j) % n;
            if (i + j < n) {
                c[k] = static_cast<std::uint64_t>((static_cast<u128>(c[k]) + prod) % q);
            } else {
                c[k] = static_cast<std::uint64_t>((static_cast<u128>(c[k]) + q - prod) % q);
            }
        }
    }
    return c;
}

std::uint64_t slow_pow(std::uint64_t b, std::uint64_t e, std::uint64_t q) {
    u128 r = 1;
    for (std::uint64_t i = 0; i < e; ++i) r = r * b % q;
    return static_cast<std::uint64_t>(r);
}

RingElem random_elem(const RingParamsPtr& params, const std::vector<std::size_t>& moduli,
                     std::mt19937_64& gen) {
    RingElem e(params, moduli);
    for (std::size_t k = 0; k < moduli.size(); ++k) {
        std::uniform_int_distribution<std::uint64_t> dist(0, e.modulus_of(k).value() - 1);
        for (std::size_t i = 0; i < params->degree(); ++i) e.row(k)[i] = dist(gen);
    }
    return e;
}

std::vector<std::size_t> all_moduli(const RingParamsPtr& p) {
    std::vector<std::size_t> m(p->prime_count());
    std::iota(m.begin(), m.end(), 0);
    return m;
}

}  // namespace

TEST(Modulus, BarrettMatchesWideRemainder) {
    std::mt19937_64 gen(7);
    for (std::uint64_t qv : {17ULL, 65537ULL, (1ULL << 40) - 87, 1152921504606846883ULL,
                             2305843009213693951ULL}) {
        const Modulus q(qv);
        for (int i = 0; i < 20000; ++i) {
            const u128 x = (static_cast<u128>(gen()) << 64) | gen();
            ASSERT_EQ(q.reduce(x), static_cast<std::uint64_t>(x % qv));
            const std::uint64_t a = gen() % qv, b = gen() % qv;
            ASSERT_EQ(q.mul(a, b), static_cast<std::uint64_t>(static_cast<u128>(a) * b % qv));
            ASSERT_EQ(mul_shoup(a, b, q.shoup(b), qv), q.mul(a, b));
        }
    }
}

TEST(Modulus, InverseAndSignedLift) {
    const Modulus q(65537);
    for (std::uint64_t a = 1; a < 2000; ++a) EXPECT_EQ(q.mul(a, q.inverse(a)), 1u);
    EXPECT_THROW(q.inverse(0), std::domain_error);
    EXPECT_EQ(q.from_signed(-1), 65536u);
    EXPECT_EQ(q.from_signed(-65537), 0u);
    EXPECT_EQ(q.from_signed(70000), 70000u - 65537u);
}

TEST(Modulus, RejectsOversizedValues) {
    EXPECT_THROW(Modulus(1), std::invalid_argument);
    EXPECT_THROW(Modulus(1ULL << 62), std::invalid_argument);
}

TEST(Primes, GeneratedPrimesAreNttFriendlyAndDistinct) {
    const auto primes = generate_ntt_primes(8192, {60, 40, 40, 40, 60});
    ASSERT_EQ(primes.size(), 5u);
    for (std::size_t i = 0; i < primes.size(); ++i) {
        EXPECT_TRUE(is_prime(primes[i]));
        EXPECT_EQ(primes[i] % 16384, 1u);
        for (std::size_t j = 0; j < i; ++j) EXPECT_NE(primes[i], primes[j]);
    }
    EXPECT_EQ(std::bit_width(primes[0]), 60);
    EXPECT_EQ(std::bit_width(primes[1]), 40);
    EXPECT_GT(primes[1], primes[2]);
    // Deterministic given (N, bit sizes).
    EXPECT_EQ(primes, generate_ntt_primes(8192, {60, 40, 40, 40, 60}));
}

TEST(Primes, MillerRabinAgreesWithTrialDivision) {
    for (std::uint64_t n = 0; n < 5000; ++n) {
        bool prime = n >= 2;
        for (std::uint64_t d = 2; d * d <= n; ++d) {
            if (n % d == 0) {
                prime = false;
                break;
            }
        }
        ASSERT_EQ(is_prime(n), prime) << n;
    }
    EXPECT_FALSE(is_prime(3215031751ULL));  // strong pseudoprime to bases 2, 3, 5, 7
}

TEST(Ntt, RootTableSatisfiesOrderConditions) {
    for (std::size_t n : {4u, 64u, 4096u}) {
        const auto primes = generate_ntt_primes(n, {30, 59});
        for (auto qv : primes) {
            const Modulus q(qv);
            const NttTables t(n, q);
            EXPECT_EQ(q.pow(t.psi(), 2 * n), 1u);
            EXPECT_EQ(q.pow(t.psi(), n), qv - 1);
        }
    }
}

TEST(Ntt, ForwardEqualsEvaluationAtOddPowersSmallCase) {
    // N = 4, p = 17: slots are x evaluated at the odd powers of an 8th root of unity.
    const Modulus q(17);
    const NttTables t(4, q);
    const std::uint64_t psi = t.psi();
    const std::vector<std::uint64_t> x = {3, 1, 4, 1};
    std::vector<std::uint64_t> y = x;
    t.forward(y.data());
    std::vector<std::uint64_t> expected, sorted_y = y;
    for (std::size_t k = 0; k < 4; ++k) {
        const std::uint64_t root = slow_pow(psi, 2 * reverse_bits(k, 2) + 1, 17);
        std::uint64_t v = 0;
        for (std::size_t i = 0; i < 4; ++i) v = (v + x[i] * slow_pow(root, i, 17)) % 17;
        EXPECT_EQ(y[k], v) << "slot " << k;
        expected.push_back(v);
    }
    std::vector<std::uint64_t> odd_evals;
    for (std::uint64_t e : {1, 3, 5, 7}) {
        std::uint64_t v = 0;
        const std::uint64_t root = slow_pow(psi, e, 17);
        for (std::size_t i = 0; i < 4; ++i) v = (v + x[i] * slow_pow(root, i, 17)) % 17;
        odd_evals.push_back(v);
    }
    std::sort(odd_evals.begin(), odd_evals.end());
    std::sort(sorted_y.begin(), sorted_y.end());
    EXPECT_EQ(sorted_y, odd_evals);
}

TEST(Ntt, ForwardMatchesDirectEvaluationOracle) {
    std::mt19937_64 gen(11);
    for (std::size_t n : {2u, 8u, 32u, 64u}) {
        for (int bits : {20, 45, 61}) {
            const Modulus q(generate_ntt_primes(n, {bits})[0]);
            const NttTables t(n, q);
            std::vector<std::uint64_t> x(n);
            for (auto& v : x) v = gen() % q.value();
            std::vector<std::uint64_t> y = x;
            t.forward(y.data());
            const int logn = std::countr_zero(n);
            for (std::size_t k = 0; k < n; ++k) {
                const std::uint64_t root = q.pow(t.psi(), 2 * reverse_bits(k, logn) + 1);
                std::uint64_t v = 0, rp = 1;
                for (std::size_t i = 0; i < n; ++i) {
                    v = q.add(v, q.mul(x[i], rp));
                    rp = q.mul(rp, root);
                }
                ASSERT_EQ(y[k], v) << "n=" << n << " bits=" << bits << " k=" << k;
            }
        }
    }
}

TEST(Ntt, RoundTripIsExact) {
    std::mt19937_64 gen(3);
    for (std::size_t n : {2u, 16u, 1024u, 8192u}) {
        auto params = RingParams::create(n, generate_ntt_primes(n, {30, 50, 60, 61}));
        for (int rep = 0; rep < 5; ++rep) {
            const RingElem e = random_elem(params, all_moduli(params), gen);
            const RingElem f = ntt_transform(e, Direction::forward);
            EXPECT_EQ(f.representation(), Representation::ntt);
            EXPECT_EQ(ntt_transform(f, Direction::inverse), e);
        }
    }
}

TEST(Ntt, ZeroMapsToZero) {
    auto params = RingParams::create(64, generate_ntt_primes(64, {40, 50}));
    RingElem z(params, all_moduli(params));
    EXPECT_TRUE(ntt_transform(z, Direction::forward).is_zero());
}

TEST(Ntt, RepresentationMismatchIsRejected) {
    auto params = RingParams::create(16, generate_ntt_primes(16, {40}));
    RingElem e(params, {0});
    EXPECT_THROW(ntt_transform(e, Direction::inverse), std::logic_error);
    RingElem f = ntt_transform(e, Direction::forward);
    EXPECT_THROW(ntt_transform(f, Direction::forward), std::logic_error);
}

TEST(RingMul, MatchesSchoolbookOracleOnThousandCases) {
    std::mt19937_64 gen(2024);
    int cases = 0;
    const std::vector<std::size_t> degrees = {2, 4, 8, 16, 32, 64};
    for (int rep = 0; rep < 1000; ++rep) {
        const std::size_t n = degrees[rep % degrees.size()];
        const int bits = 17 + static_cast<int>(gen() % 45);
        auto params = RingParams::create(n, generate_ntt_primes(n, {bits, 61}));
        const auto moduli = all_moduli(params);
        const RingElem a = random_elem(params, moduli, gen);
        const RingElem b = random_elem(params, moduli, gen);
        const RingElem c = ring_mul(a, b);
        for (std::size_t k = 0; k < moduli.size(); ++k) {
            const std::uint64_t q = params->modulus(k).value();
            std::vector<std::uint64_t> ra(a.row(k), a.row(k) + n), rb(b.row(k), b.row(k) + n);
            const auto expect = schoolbook(ra, rb, q);
            ASSERT_TRUE(std::equal(expect.begin(), expect.end(), c.row(k)))
                << "case " << rep << " n=" << n << " q=" << q;
        }
        ++cases;
    }
    EXPECT_EQ(cases, 1000);
}

TEST(RingMul, DegreeTwoSquareWraps) {
    // (1 + X)^2 = 1 + 2X + X^2 = 2X because X^2 = -1.
    auto params = RingParams::create(2, {17});
    const std::vector<std::int64_t> c = {1, 1};
    const RingElem a = RingElem::from_signed(params, {0}, c);
    const RingElem sq = ring_mul(a, a);
    EXPECT_EQ(sq.row(0)[0], 0u);
    EXPECT_EQ(sq.row(0)[1], 2u);
}

TEST(RingMul, ZeroAbsorbs) {
    std::mt19937_64 gen(5);
    auto params = RingParams::create(256, generate_ntt_primes(256, {40, 50}));
    const RingElem a = random_elem(params, all_moduli(params), gen);
    EXPECT_TRUE(ring_mul(a, RingElem(params, all_moduli(params))).is_zero());
}

TEST(RingMul, AlgebraicLaws) {
    std::mt19937_64 gen(9);
    auto params = RingParams::create(128, generate_ntt_primes(128, {40, 60}));
    const auto m = all_moduli(params);
    for (int rep = 0; rep < 20; ++rep) {
        const RingElem a = random_elem(params, m, gen), b = random_elem(params, m, gen),
                       c = random_elem(params, m, gen);
        EXPECT_EQ(ring_mul(a, b), ring_mul(b, a));
        EXPECT_EQ(add(a, b), add(b, a));
        EXPECT_EQ(ring_mul(ring_mul(a, b), c), ring_mul(a, ring_mul(b, c)));
        EXPECT_EQ(add(add(a, b), c), add(a, add(b, c)));
        EXPECT_EQ(ring_mul(a, add(b, c)), add(ring_mul(a, b), ring_mul(a, c)));
        EXPECT_EQ(sub(add(a, b), b), a);
        EXPECT_TRUE(add(a, negate(a)).is_zero());
    }
}

TEST(RingMul, NttDomainOperandsStayInNttDomain) {
    std::mt19937_64 gen(13);
    auto params = RingParams::create(64, generate_ntt_primes(64, {50}));
    const RingElem a = random_elem(params, {0}, gen), b = random_elem(params, {0}, gen);
    const RingElem an = ntt_transform(a, Direction::forward);
    const RingElem prod = ring_mul(an, b);
    EXPECT_EQ(prod.representation(), Representation::ntt);
    EXPECT_EQ(ntt_transform(prod, Direction::inverse), ring_mul(a, b));
}

TEST(RingElem, MismatchedOperandsAreRejected) {
    auto p1 = RingParams::create(16, generate_ntt_primes(16, {40, 41}));
    auto p2 = RingParams::create(32, generate_ntt_primes(32, {40}));
    RingElem a(p1, {0, 1}), b(p1, {0}), c(p2, {0});
    EXPECT_THROW(add(a, b), std::invalid_argument);
    EXPECT_THROW(add(b, c), std::invalid_argument);
    EXPECT_THROW(ring_mul(b, c), std::invalid_argument);
    RingElem an = ntt_transform(a, Direction::forward);
    EXPECT_THROW(add(a, an), std::invalid_argument);
}

TEST(RingElem, DropLastCommutesWithAdd) {
    std::mt19937_64 gen(17);
    auto params = RingParams::create(64, generate_ntt_primes(64, {40, 40, 50}));
    const auto m = all_moduli(params);
    for (int rep = 0; rep < 20; ++rep) {
        const RingElem a = random_elem(params, m, gen), b = random_elem(params, m, gen);
        const RingElem lhs = drop_last(add(a, b));
        EXPECT_EQ(lhs.prime_count(), 2u);
        EXPECT_EQ(lhs, add(drop_last(a), drop_last(b)));
    }
    RingElem single(params, {0});
    EXPECT_THROW(drop_last(single), std::invalid_argument);
}

TEST(Sampler, TernaryCoefficientsAreInRange) {
    Prng rng(1);
    auto params = RingParams::create(1024, generate_ntt_primes(1024, {40, 50}));
    const RingElem s = sample(SampleKind::ternary, params, {0, 1}, rng);
    int counts[3] = {0, 0, 0};
    for (std::size_t k = 0; k < 2; ++k) {
        const std::uint64_t q = s.modulus_of(k).value();
        for (std::size_t i = 0; i < 1024; ++i) {
            const std::uint64_t v = s.row(k)[i];
            ASSERT_TRUE(v == 0 || v == 1 || v == q - 1);
            if (k == 0) ++counts[v == 0 ? 1 : (v == 1 ? 2 : 0)];
        }
    }
    for (int c : counts) EXPECT_GT(c, 250);
}

TEST(Sampler, GaussianStandardDeviationAndTail) {
    Prng rng(2);
    const auto c = sample_gaussian_coeffs(1000000, rng);
    double sum = 0, sq = 0;
    std::int64_t max_abs = 0;
    for (auto v : c) {
        sum += static_cast<double>(v);
        sq += static_cast<double>(v) * static_cast<double>(v);
        max_abs = std::max<std::int64_t>(max_abs, std::abs(v));
    }
    const double mean = sum / static_cast<double>(c.size());
    const double sd = std::sqrt(sq / static_cast<double>(c.size()) - mean * mean);
    EXPECT_NEAR(sd, kErrorStdDev, 0.05 * kErrorStdDev);
    EXPECT_NEAR(mean, 0.0, 0.02);
    EXPECT_LE(static_cast<double>(max_abs), kErrorTailCut * kErrorStdDev);
}

TEST(Sampler, UniformCoversResidueRange) {
    Prng rng(3);
    auto params = RingParams::create(4096, generate_ntt_primes(4096, {30}));
    const RingElem u = sample(SampleKind::uniform, params, {0}, rng);
    const double q = static_cast<double>(u.modulus_of(0).value());
    double hi = 0, lo = q;
    for (std::size_t i = 0; i < 4096; ++i) {
        ASSERT_LT(u.row(0)[i], u.modulus_of(0).value());
        hi = std::max(hi, static_cast<double>(u.row(0)[i]));
        lo = std::min(lo, static_cast<double>(u.row(0)[i]));
    }
    EXPECT_GT(hi, 0.99 * q);
    EXPECT_LT(lo, 0.01 * q);
}

TEST(Sampler, SameSeedSameElement) {
    auto params = RingParams::create(256, generate_ntt_primes(256, {40, 50}));
    for (auto kind : {SampleKind::ternary, SampleKind::gaussian, SampleKind::uniform}) {
        Prng a(42), b(42), c(43);
        const RingElem x = sample(kind, params, {0, 1}, a);
        EXPECT_EQ(x, sample(kind, params, {0, 1}, b));
        EXPECT_NE(x, sample(kind, params, {0, 1}, c));
    }
}
