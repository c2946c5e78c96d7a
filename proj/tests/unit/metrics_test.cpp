#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "cryptwnn/metrics/metrics.hpp"

using namespace cryptwnn::metrics;

namespace {

// O(P*Q) pair enumeration with ties counted one half.
double brute_force_auc(const std::vector<int>& y, const std::vector<double>& s) {
    double wins = 0;
    double pairs = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (y[i] != 1) continue;
        for (std::size_t j = 0; j < y.size(); ++j) {
            if (y[j] != 0) continue;
            pairs += 1;
            if (s[i] > s[j]) wins += 1;
            else if (s[i] == s[j]) wins += 0.5;
        }
    }
    return wins / pairs;
}

struct Sample {
    std::vector<int> y;
    std::vector<double> s;
};

Sample random_sample(std::mt19937_64& rng, std::size_t n, bool coarse) {
    Sample out;
    std::uniform_real_distribution<double> u(-3, 3);
    std::uniform_int_distribution<int> coin(0, 1), level(0, 6);
    while (true) {
        out.y.clear();
        out.s.clear();
        for (std::size_t i = 0; i < n; ++i) {
            out.y.push_back(coin(rng));
            out.s.push_back(coarse ? level(rng) * 0.25 : u(rng));
        }
        int pos = 0;
        for (int v : out.y) pos += v;
        if (pos > 0 && pos < static_cast<int>(n)) return out;
    }
}

}  // namespace

TEST(Accuracy, Examples) {
    const std::vector<int> y{1, 0, 1, 0};
    EXPECT_EQ(accuracy(y, y), 1.0);
    EXPECT_EQ(accuracy(y, std::vector<int>{0, 1, 0, 1}), 0.0);
    EXPECT_EQ(accuracy(y, std::vector<int>{1, 0, 0, 0}), 0.75);
    EXPECT_THROW(accuracy(std::vector<int>{}, std::vector<int>{}), MetricError);
    EXPECT_THROW(accuracy(y, std::vector<int>{1, 0}), MetricError);
}

TEST(Confusion, CountsSumToN) {
    const std::vector<int> y{1, 1, 0, 0, 1};
    const std::vector<int> p{1, 0, 0, 1, 1};
    const auto c = confusion(y, p);
    EXPECT_EQ(c.tp, 2u);
    EXPECT_EQ(c.fn, 1u);
    EXPECT_EQ(c.tn, 1u);
    EXPECT_EQ(c.fp, 1u);
    const auto m = evaluate(y, p, std::vector<double>{0.9, 0.2, 0.1, 0.7, 0.8});
    EXPECT_EQ(m.n, 5u);
    EXPECT_EQ(m.accuracy, static_cast<double>(c.tp + c.tn) / 5.0);
}

TEST(Auc, Examples) {
    EXPECT_EQ(auc(std::vector<int>{0, 0, 1, 1}, std::vector<double>{0.1, 0.2, 0.8, 0.9}), 1.0);
    EXPECT_EQ(auc(std::vector<int>{0, 1, 0, 1}, std::vector<double>{0.5, 0.5, 0.5, 0.5}), 0.5);
    EXPECT_EQ(auc(std::vector<int>{1, 0, 1, 0}, std::vector<double>{0.9, 0.8, 0.7, 0.1}), 0.75);
    EXPECT_THROW(auc(std::vector<int>{1, 1}, std::vector<double>{0.1, 0.2}), MetricError);
    EXPECT_THROW(auc(std::vector<int>{1, 0}, std::vector<double>{NAN, 0.2}), MetricError);
}

TEST(Auc, MatchesPairEnumeration) {
    std::mt19937_64 rng(2024);
    for (std::size_t n = 2; n <= 200; ++n) {
        for (bool coarse : {false, true}) {
            const auto smp = random_sample(rng, n, coarse);
            EXPECT_NEAR(auc(smp.y, smp.s), brute_force_auc(smp.y, smp.s), 1e-12) << "n = " << n;
        }
    }
}

TEST(Auc, InvariantUnderIncreasingTransform) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const auto smp = random_sample(rng, 60, trial % 2 == 0);
        std::vector<double> t;
        for (double v : smp.s) t.push_back(std::exp(2 * v) + v * v * v);
        EXPECT_NEAR(auc(smp.y, smp.s), auc(smp.y, t), 1e-12);
    }
}

TEST(Auc, FlippedLabelsComplement) {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 50; ++trial) {
        auto smp = random_sample(rng, 80, trial % 3 == 0);
        const double a = auc(smp.y, smp.s);
        for (int& v : smp.y) v = 1 - v;
        EXPECT_NEAR(a + auc(smp.y, smp.s), 1.0, 1e-12);
    }
}
