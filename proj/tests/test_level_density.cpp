#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <iterator>
#include <random>

#include "signrange/error.hpp"
#include "signrange/level_density.hpp"

using namespace signrange;

namespace {

SignVector word(std::uint64_t bits, std::size_t n) {
    SignVector x;
    for (std::size_t i = 0; i < n; ++i) {
        x.push_back((bits >> i) & 1 ? -1 : 1);
    }
    return x;
}

std::uint64_t brute_count(const IndexSet& s, std::uint64_t k) {
    std::uint64_t c = 0;
    for (std::uint64_t n = 1; n <= k; ++n) {
        c += s.contains(n);
    }
    return c;
}

} // namespace

TEST(SeqMetric, Examples) {
    const SignVector x{1, -1, 1, 1};
    EXPECT_EQ(seq_metric(x, x), 0.0);
    EXPECT_EQ(seq_metric(x, SignVector{-1, -1, 1, 1}), 0.5);
    EXPECT_EQ(seq_metric(x, SignVector{1, -1, 1, -1}), 1.0 / 16);
    EXPECT_EQ(first_disagreement(x, SignVector{1, -1, 1, -1}), 4u);
    EXPECT_THROW(seq_metric(x, SignVector{1}), Error);
}

TEST(SeqMetric, UltrametricExhaustive) {
    for (std::size_t n = 1; n <= 6; ++n) {
        const std::uint64_t total = std::uint64_t{1} << n;
        for (std::uint64_t a = 0; a < total; ++a) {
            for (std::uint64_t b = 0; b < total; ++b) {
                for (std::uint64_t c = 0; c < total; ++c) {
                    const auto x = word(a, n), y = word(b, n), z = word(c, n);
                    ASSERT_LE(seq_metric(x, z), std::max(seq_metric(x, y), seq_metric(y, z)));
                }
            }
        }
    }
    // N = 10: triangle through every y for a sample of (x, z)
    for (std::uint64_t a = 0; a < 1024; a += 37) {
        for (std::uint64_t c = 0; c < 1024; c += 41) {
            const auto x = word(a, 10), z = word(c, 10);
            for (std::uint64_t b = 0; b < 1024; ++b) {
                const auto y = word(b, 10);
                ASSERT_LE(seq_metric(x, z), std::max(seq_metric(x, y), seq_metric(y, z)));
            }
        }
    }
}

TEST(IndexSetTest, CountsMatchMembershipScan) {
    const std::vector<IndexSet> sets{IndexSet::progression(3, 0), IndexSet::progression(7, 2),
                                     IndexSet::progression(1, 0), IndexSet::squares(500),
                                     IndexSet::explicit_set({2, 3, 5, 7, 11, 13})};
    for (const auto& s : sets) {
        for (std::uint64_t k = 0; k <= 400; ++k) {
            ASSERT_EQ(s.count(k), brute_count(s, k)) << "k = " << k;
        }
    }
    EXPECT_THROW(IndexSet::progression(3, 3), Error);
    EXPECT_THROW(IndexSet::explicit_set({3, 3}), Error);
    EXPECT_EQ(IndexSet::explicit_set({5, 2}).members(), (std::vector<std::uint64_t>{2, 5}));
}

TEST(Density, Examples) {
    const auto d3 = density(IndexSet::progression(3, 0), 1000000);
    EXPECT_NEAR(d3.upper, 1.0 / 3, 1e-5);
    EXPECT_NEAR(d3.lower, 1.0 / 3, 1e-5);
    const auto ev = density(IndexSet::progression(2, 0), 10000);
    EXPECT_NEAR(ev.upper, 0.5, 1e-3);
    EXPECT_NEAR(ev.lower, 0.5, 1e-3);
    const auto sq = density(IndexSet::squares(1000000), 1000000);
    EXPECT_LE(sq.upper, 1e-2);
    EXPECT_LE(sq.lower, sq.upper);
    EXPECT_THROW(density(IndexSet::progression(2, 0), 9), Error);
}

TEST(Density, ConvergenceRate) {
    for (std::uint64_t q : {2, 3, 5, 7, 10, 13}) {
        for (std::uint64_t j = 0; j < q; ++j) {
            for (std::uint64_t h : {1000, 12345, 100000}) {
                const auto d = density(IndexSet::progression(q, j), h);
                EXPECT_LE(std::abs(d.upper - 1.0 / q), static_cast<double>(q) / h);
                EXPECT_LE(std::abs(d.lower - 1.0 / q), static_cast<double>(q) / h);
                EXPECT_GE(d.lower, 0.0);
                EXPECT_LE(d.upper, 1.0);
            }
        }
    }
}

TEST(HLambda, Examples) {
    const SignVector x{1, -1, 1, -1};
    EXPECT_EQ(h_lambda(x, IndexSet::explicit_set({})), x);
    EXPECT_TRUE(h_lambda(x, IndexSet::explicit_set({1, 2, 3, 4})).empty());
    EXPECT_EQ(h_lambda(x, IndexSet::explicit_set({2, 4})), (SignVector{1, 1}));
    EXPECT_EQ(h_lambda(x, IndexSet::progression(2, 0)), (SignVector{1, 1}));
}

TEST(HLambda, CompositionCoherence) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 1 + rng() % 30;
        const auto x = word(rng(), n);
        std::vector<std::uint64_t> l1, l2_orig;
        for (std::uint64_t i = 1; i <= n; ++i) {
            const auto r = rng() % 3;
            if (r == 0) l1.push_back(i);
            if (r == 1) l2_orig.push_back(i);
        }
        // Λ₂ re-indexed into the coordinates of h_{Λ₁}(x)
        std::vector<std::uint64_t> l2, both;
        for (auto i : l2_orig) {
            const auto removed = std::count_if(l1.begin(), l1.end(), [&](auto v) { return v < i; });
            l2.push_back(i - removed);
        }
        std::merge(l1.begin(), l1.end(), l2_orig.begin(), l2_orig.end(), std::back_inserter(both));
        const auto once = h_lambda(x, IndexSet::explicit_set(both));
        const auto twice = h_lambda(h_lambda(x, IndexSet::explicit_set(l1)), IndexSet::explicit_set(l2));
        ASSERT_EQ(once, twice);
    }
}

TEST(Holder, Examples) {
    const auto r = holder_check(IndexSet::progression(10, 0), 0.2, 10000, 1000, 1);
    EXPECT_TRUE(r.deterministic_pass);
    EXPECT_TRUE(r.holds_from_one);
    EXPECT_EQ(r.k0, 0u);
    EXPECT_TRUE(r.sampled_pass);
    EXPECT_LE(r.worst_log2_ratio, 0.0);

    const auto e = holder_check(IndexSet::explicit_set({}), 0.3, 2000, 200, 2);
    EXPECT_TRUE(e.pass());
    // d(h x, h y) = d(x, y): excess is exactly eps·log2 d ≤ -eps
    EXPECT_LE(e.worst_log2_ratio, -0.3 + 1e-12);

    try {
        holder_check(IndexSet::progression(2, 0), 0.1, 10, 1000, 3);
        FAIL();
    } catch (const Error& err) {
        EXPECT_EQ(err.kind(), ErrorKind::Precondition);
    }
}

TEST(Holder, ClosedFormAgainstDeletion) {
    // d(h x, h y) = 2^{-(k - m_k)} when x, y first differ at k ∉ Λ
    const auto set = IndexSet::progression(10, 0);
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = 60;
        auto x = word(rng(), n);
        auto y = x;
        std::size_t k = 1 + rng() % n;
        while (set.contains(k)) k = 1 + rng() % n;
        y.flip(k - 1);
        const auto m = set.count(k - 1);
        EXPECT_EQ(seq_metric(h_lambda(x, set), h_lambda(y, set)), std::ldexp(1.0, -static_cast<int>(k - m)));
        EXPECT_LE(std::ldexp(1.0, -static_cast<int>(k - m)), std::pow(2.0, -0.8 * k) * (1 + 1e-12));
    }
}

TEST(BoxDim, Examples) {
    const auto all = box_dim_estimate([](std::span<const std::int8_t>) { return true; }, 16, 4);
    EXPECT_DOUBLE_EQ(all.estimate, 1.0);
    EXPECT_EQ(all.survivors.back(), std::uint64_t{1} << 16);

    const auto first = box_dim_estimate([](std::span<const std::int8_t> p) { return p[0] == 1; }, 18, 2);
    EXPECT_NEAR(first.estimate, 1.0, 1e-12);
    EXPECT_EQ(first.survivors[0], 1u);

    const auto even = box_dim_estimate(
        [](std::span<const std::int8_t> p) { return p.size() % 2 == 1 || p.back() == 1; }, 20, 3);
    EXPECT_NEAR(even.estimate, 0.5, 0.05);

    const auto none = box_dim_estimate([](std::span<const std::int8_t>) { return false; }, 8);
    EXPECT_TRUE(none.all_rejected);
    EXPECT_EQ(none.estimate, 0.0);
}

TEST(BoxDim, WorkerCountIrrelevant) {
    const auto pred = ball_feasible_predicate(
        [] {
            std::vector<Complex2> t;
            for (int n = 1; n <= 18; ++n) t.push_back({1.0 / n, 0.5 / n});
            return t;
        }(),
        {0.3, 0.1}, 0.05);
    const auto a = box_dim_estimate(pred, 18, 1);
    const auto b = box_dim_estimate(pred, 18, 8);
    EXPECT_EQ(a.survivors, b.survivors);
    EXPECT_EQ(a.estimate, b.estimate);
    EXPECT_GE(a.estimate, 0.0);
    EXPECT_LE(a.estimate, 1.0);
}
