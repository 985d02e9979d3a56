#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "signrange/error.hpp"
#include "signrange/oracle.hpp"

using namespace signrange;

namespace {

std::vector<Complex2> brute_range(const std::vector<Complex2>& t) {
    std::vector<Complex2> pts;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << t.size()); ++mask) {
        Complex2 s;
        for (std::size_t i = 0; i < t.size(); ++i) {
            s += (mask >> i) & 1 ? -t[i] : t[i];
        }
        pts.push_back(s);
    }
    return pts;
}

std::vector<Complex2> random_terms(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(-1, 1);
    std::vector<Complex2> t;
    for (std::size_t i = 0; i < n; ++i) {
        t.push_back({u(rng), u(rng)});
    }
    return t;
}

bool contains(const std::vector<Complex2>& pts, Complex2 p, double tol) {
    for (const auto& q : pts) {
        if (max_norm(p - q) <= tol) {
            return true;
        }
    }
    return false;
}

} // namespace

TEST(ExactRange, SmallExamples) {
    const auto r = exact_range(SequenceWindow({1.0, 0.5}));
    ASSERT_EQ(r.points.size(), 4u);
    EXPECT_EQ(r.points[0], Complex2(-1.5));
    EXPECT_EQ(r.points[1], Complex2(-0.5));
    EXPECT_EQ(r.points[2], Complex2(0.5));
    EXPECT_EQ(r.points[3], Complex2(1.5));

    const auto d = exact_range(SequenceWindow({0.5, 0.25, 0.125}));
    ASSERT_EQ(d.points.size(), 8u);
    for (int k : {-7, -5, -3, -1, 1, 3, 5, 7}) {
        EXPECT_TRUE(contains(d.points, Complex2(k / 8.0), 0.0));
    }

    const Complex2 c(0.3, -0.2);
    const auto s = exact_range(SequenceWindow({c}));
    ASSERT_EQ(s.points.size(), 2u);
    EXPECT_TRUE(contains(s.points, c, 0.0));
    EXPECT_TRUE(contains(s.points, -c, 0.0));
}

TEST(ExactRange, DeduplicatesCoincidentSums) {
    // 1 - 1 = -1 + 1 = 0
    const auto r = exact_range(SequenceWindow({1.0, 1.0}));
    EXPECT_EQ(r.points.size(), 3u);
}

TEST(ExactRange, MatchesBruteForce) {
    std::mt19937_64 rng(11);
    for (std::size_t n : {1u, 2u, 3u, 5u, 8u, 12u, 14u}) {
        const auto t = random_terms(rng, n);
        const auto r = exact_range(SequenceWindow(t), 4);
        EXPECT_EQ(r.source_length, n);
        EXPECT_TRUE(same_point_set(r.points, brute_range(t), 1e-12)) << n;
    }
}

TEST(ExactRange, NegationSymmetricAndRecursive) {
    std::mt19937_64 rng(5);
    auto t = random_terms(rng, 11);
    const auto r = exact_range(SequenceWindow(t));
    for (const auto& p : r.points) {
        ASSERT_TRUE(contains(r.points, -p, 1e-12));
    }
    const Complex2 extra(0.37, -0.81);
    std::vector<Complex2> grown;
    for (const auto& p : r.points) {
        grown.push_back(p + extra);
        grown.push_back(p - extra);
    }
    t.push_back(extra);
    EXPECT_TRUE(same_point_set(exact_range(SequenceWindow(t)).points, grown, 1e-12));
}

TEST(ExactRange, IndependentOfWorkerCount) {
    std::mt19937_64 rng(3);
    const SequenceWindow w(random_terms(rng, 16));
    const auto a = exact_range(w, 1);
    const auto b = exact_range(w, 8);
    ASSERT_EQ(a.points.size(), b.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        ASSERT_EQ(a.points[i], b.points[i]);
    }
}

TEST(ExactRange, GuardsLength) {
    try {
        exact_range(SequenceWindow(std::vector<Complex2>(27, Complex2(1))));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::TooLarge);
    }
}

TEST(MinPrefixDiscrepancy, Examples) {
    const auto a = min_prefix_discrepancy(SequenceWindow({1.0, 1.0}));
    EXPECT_EQ(a.value, 1.0);
    EXPECT_EQ(a.witness, (SignVector{1, -1}));

    const Complex2 p(1, 0.9), m(1, -0.9);
    const auto b = min_prefix_discrepancy(SequenceWindow({p, m, p, m, p}));
    EXPECT_LE(b.value, 2.0);

    const auto z = min_prefix_discrepancy(SequenceWindow({0.0}));
    EXPECT_EQ(z.value, 0.0);
    EXPECT_EQ(z.witness.size(), 1u);
}

TEST(MinPrefixDiscrepancy, MatchesBruteForceWithLexTieBreak) {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        const auto t = random_terms(rng, 1 + trial % 10);
        const std::size_t n = t.size();
        double best = INFINITY;
        std::vector<int> best_x;
        // masks in increasing order: bit (n-1-i) set means x_i = -1, so +1 sorts first
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
            std::vector<int> x(n);
            Complex2 s;
            double m = 0;
            for (std::size_t i = 0; i < n; ++i) {
                x[i] = (mask >> (n - 1 - i)) & 1 ? -1 : 1;
                s += x[i] * t[i];
                m = std::max(m, max_norm(s));
            }
            if (m < best) {
                best = m;
                best_x = x;
            }
        }
        const auto got = min_prefix_discrepancy(SequenceWindow(t));
        EXPECT_NEAR(got.value, best, 1e-12);
        EXPECT_NEAR(max_prefix_norm(t, got.witness), got.value, 1e-12);
        EXPECT_EQ(got.witness.to_ints(), best_x);
    }
}

TEST(Equivariance, IdentitySwapAndRandom) {
    std::mt19937_64 rng(23);
    const SequenceWindow w(random_terms(rng, 10));
    EXPECT_TRUE(transform_equivariance_check(w, Mat2::identity()));
    EXPECT_TRUE(transform_equivariance_check(SequenceWindow({Complex2(1, 1)}), Mat2{0, 1, 1, 0}));
    std::uniform_real_distribution<double> u(-2, 2);
    for (int i = 0; i < 5; ++i) {
        Mat2 m{u(rng), u(rng), u(rng), u(rng)};
        if (std::abs(m.det()) < 0.1) {
            continue;
        }
        EXPECT_TRUE(transform_equivariance_check(SequenceWindow(random_terms(rng, 12)), m, 2));
    }
    try {
        transform_equivariance_check(w, Mat2{1, 2, 2, 4});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::SingularMatrix);
    }
}

TEST(Coverage, Examples) {
    const double eps = 0.01;
    RangeSet zero{{Complex2(0)}, 1};
    const auto a = epsilon_net_coverage(zero, Rect::square(eps / 2), eps);
    EXPECT_EQ(a.covered_fraction, 1.0);

    std::vector<Complex2> dy;
    for (int k = 1; k <= 10; ++k) {
        dy.push_back(std::ldexp(1.0, -k));
    }
    const auto strip = epsilon_net_coverage(exact_range(SequenceWindow(dy)), Rect{-0.9, 0.9, 0, 0}, std::ldexp(1.0, -9));
    EXPECT_EQ(strip.covered_fraction, 1.0);
    EXPECT_LE(strip.worst_gap, std::ldexp(1.0, -9));

    RangeSet pm{{Complex2(-1), Complex2(1)}, 1};
    const auto gap = epsilon_net_coverage(pm, Rect::square(1), 0.1);
    EXPECT_LT(gap.covered_fraction, 1.0);
    EXPECT_GT(gap.worst_gap, 0.1);

    EXPECT_THROW(epsilon_net_coverage(RangeSet{}, Rect::square(1), 0.1), Error);
    EXPECT_THROW(epsilon_net_coverage(zero, Rect::square(1), 0.0), Error);
}

TEST(Coverage, FractionOneIffGapWithinEpsilon) {
    std::mt19937_64 rng(29);
    const auto r = exact_range(SequenceWindow(random_terms(rng, 12)));
    for (double eps : {0.02, 0.05, 0.1, 0.3, 1.0}) {
        const auto c = epsilon_net_coverage(r, Rect::square(1.5), eps);
        EXPECT_EQ(c.covered_fraction == 1.0, c.worst_gap <= eps) << eps;
    }
}
