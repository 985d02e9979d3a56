#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "signrange/error.hpp"
#include "signrange/moran.hpp"
#include "signrange/point_index.hpp"

using namespace signrange;

namespace {

MoranSystem binary(std::size_t levels) {
    return MoranSystem(0.5, std::vector<std::vector<Complex2>>(levels, {Complex2(0), Complex2(0.5)}));
}

MoranSystem quad(std::size_t levels) {
    return MoranSystem(0.5, std::vector<std::vector<Complex2>>(
                                levels, {Complex2(0, 0), Complex2(0.5, 0), Complex2(0, 0.5), Complex2(0.5, 0.5)}));
}

SequenceWindow packet(Complex2 c, std::size_t m) { return SequenceWindow(std::vector<Complex2>(m, (1.0 / m) * c)); }

} // namespace

TEST(MoranSystemTest, Invariants) {
    const auto s = binary(3);
    EXPECT_EQ(s.offset_bound(), 0.5);
    EXPECT_EQ(s.ball_radius(), 2.0);
    EXPECT_TRUE(s.nested_ball_holds());
    EXPECT_THROW(MoranSystem(1.0, {{Complex2(0)}}), Error);
    EXPECT_THROW(MoranSystem(0.5, {{}}), Error);
}

TEST(Attractor, SingleMapIsOrigin) {
    const MoranSystem s(0.5, std::vector<std::vector<Complex2>>(6, {Complex2(0)}));
    const auto c = attractor_points(s, 6);
    ASSERT_EQ(c.points.size(), 1u);
    EXPECT_EQ(c.points[0], Complex2(0));
    EXPECT_EQ(c.error_radius, std::ldexp(1.0, -6) * c.R);
}

TEST(Attractor, BinaryLeftEndpoints) {
    const auto c = attractor_points(binary(10), 10, 4);
    ASSERT_EQ(c.points.size(), 1024u);
    std::vector<double> xs;
    for (const auto& p : c.points) {
        xs.push_back(p.re);
        EXPECT_EQ(p.im, 0.0);
    }
    std::sort(xs.begin(), xs.end());
    for (std::size_t k = 0; k < 1024; ++k) {
        EXPECT_EQ(xs[k], k / 1024.0);
    }
    // first digit selects the left half: lexicographic digit order
    EXPECT_EQ(c.points[1].re, std::ldexp(1.0, -10));
}

TEST(Attractor, WorkerCountDoesNotChangeOutput) {
    const auto a = attractor_points(quad(8), 8, 1);
    const auto b = attractor_points(quad(8), 8, 8);
    ASSERT_EQ(a.points.size(), b.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        ASSERT_EQ(a.points[i], b.points[i]);
    }
}

TEST(Attractor, RefinementConsistency) {
    const MoranSystem s(0.4, std::vector<std::vector<Complex2>>(7, {Complex2(1, 0), Complex2(-0.5, 0.8), Complex2(0.2, -1)}));
    for (std::size_t m = 1; m < 7; ++m) {
        const auto coarse = attractor_points(s, m);
        const auto fine = attractor_points(s, m + 1);
        const PointIndex idx(coarse.points);
        const double r = std::pow(0.4, static_cast<double>(m)) * s.ball_radius();
        for (const auto& p : fine.points) {
            ASSERT_LE(idx.nearest(p).first, r + 1e-12);
        }
    }
}

TEST(Attractor, GuardsSize) {
    try {
        attractor_points(binary(25), 25);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::TooLarge);
    }
}

TEST(Covering, BinaryIntervalAndShrinkingMap) {
    const Rect unit{0, 1, 0, 0};
    for (const auto& c : covering_check(binary(4), unit)) {
        EXPECT_TRUE(c.covered);
    }
    const MoranSystem half(0.5, {{Complex2(0)}});
    const auto c = covering_check(half, Rect{0, 1, 0, 1});
    ASSERT_EQ(c.size(), 1u);
    EXPECT_FALSE(c[0].covered);
    ASSERT_TRUE(c[0].witness.has_value());
    EXPECT_EQ(*c[0].witness, Complex2(1, 1));
    EXPECT_DOUBLE_EQ(c[0].witness_gap, 0.5);
}

TEST(Covering, ExactAgainstDenseSampling) {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(-1, 1);
    const Rect Q{-1, 1, -1, 1};
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Rect> pieces;
        for (int i = 0; i < 4; ++i) {
            pieces.push_back(image_rect(Q, 0.6, {u(rng) * 0.5, u(rng) * 0.5}));
        }
        const auto verdict = rect_cover(Q, pieces);
        // a gap found by sampling must be reported; a reported witness must be uncovered
        bool sampled_gap = false;
        for (int i = 0; i <= 100 && !sampled_gap; ++i) {
            for (int j = 0; j <= 100; ++j) {
                const Complex2 p{-1 + i / 50.0, -1 + j / 50.0};
                if (std::none_of(pieces.begin(), pieces.end(), [&](const Rect& r) { return r.contains(p, 1e-12); })) {
                    sampled_gap = true;
                    break;
                }
            }
        }
        if (sampled_gap) {
            EXPECT_FALSE(verdict.covered);
        }
        if (!verdict.covered) {
            ASSERT_TRUE(verdict.witness.has_value());
            for (const auto& r : pieces) {
                EXPECT_FALSE(r.contains(*verdict.witness, 1e-12));
            }
            EXPECT_TRUE(Q.contains(*verdict.witness));
        }
    }
}

TEST(Covering, CoveredSystemFillsQ) {
    const auto s = quad(6);
    const Rect Q{0, 1, 0, 1};
    for (const auto& c : covering_check(s, Q)) {
        ASSERT_TRUE(c.covered);
    }
    const auto cloud = attractor_points(s, 6);
    const PointIndex idx(cloud.points);
    const double p = 0.05;
    for (int i = 0; i <= 20; ++i) {
        for (int j = 0; j <= 20; ++j) {
            EXPECT_LE(idx.nearest({i * p, j * p}).first, cloud.error_radius + p);
        }
    }
}

TEST(Address, BinaryOneThird) {
    const auto s = binary(10);
    const auto a = address_for_target(s, Rect{0, 1, 0, 0}, 1.0 / 3, 10);
    const std::vector<std::size_t> want{1, 2, 1, 2, 1, 2, 1, 2, 1, 2};
    EXPECT_EQ(a.digits, want);
    EXPECT_LE(a.error, std::ldexp(1.0, -10) * s.ball_radius());
    EXPECT_LE(a.error, a.bound);
}

TEST(Address, RoundTrip) {
    const auto s = quad(8);
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<std::size_t> sigma;
        for (int k = 0; k < 8; ++k) {
            sigma.push_back(1 + rng() % 4);
        }
        const Complex2 target = address_point(s, sigma);
        const auto a = address_for_target(s, Rect{0, 1, 0, 1}, target, 8);
        EXPECT_LE(a.error, a.bound);
        // interior targets have unique addresses
        if (std::fmod(target.re * 256, 1.0) != 0 || std::fmod(target.im * 256, 1.0) != 0) {
            EXPECT_EQ(a.digits, sigma);
        }
    }
}

TEST(Address, EscapesWhenCoveringFails) {
    const MoranSystem half(0.5, std::vector<std::vector<Complex2>>(3, {Complex2(0)}));
    try {
        address_for_target(half, Rect{0, 1, 0, 1}, Complex2(0.9, 0.9), 3);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::TargetEscapes);
    }
}

TEST(SelectBlocks, PerturbedRatioTwo) {
    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> u(-1e-3, 1e-3);
    std::vector<Complex2> t;
    for (int n = 1; n <= 20000; ++n) {
        t.push_back((1.0 + u(rng)) / n * Complex2(2.0 + u(rng), 1.0));
    }
    const SequenceWindow w(t);
    const auto eta = eighth_schedule(0.5, 8);
    const auto sel = select_blocks(w, 2.0, 0.5, eta);
    ASSERT_EQ(sel.blocks.size(), 8u);
    double dk = 1;
    std::size_t prev_max = 0;
    for (std::size_t k = 0; k < 8; ++k) {
        dk *= 0.5;
        ASSERT_FALSE(sel.blocks[k].empty());
        if (k > 0) {
            EXPECT_GT(sel.blocks[k].front(), prev_max);
        }
        prev_max = sel.blocks[k].back();
        double a = 0, b = 0;
        for (auto n : sel.blocks[k]) {
            a += t[n].im < 0 ? -t[n].re : t[n].re;
            b += std::abs(t[n].im);
        }
        EXPECT_NEAR(a, sel.a_sums[k], 1e-12);
        EXPECT_NEAR(b, sel.b_sums[k], 1e-12);
        EXPECT_LE(std::abs(b - dk), eta[k]);
        EXPECT_LT(std::abs(a / b - 2.0), eta[k]);
    }
}

TEST(SelectBlocks, LargeTermsAndExactPackets) {
    const SequenceWindow big(std::vector<Complex2>(100, Complex2(2, 1)));
    try {
        select_blocks(big, 2.0, 0.5, eighth_schedule(0.5, 3));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::InsufficientMass);
        EXPECT_NE(std::string(e.what()).find("level 1"), std::string::npos);
    }
    const auto sel = select_blocks(packet({1, 0.5}, 32), 2.0, 0.5, eighth_schedule(0.5, 1));
    EXPECT_EQ(sel.b_sums[0], 0.5);
    EXPECT_EQ(sel.a_sums[0], 1.0);
}

TEST(TwoRatio, PacketLevelOne) {
    const auto b = build_two_ratio_system(packet({1, 0.5}, 32), packet({0.5, 1.5}, 32), 0.5, 1);
    ASSERT_EQ(b.D.size(), 1u);
    const std::vector<Complex2> want{Complex2(1.5, 2), Complex2(0.5, -1), Complex2(-1.5, -2), Complex2(-0.5, 1)};
    EXPECT_EQ(b.D[0], want);
    EXPECT_TRUE(b.brackets_pass());
    EXPECT_EQ(b.system.level(0), want); // δ^{1-k} = 1 at k = 1
}

TEST(TwoRatio, SyntheticHalfBracketsHoldCoveringFails) {
    const auto p = synthetic_two_ratio_windows(2.0, 3.0, 0.5, 12);
    const auto b = build_two_ratio_system(p.A, p.B, 0.5, 12);
    EXPECT_TRUE(b.brackets_pass());
    for (const auto& br : b.brackets) {
        EXPECT_TRUE(br.sum_in_box);
        EXPECT_TRUE(br.diff_in_box);
    }
    for (const auto& level : b.D) {
        ASSERT_EQ(level.size(), 4u);
        EXPECT_EQ(level[2], -level[0]);
        EXPECT_EQ(level[3], -level[1]);
    }
    EXPECT_TRUE(b.system.nested_ball_holds());
    // the images δQ + δ^{1-k}d reach at most ~3.5 < 5 along the real axis
    EXPECT_FALSE(b.covering_pass());
    for (const auto& c : b.covering) {
        ASSERT_TRUE(c.witness.has_value());
        EXPECT_GT(c.witness_gap, 1.0);
    }
}

TEST(TwoRatio, LargerContractionCoversAndAddresses) {
    const double delta = 0.9;
    const std::size_t K = 4;
    const auto p = synthetic_two_ratio_windows(2.0, 3.0, delta, K);
    const auto b = build_two_ratio_system(p.A, p.B, delta, K);
    EXPECT_TRUE(b.brackets_pass());
    EXPECT_TRUE(b.covering_pass());
    const Rect Q = Rect::square(5);
    for (Complex2 target : {Complex2(0, 0), Complex2(4.9, -4.9), Complex2(-2.5, 1.25)}) {
        const auto a = address_for_target(b.system, Q, target, K);
        EXPECT_LE(a.error, a.bound);
        const auto ex = expand_address(b, p.A, p.B, a.digits);
        EXPECT_LE(max_norm(ex.block_sum - a.point), 1e-9);
        // recompute from the emitted signs
        Complex2 s;
        for (auto n : ex.usedA) s += ex.signsA[n] * p.A[n];
        for (auto n : ex.usedB) s += ex.signsB[n] * p.B[n];
        EXPECT_LE(max_norm(s - ex.block_sum), 1e-12);
    }
}

TEST(TwoRatio, GeneralRatiosReduceToNormalForm) {
    const auto p = synthetic_two_ratio_windows(-1.0, 0.5, 0.5, 6);
    const auto b = build_two_ratio_system(p.A, p.B, 0.5, 6);
    EXPECT_TRUE(b.brackets_pass());
}

TEST(TwoRatio, WindowsAwayFromTheRatioFail) {
    // ratio 1 windows never enter Γ_k for t = 2
    const auto w = make_window({LinearRatioFamily{RatioValue::finite(1.0), 1.0, 1.0}, std::nullopt}, 5000);
    EXPECT_THROW(build_two_ratio_system(w, w, 0.5, 3), Error);
}
