#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "signrange/error.hpp"
#include "signrange/oracle.hpp"
#include "signrange/ratio.hpp"
#include "signrange/selection.hpp"

using namespace signrange;

namespace {

std::vector<Complex2> unit_ball(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(-1, 1);
    std::vector<Complex2> t;
    for (std::size_t i = 0; i < n; ++i) {
        t.push_back({u(rng), u(rng)});
    }
    return t;
}

Complex2 signed_sum(std::span<const Complex2> t, const SignVector& s) {
    Complex2 acc;
    for (std::size_t i = 0; i < t.size(); ++i) {
        acc += s[i] * t[i];
    }
    return acc;
}

bool admissible(const std::array<Complex2, 5>& c) {
    for (std::size_t n = 0; n + 1 < 5; ++n) {
        if (max_norm(c[n] + c[n + 1]) <= 1.0 || max_norm(c[n] - c[n + 1]) <= 1.0) {
            return false;
        }
    }
    return true;
}

} // namespace

TEST(Pairable, Examples) {
    EXPECT_FALSE(pairable({1, 0.9}, {1, -0.9}).has_value());
    const Complex2 c(0.4, -0.7);
    EXPECT_EQ(pairable(c, c), -1);
    EXPECT_EQ(pairable({0.3, 0.2}, {0.4, -0.1}), 1);
    EXPECT_THROW(pairable({1.5, 0}, {0, 0}), Error);
}

TEST(Pairable, AgreesWithPairingFactOnGridAndSamples) {
    // eighths are exact in binary, so boundary sums compare exactly
    std::vector<double> grid;
    for (int k = -8; k <= 8; ++k) {
        grid.push_back(k / 8.0);
    }
    std::size_t checked = 0;
    for (double a1 : grid)
        for (double b1 : grid)
            for (double a2 : grid)
                for (double b2 : grid) {
                    const Complex2 c1(a1, b1), c2(a2, b2);
                    ASSERT_EQ(!pairable(c1, c2).has_value(), pairing_fact_blocks(c1, c2))
                        << a1 << " " << b1 << " " << a2 << " " << b2;
                    ++checked;
                }
    EXPECT_EQ(checked, 17u * 17 * 17 * 17);
    std::mt19937_64 rng(1);
    for (int i = 0; i < 200000; ++i) {
        const auto t = unit_ball(rng, 2);
        ASSERT_EQ(!pairable(t[0], t[1]).has_value(), pairing_fact_blocks(t[0], t[1]));
    }
}

TEST(Combine5, AlternatingExample) {
    const Complex2 p(1, 0.9), m(1, -0.9);
    const std::array<Complex2, 5> c{p, m, p, m, p};
    const auto r = combine5(c);
    EXPECT_EQ(r.signs, (SignVector{1, -1, -1, 1, 1}));
    EXPECT_TRUE(r.used_u);
    EXPECT_EQ(r.u, Complex2(0, 0));
    EXPECT_EQ(r.sum, p);
    EXPECT_LE(max_norm(r.sum), 2.0);
}

TEST(Combine5, SmallerRealParts) {
    const Complex2 p(0.6, 0.9), m(0.6, -0.9);
    const std::array<Complex2, 5> c{p, m, p, m, p};
    const auto r = combine5(c);
    EXPECT_EQ(r.u, Complex2(0, 0));
    EXPECT_EQ(r.signs, (SignVector{1, -1, -1, 1, 1}));
    EXPECT_NEAR(max_norm(r.sum), 0.9, 1e-15);
}

TEST(Combine5, PreconditionNamesPair) {
    const Complex2 p(1, 0.9), m(1, -0.9);
    const std::array<Complex2, 5> c{p, m, p, p, m};
    try {
        combine5(c);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Precondition);
        EXPECT_NE(std::string(e.what()).find("(3,4)"), std::string::npos);
    }
}

TEST(Combine5, RandomAdmissibleInputs) {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> mag(0.5, 1.0);
    std::size_t tested = 0;
    for (int trial = 0; trial < 400000 && tested < 5000; ++trial) {
        // alternate the sign pattern of b to make admissibility likely
        std::array<Complex2, 5> c;
        for (std::size_t n = 0; n < 5; ++n) {
            c[n] = {(rng() & 1 ? 1 : -1) * mag(rng), (rng() & 1 ? 1 : -1) * mag(rng)};
        }
        if (!admissible(c)) {
            continue;
        }
        ++tested;
        const auto r = combine5(c);
        ASSERT_LE(max_norm(r.sum), 2.0);
        ASSERT_LE(std::abs(r.u.im), 1.0 + 1e-12);
        ASSERT_LE(std::abs(r.v.im), 1.0 + 1e-12);
        if (std::abs(r.u.re) > 1.0) {
            ASSERT_LE(std::abs(r.v.re), 1.0);
        }
        ASSERT_EQ(signed_sum(c, r.signs), r.sum);
    }
    EXPECT_EQ(tested, 5000u);
}

TEST(BoundedSigns, Examples) {
    const auto a = bounded_signs(SequenceWindow({1.0, 1.0, 1.0, 1.0}));
    EXPECT_EQ(a.signs, (SignVector{1, -1, 1, -1}));
    EXPECT_EQ(a.prefix_bound, 1.0);

    const Complex2 c(0.3, -0.6);
    const auto b = bounded_signs(SequenceWindow({c}));
    EXPECT_EQ(b.signs, (SignVector{1}));
    EXPECT_EQ(b.prefix_bound, max_norm(c));
}

TEST(BoundedSigns, RandomUnitBall) {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 10; ++trial) {
        const auto t = unit_ball(rng, 1000);
        const auto r = bounded_signs(t);
        ASSERT_EQ(r.signs.size(), t.size());
        EXPECT_LE(r.prefix_bound, 5.0);
        EXPECT_EQ(r.prefix_bound, max_prefix_norm(t, r.signs));
        EXPECT_EQ(r.sum, signed_sum(t, r.signs));
        EXPECT_EQ(r.fallbacks, 0u);
    }
}

TEST(BoundedSigns, HardAlternatingPattern) {
    // adjacent terms never pair, so every step goes through combine5
    std::vector<Complex2> t;
    for (int i = 0; i < 3000; ++i) {
        t.push_back(i % 2 ? Complex2(0.95, -0.9) : Complex2(0.9, 0.95));
    }
    const auto r = bounded_signs(t);
    EXPECT_LE(r.prefix_bound, 5.0);
    EXPECT_GT(r.combines, 0u);
}

TEST(BoundedSigns, RescalesLargeTerms) {
    std::mt19937_64 rng(4);
    auto t = unit_ball(rng, 300);
    for (auto& c : t) {
        c *= 7.0;
    }
    const auto r = bounded_signs(t);
    EXPECT_LE(r.prefix_bound, 5.0 * sup_norm(t));
    EXPECT_EQ(r.prefix_bound, max_prefix_norm(t, r.signs));
}

TEST(BoundedSigns, NotBelowExhaustiveOptimum) {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 30; ++trial) {
        const auto t = unit_ball(rng, 1 + trial % 12);
        const auto r = bounded_signs(t);
        const auto opt = min_prefix_discrepancy(SequenceWindow(t));
        EXPECT_GE(r.prefix_bound + 1e-12, opt.value);
        EXPECT_LE(r.prefix_bound, 5.0);
    }
}

TEST(TailControl, GeometricAndZero) {
    std::vector<Complex2> g;
    for (int k = 0; k <= 12; ++k) {
        g.push_back(std::ldexp(1.0, -k));
    }
    const auto r = tail_control(g);
    EXPECT_LE(max_norm(r.sum), 5.0);
    EXPECT_EQ(r.sum, signed_sum(g, r.signs));

    const auto z = tail_control(std::vector<Complex2>(10));
    EXPECT_EQ(z.sum, Complex2(0, 0));
}

TEST(TailControl, BlockwiseInvariants) {
    const SequenceSpec ex41{HarmonicLogAltFamily{}, std::nullopt};
    const auto w = make_window(ex41, 10000);
    const auto r = tail_control(w);
    const double S = sup_norm(w.terms());
    EXPECT_LE(max_norm(r.sum), 5.0 * S);
    std::size_t next = 0;
    for (const auto& b : r.blocks) {
        EXPECT_EQ(b.begin, next);
        next = b.end;
        EXPECT_LE(b.sup, b.bound);
        EXPECT_LE(b.internal_prefix, 5.0 * b.sup + 1e-15);
        // recompute the block's own prefix bound from the emitted signs
        Complex2 s;
        double m = 0;
        for (std::size_t i = b.begin; i < b.end; ++i) {
            s += r.signs[i] * w[i];
            m = std::max(m, max_norm(s));
        }
        EXPECT_NEAR(m, b.internal_prefix, 1e-12);
        EXPECT_EQ(s, b.total);
    }
    EXPECT_EQ(next, w.size());
}

TEST(GreedyReal, Examples) {
    const std::vector<double> ones{1, 1};
    auto a = greedy_target_real(ones, 0.0);
    EXPECT_EQ(a.signs, (SignVector{1, -1}));
    EXPECT_EQ(a.residual, 0.0);
    a = greedy_target_real(ones, 2.0);
    EXPECT_EQ(a.signs, (SignVector{1, 1}));
    EXPECT_EQ(a.residual, 0.0);
    const std::vector<double> neg{-1, 1};
    a = greedy_target_real(neg, 0.5);
    EXPECT_EQ(a.signs, (SignVector{-1, -1}));
}

TEST(GreedyReal, HarmonicToPiOverFour) {
    std::vector<double> t;
    for (int n = 1; n <= 100000; ++n) {
        t.push_back(1.0 / n);
    }
    const auto r = greedy_target_real(t, std::numbers::pi / 4);
    EXPECT_TRUE(r.envelope_holds);
    ASSERT_TRUE(r.crossing.has_value());
    EXPECT_LE(std::abs(r.residual), 1e-4);
    // recompute the residual from the signs
    double s = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        s += r.signs[i] * t[i];
    }
    EXPECT_NEAR(std::numbers::pi / 4 - s, r.residual, 1e-12);
}

TEST(ApproxTarget, TwoRatioWindowToZero) {
    const SequenceSpec spec{
        InterleavedFamily{{{RatioValue::finite(0.5), 2.0, 1.0}, {RatioValue::finite(3.0), 1.0, 1.0}}}, std::nullopt};
    const auto w = make_window(spec, 100000);
    const auto ratios = detect_ratios(w, 12, 1.0);
    ASSERT_GE(ratios.size(), 2u);
    for (Complex2 c : {Complex2(0, 0), Complex2(1.5, -2.0), Complex2(-4, 3)}) {
        const auto r = approx_target_complex(w, ratios, c, 1e-2);
        const auto ps = partial_sums(w, r.signs);
        EXPECT_LE(max_norm(c - ps.back()), 1e-2);
        EXPECT_LE(max_norm(r.residual - (c - ps.back())), 1e-9);
    }
}

TEST(ApproxTarget, SingleRatio) {
    // a_n = (-1)^n n^{-3/4} dominates b_n = 1/n: one ratio, at infinity
    std::vector<Complex2> t;
    for (int n = 1; n <= 100000; ++n) {
        t.push_back({(n % 2 ? -1.0 : 1.0) * std::pow(n, -0.75), 1.0 / n});
    }
    const SequenceWindow w(t);
    const std::vector<RatioReport> ratios{dyadic_ratio_extract(w, 12)};
    for (Complex2 c : {Complex2(0.5, 0.3), Complex2(0, 0), Complex2(-4, 3)}) {
        const auto r = approx_target_complex(w, ratios, c, 1e-2);
        EXPECT_LE(max_norm(c - partial_sums(w, r.signs).back()), 1e-2);
    }
}

TEST(ApproxTarget, HarmonicLogAltAfterRegrouping) {
    const auto w = make_window({HarmonicLogAltFamily{}, std::nullopt}, 100000);
    // -c_{4k+1} + c_{4k+2} is nearly real: the pairs carry ratio ∞, the rest ratio 0
    std::vector<std::vector<std::size_t>> blocks;
    SignVector inner = SignVector::all_plus(w.size());
    RatioReport pairs, singles;
    pairs.ratio = RatioValue::infinity();
    singles.ratio = RatioValue::finite(0.0);
    for (std::size_t i = 0; i < w.size();) {
        if (i % 4 == 0 && i + 1 < w.size()) {
            blocks.push_back({i, i + 1});
            inner.set(i, -1);
            pairs.mask.push_back(blocks.size() - 1);
            i += 2;
        } else {
            blocks.push_back({i});
            singles.mask.push_back(blocks.size() - 1);
            ++i;
        }
    }
    const auto g = regroup(w, blocks, inner);
    const std::vector<RatioReport> ratios{pairs, singles};
    for (Complex2 c : {Complex2(-1, 2), Complex2(2, -3)}) {
        const auto r = approx_target_complex(g, ratios, c, 1e-2);
        SignVector x = inner;
        for (std::size_t k = 0; k < blocks.size(); ++k) {
            for (auto n : blocks[k]) {
                x.set(n, inner[n] * r.signs[k]);
            }
        }
        EXPECT_LE(max_norm(c - partial_sums(w, x).back()), 1e-2);
    }
}

TEST(ApproxTarget, AllPlusSumAndErrors) {
    const SequenceWindow w({Complex2(0.02, 0.01), Complex2(0.01, 0.02), Complex2(0.02, 0), Complex2(0, 0.03),
                            Complex2(0.01, 0.01)});
    const auto ratios = detect_ratios(w, 4, 1e-3);
    const auto r = approx_target_complex(w, ratios, partial_sums(w, SignVector::all_plus(5)).back(), 1e-9);
    EXPECT_EQ(r.signs, SignVector::all_plus(5));
    EXPECT_EQ(r.residual, Complex2(0, 0));
    try {
        approx_target_complex(w, ratios, Complex2(10, 10), 1e-2);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::InsufficientMass);
        EXPECT_NE(std::string(e.what()).find("shortfall"), std::string::npos);
    }
    try {
        approx_target_complex(w, {}, Complex2(0, 0), 1e-2);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NoRatio);
    }
}
