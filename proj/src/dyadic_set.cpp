#include "signrange/dyadic_set.hpp"

#include <bit>
#include <cmath>

#include "signrange/error.hpp"

namespace signrange {

namespace {

using i128 = __int128;

i128 abs128(i128 x) { return x < 0 ? -x : x; }

} // namespace

MembershipResult membership_in_A(const Rational& y) {
    const std::int64_t q = y.den();
    require(q < (std::int64_t{1} << 61), ErrorKind::InvalidArgument, "membership_in_A: denominator too large");
    std::int64_t r = y.num() % q;
    if (r < 0) {
        r += q;
    }
    auto close = [q](std::int64_t res) { return 4 * std::min(res, q - res) <= q; };

    const int s = std::countr_zero(static_cast<std::uint64_t>(q));
    const int periodic_from = std::max(s, 1);
    std::int64_t anchor = -1;
    for (int n = 1;; ++n) {
        r = (2 * r) % q;
        if (close(r)) {
            return {true, n};
        }
        if (n == periodic_from) {
            anchor = r;
        } else if (n > periodic_from && r == anchor) {
            return {false, std::nullopt};
        }
    }
}

TowerImagReport ex42_imag_report(const DyadicTowerFamily& tower, const SignVector& signs) {
    validate(SequenceSpec{tower, std::nullopt});
    const std::size_t N = signs.size();
    std::size_t K = 0;
    for (std::size_t k = 1; k <= tower.blocks(); ++k) {
        if (tower.block_end(k) - 1 == N) {
            K = k;
            break;
        }
    }
    require(K != 0, ErrorKind::NotBlockAligned,
            "prefix of length " + std::to_string(N) + " does not end at a block boundary");
    const int E = tower.m[K] + tower.n[K];
    require(E <= 56, ErrorKind::TooLarge, "block exponent too large for exact evaluation");

    TowerImagReport rep;
    rep.block_totals.assign(K + 1, 0);
    for (std::size_t k = 1; k <= K; ++k) {
        std::int64_t l = 0;
        for (std::uint64_t j = tower.block_begin(k); j < tower.block_end(k); ++j) {
            l += signs[j - 1];
        }
        rep.block_totals[k] = l;
    }

    auto exponent = [&](std::size_t k) { return tower.m[k] + tower.n[k]; };

    i128 num = 0; // imag = num / 2^E
    for (std::size_t k = 1; k <= K; ++k) {
        num += static_cast<i128>(rep.block_totals[k]) << (E - exponent(k));
    }
    rep.imag = Rational(static_cast<std::int64_t>(num), std::int64_t{1} << E);

    for (std::size_t k = 1; k <= K; ++k) {
        if (std::abs(rep.block_totals[k]) > (std::int64_t{1} << tower.m[k])) {
            rep.k0 = k;
        }
    }
    rep.level = exponent(rep.k0);

    // tail · 2^level = tail_num / 2^{E - level}
    i128 tail_num = 0;
    for (std::size_t k = rep.k0 + 1; k <= K; ++k) {
        tail_num += static_cast<i128>(rep.block_totals[k]) << (E - exponent(k));
    }
    const int shift = E - rep.level;
    rep.tail_scaled = std::ldexp(static_cast<double>(tail_num), -shift);
    if (rep.k0 < K) {
        const int gap = tower.n[rep.k0 + 1] - tower.n[rep.k0] - tower.m[rep.k0] - 1;
        rep.tail_bound = std::ldexp(1.0, -gap);
        // |tail_num| / 2^shift <= 2^{-gap}  <=>  |tail_num| · 2^gap <= 2^shift
        rep.tail_within_bound = abs128(tail_num) << gap <= (i128{1} << shift);
    } else {
        rep.tail_bound = 0.0;
        rep.tail_within_bound = tail_num == 0;
    }
    rep.membership = membership_in_A(rep.imag);
    rep.in_A = rep.tail_within_bound && rep.tail_bound <= 0.25 && rep.membership.member;
    return rep;
}

} // namespace signrange
