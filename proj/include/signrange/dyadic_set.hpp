#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "signrange/rational.hpp"
#include "signrange/sequence.hpp"
#include "signrange/signs.hpp"

namespace signrange {

/// Membership in A = union_{n>=1} 2^{-n} (Z + [-1/4, 1/4]).
struct MembershipResult {
    bool member = false;
    std::optional<int> witness; ///< smallest n >= 1 with dist(2^n y, Z) <= 1/4
};

/// Exact scan of 2^n p mod q. The residues are periodic from n = v_2(q) on, so
/// the scan stops after the preperiod plus one full period.
MembershipResult membership_in_A(const Rational& y);

/// Structure of the imaginary part of a signed dyadic-tower sum.
struct TowerImagReport {
    std::vector<std::int64_t> block_totals; ///< l_k = sum of signs over block k (index 0 unused)
    Rational imag;                          ///< sum_k l_k 2^{-m_k-n_k}, exact
    std::size_t k0 = 0;                     ///< last block with |l_k| 2^{-m_k} > 1 (0 if none)
    int level = 0;                          ///< m_{k0} + n_{k0}
    double tail_scaled = 0.0;               ///< 2^{level} · sum_{k>k0} l_k 2^{-m_k-n_k}
    double tail_bound = 0.25;               ///< 2^{-(n_{k0+1}-n_{k0}-m_{k0}-1)}, or 0 with no tail
    bool tail_within_bound = false;
    MembershipResult membership;            ///< exact membership of imag in A
    bool in_A = false;                      ///< tail_within_bound && tail_bound <= 1/4 && membership.member
};

/// Decomposes the imaginary part of sum x_j c_j over a block-aligned dyadic-tower
/// prefix. signs.size() must equal block_end(k) - 1 for some block k.
TowerImagReport ex42_imag_report(const DyadicTowerFamily& tower, const SignVector& signs);

inline bool ex42_imag_in_A(const DyadicTowerFamily& tower, const SignVector& signs) {
    return ex42_imag_report(tower, signs).in_A;
}

} // namespace signrange
