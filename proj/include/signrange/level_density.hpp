#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "signrange/complex2.hpp"
#include "signrange/signs.hpp"

namespace signrange {

/// Λ ⊆ ℕ = {1, 2, ...}: an explicit sorted set or the progression {kq + j : k >= 0} ∩ ℕ.
class IndexSet {
public:
    static IndexSet explicit_set(std::vector<std::uint64_t> members);
    static IndexSet progression(std::uint64_t q, std::uint64_t j);
    /// {1, 4, 9, ...} up to horizon.
    static IndexSet squares(std::uint64_t horizon);

    bool is_progression() const { return q_ != 0; }
    std::uint64_t q() const { return q_; }
    std::uint64_t j() const { return j_; }
    const std::vector<std::uint64_t>& members() const { return members_; }

    bool contains(std::uint64_t n) const;
    /// #(Λ ∩ [1, k]).
    std::uint64_t count(std::uint64_t k) const;

private:
    std::vector<std::uint64_t> members_;
    std::uint64_t q_ = 0, j_ = 0;
};

struct DensityReport {
    std::vector<std::uint64_t> checkpoints; ///< k_i = ceil(horizon 2^{-i}) while k_i >= 10
    std::vector<double> ratios;             ///< #(Λ ∩ [1, k_i]) / k_i
    double upper = 0.0;                     ///< max over checkpoints with k >= horizon/2
    double lower = 0.0;                     ///< min over the same checkpoints
    std::uint64_t horizon = 0;
};

DensityReport density(const IndexSet& set, std::uint64_t horizon);

/// 2^{-k} for the first 1-based disagreement k, 0 for equal words.
double seq_metric(const SignVector& x, const SignVector& y);

/// First 1-based disagreement, 0 for equal words.
std::size_t first_disagreement(const SignVector& x, const SignVector& y);

/// The subword of x on positions (1-based) outside Λ.
SignVector h_lambda(const SignVector& x, const IndexSet& set);

struct HolderReport {
    bool deterministic_pass = false; ///< m_k <= eps k for every k in (k0, N]
    bool holds_from_one = false;     ///< additionally k0 == 0
    std::size_t k0 = 0;
    bool sampled_pass = false;
    std::size_t samples = 0;
    double worst_log2_ratio = 0.0;   ///< max of log2 d(h x, h y) - (1 - eps) log2 d(x, y); <= 0 passes
    std::size_t worst_k = 0;         ///< disagreement index of the worst pair
    std::size_t worst_kh = 0;        ///< disagreement index after deletion (0: equal)
    bool pass() const { return deterministic_pass && sampled_pass; }
};

/// Checks d(h_Λ x, h_Λ y) <= d(x, y)^{1-eps} in the log2 domain on length-N words:
/// exactly via m_k = #(Λ ∩ [1, k-1]) and on random pairs first differing at k > k0.
/// Throws Error(Precondition) when the density estimate of Λ at N is not below eps.
HolderReport holder_check(const IndexSet& set, double eps, std::size_t samples, std::size_t N, std::uint64_t seed);

/// Predicate on sign prefixes (length k >= 1).
using PrefixPredicate = std::function<bool(std::span<const std::int8_t>)>;

struct BoxDimReport {
    std::vector<std::uint64_t> survivors; ///< L_k for k = 1..depth
    double estimate = 0.0;                ///< least-squares slope of log2 L_k over the last ceil(depth/2) k
    bool all_rejected = false;
    bool extinct = false;                 ///< some L_k = 0
};

/// Counts prefixes whose every initial segment satisfies the predicate. The
/// predicate must be safe to call concurrently.
BoxDimReport box_dim_estimate(const PrefixPredicate& member, std::size_t depth, unsigned workers = 1);

/// ‖S_k - c‖ <= delta + sum_{n>k} ‖c_n‖ + tail_extra, with S_k the signed prefix sum.
PrefixPredicate ball_feasible_predicate(std::vector<Complex2> terms, Complex2 c, double delta,
                                        double tail_extra = 0.0);

} // namespace signrange
