#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "signrange/complex2.hpp"
#include "signrange/ratio_value.hpp"
#include "signrange/sequence.hpp"
#include "signrange/signs.hpp"

namespace signrange {

/// Which coordinate ratio the dyadic refinement ran on.
enum class RatioBranch {
    BDominant, ///< refines a_n / b_n over terms with |a_n| <= |b_n|
    ADominant, ///< refines b_n / a_n over terms with |b_n| <= |a_n|; ratio = 1 / estimate
};

/// A ratio estimate at a finite horizon. All conclusions are diagnostic at `horizon`.
struct RatioReport {
    RatioValue ratio;
    RatioBranch branch = RatioBranch::BDominant;
    double lo = 0.0, hi = 0.0;        ///< final dyadic interval in the working coordinate
    std::vector<std::size_t> mask;    ///< retained 0-based window positions, ascending
    double mass = 0.0;                ///< sum of ‖c_n‖ over the mask
    int depth = 0;
    std::size_t horizon = 0;
    std::vector<double> level_mass;   ///< retained mass after each refinement level 0..depth

    /// Whether t lies in the final interval (mapped back from the working coordinate).
    bool contains(RatioValue t) const;
};

/// Dyadic nesting: pick the heavier coordinate branch, then keep the heavier
/// child interval [j/2^k, (j+1)/2^k] at every level k = 0..depth (ties keep the
/// lower child). The estimate is the midpoint of the final interval.
RatioReport dyadic_ratio_extract(const SequenceWindow& window, int depth);

/// Repeated extraction on the remaining indices while their mass stays at or
/// above mass_threshold. Reports with overlapping final intervals are merged;
/// the list is sorted by mass, heaviest first.
std::vector<RatioReport> detect_ratios(const SequenceWindow& window, int depth, double mass_threshold);

struct DirectionProfile {
    std::vector<double> angles;
    std::vector<double> masses;   ///< sum_n |cos θ a_n + sin θ b_n|
    double min_angle = 0.0;
    double min_mass = 0.0;
    std::size_t horizon = 0;
};

/// (cos θ, sin θ) for θ = jπ/M, reduced by octant symmetry so that mirrored
/// angles produce exactly mirrored components.
Complex2 sample_direction(std::size_t j, std::size_t M);

double directional_mass(const SequenceWindow& window, Complex2 direction);

/// Samples θ_j = jπ/M for j = 0..M-1. Requires M >= 4.
DirectionProfile nonsummability_profile(const SequenceWindow& window, std::size_t M);

/// Term-wise (a, b) -> matrix · (a, b). Requires a nonsingular matrix.
SequenceWindow apply_linear_map(const SequenceWindow& window, const Mat2& matrix);

/// New term k = sum_{n in blocks[k]} x_n c_n. Blocks hold 0-based positions and
/// must partition the window into consecutive runs in order.
SequenceWindow regroup(const SequenceWindow& window, std::span<const std::vector<std::size_t>> blocks,
                       const SignVector& signs);

/// Consecutive blocks of the given size (the last block may be shorter).
std::vector<std::vector<std::size_t>> uniform_blocks(std::size_t n, std::size_t block_size);

/// Matrix sending the direction of ratio `from_a` to (2, 1) and that of `from_b` to (1, 3),
/// the normal form in which the two-ratio Moran construction is stated.
/// A ratio t has direction (t, 1); the infinity marker has direction (1, 0).
Mat2 normal_form_matrix(RatioValue from_a, RatioValue from_b);

Complex2 ratio_direction(RatioValue t);

} // namespace signrange
