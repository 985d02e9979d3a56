#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "signrange/complex2.hpp"
#include "signrange/ratio.hpp"
#include "signrange/sequence.hpp"
#include "signrange/signs.hpp"

namespace signrange {

struct SelectionResult {
    SignVector signs;
    double prefix_bound = 0.0; ///< max_k ‖S_k‖, recomputed from `signs`
    Complex2 sum;              ///< S_N
    Complex2 residual;         ///< target - S_N when targeting, otherwise -S_N
};

/// Tolerance for the unit-norm preconditions of the pairing-based algorithms.
constexpr double kUnitTolerance = 1e-12;

/// A sign s with ‖c1 + s c2‖ <= 1 (+1 preferred), or nullopt when both
/// combinations exceed 1. Requires ‖c1‖, ‖c2‖ <= 1.
std::optional<int> pairable(Complex2 c1, Complex2 c2);

/// The pairing-fact predicate |a1|+|a2| > 1, |b1|+|b2| > 1, a1 a2 b1 b2 < 0.
bool pairing_fact_blocks(Complex2 c1, Complex2 c2);

struct Combine5Result {
    SignVector signs;
    Complex2 u; ///< c1 s1 - c2 s2 - c3 s3 + c4 s4, s_n = sign(a_n)
    Complex2 v; ///< c2 s2 - c3 s3 - c4 s4 + c5 s5
    bool used_u = true;
    Complex2 sum;
};

/// Five-term selection with ‖sum‖ <= 2. Requires ‖c_n‖ <= 1 and no adjacent
/// pair pairable; the error names the first offending pair.
Combine5Result combine5(std::span<const Complex2, 5> c);

struct BoundedSelection : SelectionResult {
    std::size_t merges = 0;
    std::size_t combines = 0;
    std::size_t fallbacks = 0; ///< combine steps where neither u nor v had norm <= 1
};

/// Prefix-bounded selection: merge buffered super-terms pairwise while possible,
/// otherwise collapse five of them with combine5. Terms are rescaled internally to
/// sup-norm 1, so the prefix bound is 5 sup ‖c_n‖, reported in original units.
BoundedSelection bounded_signs(std::span<const Complex2> terms);
inline BoundedSelection bounded_signs(const SequenceWindow& w) { return bounded_signs(w.terms()); }

struct TailBlock {
    std::size_t begin = 0, end = 0; ///< 0-based half-open range
    double bound = 0.0;             ///< 2^{-k} sup‖c‖
    double sup = 0.0;
    double internal_prefix = 0.0;   ///< max prefix norm inside the block
    Complex2 total;                 ///< oriented block sum
    int orientation = 1;
};

struct TailSelection : SelectionResult {
    std::vector<TailBlock> blocks;
};

/// Splits the window where the tail sup-norm halves, runs bounded_signs in each
/// block and orients blocks greedily to keep the running total small.
TailSelection tail_control(std::span<const Complex2> terms);
inline TailSelection tail_control(const SequenceWindow& w) { return tail_control(w.terms()); }

struct GreedyRealResult {
    SignVector signs;
    double residual = 0.0;                ///< a - S_N
    std::optional<std::size_t> crossing;  ///< first 0-based n with |a - S_n| <= |t_n|
    bool envelope_holds = true;
    double worst_envelope_excess = 0.0;   ///< max over m of |a - S_m| - envelope_m (<= 0 when holding)
};

/// x_n = sign(a - S_{n-1}) · sign(t_n), ties to +1. After the first crossing n*,
/// checks |a - S_m| <= max_{n* <= k <= m} |t_k| at every step.
GreedyRealResult greedy_target_real(std::span<const double> terms, double a);

/// Signs with ‖sum x_n c_n - c‖ <= eps, steering one coordinate per ratio class
/// after a linear change of coordinates. Two distinct ratios split the window;
/// one ratio runs the summable-part correction scheme.
SelectionResult approx_target_complex(const SequenceWindow& window, std::span<const RatioReport> ratios, Complex2 c,
                                      double eps);

} // namespace signrange
