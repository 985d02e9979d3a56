#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "signrange/complex2.hpp"
#include "signrange/sequence.hpp"
#include "signrange/signs.hpp"

namespace signrange {

/// The finite range {sum x_n c_n : x in {-1,1}^N}, sorted lexicographically and
/// deduplicated at absolute tolerance 1e-12.
struct RangeSet {
    std::vector<Complex2> points;
    std::size_t source_length = 0;
};

constexpr std::size_t kMaxRangeLength = 26;
constexpr std::size_t kMaxDiscrepancyLength = 22;
constexpr std::size_t kMaxEquivarianceLength = 20;
constexpr double kRangeDedupTolerance = 1e-12;

/// Enumerates all 2^N signed sums. The first three signs pick one of eight
/// subtrees, which are evaluated on up to `workers` threads; the canonical sort
/// makes the result independent of the worker count.
RangeSet exact_range(const SequenceWindow& window, unsigned workers = 1);

/// Sort + tolerance deduplication used by exact_range.
std::vector<Complex2> canonical_point_set(std::vector<Complex2> points, double tol);

/// True iff each point of a is within tol (max-norm) of some point of b and vice versa.
bool same_point_set(std::span<const Complex2> a, std::span<const Complex2> b, double tol);

struct DiscrepancyResult {
    double value = 0.0;
    SignVector witness;
};

/// Exhaustive min over sign vectors of max_k ‖S_k‖. Among minimizers, the
/// lexicographically smallest vector wins with +1 ordered before -1.
DiscrepancyResult min_prefix_discrepancy(const SequenceWindow& window);

/// Compares M·exact_range(window) with exact_range(M·window) at tolerance 1e-9.
bool transform_equivariance_check(const SequenceWindow& window, const Mat2& matrix, unsigned workers = 1);

struct CoverageReport {
    Rect window;
    double epsilon = 0.0;
    double covered_fraction = 0.0;
    double worst_gap = 0.0;
    std::size_t cells = 0;
    Complex2 worst_center;
};

/// Grids the rectangle into cells of side at most epsilon (a degenerate side gets
/// one cell) and measures each cell center's max-norm distance to the range.
CoverageReport epsilon_net_coverage(const RangeSet& range, const Rect& window, double epsilon);

} // namespace signrange
