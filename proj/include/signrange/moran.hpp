#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "signrange/complex2.hpp"
#include "signrange/sequence.hpp"
#include "signrange/signs.hpp"

namespace signrange {

/// Leveled affine contractions z -> r z + d_{k,i}. Translations are stored as the
/// effective offsets f_{k,i}(0), so level-dependent scalings live inside d.
class MoranSystem {
public:
    MoranSystem(double r, std::vector<std::vector<Complex2>> levels);

    double contraction() const { return r_; }
    std::size_t levels() const { return levels_.size(); }
    const std::vector<Complex2>& level(std::size_t k) const { return levels_.at(k); } ///< 0-based
    const std::vector<std::vector<Complex2>>& all_levels() const { return levels_; }

    /// M = sup ‖f_{k,i}(0)‖.
    double offset_bound() const { return M_; }
    /// R = 2M / (1 - r), strictly above the M / (1 - r) needed for nested balls.
    double ball_radius() const { return 2.0 * M_ / (1.0 - r_); }

    /// ‖d‖ + r R <= R for every map: each image of B(0, R) stays in B(0, R).
    bool nested_ball_holds() const;

private:
    double r_;
    std::vector<std::vector<Complex2>> levels_;
    double M_ = 0.0;
};

constexpr std::size_t kMaxAttractorPoints = std::size_t{1} << 24;

struct AttractorCloud {
    std::vector<Complex2> points; ///< f_σ(0) in lexicographic digit order
    double error_radius = 0.0;    ///< r^depth R
    double R = 0.0;
    std::size_t depth = 0;
};

/// All f_σ(0) = sum_k r^{k-1} d_{k,σ_k} for |σ| = depth, enumerated in parallel
/// over the first digit.
AttractorCloud attractor_points(const MoranSystem& system, std::size_t depth, unsigned workers = 1);

struct CoverLevel {
    bool covered = false;
    std::optional<Complex2> witness; ///< uncovered point of Q, farthest from the images
    double witness_gap = 0.0;        ///< its max-norm distance to the union of images
};

/// Image of Q under z -> r z + d.
Rect image_rect(const Rect& Q, double r, Complex2 d);

/// Decides Q ⊆ union_i f_{k,i}(Q) at every level by testing every cell of the
/// arrangement cut out by the image edges. Edges are compared with tolerance `tol`.
std::vector<CoverLevel> covering_check(const MoranSystem& system, const Rect& Q, double tol = 1e-12);

/// Decides Q ⊆ union of rectangles.
CoverLevel rect_cover(const Rect& Q, const std::vector<Rect>& pieces, double tol = 1e-12);

struct BlockSelection {
    std::vector<std::vector<std::size_t>> blocks; ///< 0-based positions, Λ_1..Λ_K
    std::vector<double> a_sums;                   ///< sum a_n sgn(b_n) over Λ_k
    std::vector<double> b_sums;                   ///< sum |b_n| over Λ_k
    std::vector<double> eta;
    double delta = 0.5;
    double t = 0.0;
};

/// Greedy block choice from Γ_k = {n : |a_n/b_n - t| + ‖c_n‖ < η_k}: scan
/// forward from the previous block, skip any term that would push sum |b_n| past
/// δ^k + η_k, stop once the sum reaches δ^k. A window that runs out is accepted
/// if the sum reached δ^k - η_k.
BlockSelection select_blocks(const SequenceWindow& window, double t, double delta, const std::vector<double>& eta);

/// η_k = δ^k / 8 for k = 1..K.
std::vector<double> eighth_schedule(double delta, std::size_t K);

struct BracketCheck {
    std::size_t level = 0; ///< 1-based
    double a1 = 0, b1 = 0, alpha1 = 0, beta1 = 0;
    bool a_ok = false, b_ok = false, alpha_ok = false, beta_ok = false;
    bool sum_in_box = false;  ///< (a1 + α1, b1 + β1) ∈ [0, 5δ^k]²
    bool diff_in_box = false; ///< (a1 - α1, b1 - β1) ∈ [0, 5δ^k] × [-5δ^k, 0]
    bool all() const { return a_ok && b_ok && alpha_ok && beta_ok; }
    std::string first_failure() const;
};

struct TwoRatioBuild {
    MoranSystem system{0.5, {{Complex2{}}}};
    std::vector<std::vector<Complex2>> D; ///< raw D_k in order +(sum), +(diff), -(sum), -(diff)
    BlockSelection selA, selB;            ///< selB runs on the swapped window β + iα
    std::vector<BracketCheck> brackets;
    std::vector<CoverLevel> covering;     ///< Q = [-5, 5]²
    double delta = 0.5;
    bool brackets_pass() const;
    bool covering_pass() const;
};

/// windowA has a_n/b_n -> 2, windowB has β_n/α_n -> 3. Builds D_k from the
/// block sums and the system f_{k,d}(z) = δ z + δ^{1-k} d. Throws
/// Error(BracketViolation) naming the level and inequality when a bracket fails,
/// unless `throw_on_violation` is false.
TwoRatioBuild build_two_ratio_system(const SequenceWindow& windowA, const SequenceWindow& windowB, double delta,
                                     std::size_t K, bool throw_on_violation = true);

/// Terms (2 + i)/n-style windows with a/b = tA and β/α = tB, mapped into the
/// normal form (ratios 2 and 3) by normal_form_matrix. The horizon is doubled from
/// `start` until both block selections succeed (at most `max_horizon`).
struct SyntheticPair {
    SequenceWindow A{{Complex2{}}};
    SequenceWindow B{{Complex2{}}};
};
SyntheticPair synthetic_two_ratio_windows(double tA, double tB, double delta, std::size_t K,
                                          std::size_t start = 1024, std::size_t max_horizon = std::size_t{1} << 24);

struct AddressResult {
    std::vector<std::size_t> digits; ///< 1-based, digit k in 1..n_k
    Complex2 point;                  ///< f_σ(0)
    double error = 0.0;              ///< ‖f_σ(0) - target‖
    double bound = 0.0;              ///< r^depth · max(R, max‖q‖ over q in Q)
};

/// Greedy pullback: at level k take the first map whose image of Q holds the
/// current point, then pull back. Throws Error(TargetEscapes) when no image does.
AddressResult address_for_target(const MoranSystem& system, const Rect& Q, Complex2 target, std::size_t depth,
                                 double tol = 1e-9);

/// f_σ(0) for an explicit 1-based address.
Complex2 address_point(const MoranSystem& system, const std::vector<std::size_t>& digits);

struct ExpandedAddress {
    SignVector signsA, signsB;             ///< +1 outside the selected blocks
    std::vector<std::size_t> usedA, usedB; ///< positions inside Λ_k / Γ_k, ascending
    Complex2 block_sum;                    ///< signed sum over the used positions of both windows
};

/// Signs on Λ_k and Γ_k realizing the digits of a two-ratio address.
ExpandedAddress expand_address(const TwoRatioBuild& build, const SequenceWindow& windowA,
                               const SequenceWindow& windowB, const std::vector<std::size_t>& digits);

} // namespace signrange
