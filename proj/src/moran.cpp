#include "signrange/moran.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "signrange/error.hpp"
#include "signrange/parallel.hpp"
#include "signrange/ratio.hpp"

namespace signrange {

MoranSystem::MoranSystem(double r, std::vector<std::vector<Complex2>> levels) : r_(r), levels_(std::move(levels)) {
    require(r > 0.0 && r < 1.0, ErrorKind::InvalidArgument, "contraction must lie in (0, 1)");
    require(!levels_.empty(), ErrorKind::InvalidArgument, "a Moran system needs at least one level");
    for (std::size_t k = 0; k < levels_.size(); ++k) {
        require(!levels_[k].empty(), ErrorKind::InvalidArgument, "level " + std::to_string(k + 1) + " has no maps");
        for (const auto& d : levels_[k]) {
            require(d.finite(), ErrorKind::InvalidArgument, "non-finite translation");
            M_ = std::max(M_, max_norm(d));
        }
    }
}

bool MoranSystem::nested_ball_holds() const {
    const double R = ball_radius();
    for (const auto& level : levels_) {
        for (const auto& d : level) {
            if (max_norm(d) + r_ * R > R * (1.0 + 1e-12)) {
                return false;
            }
        }
    }
    return true;
}

AttractorCloud attractor_points(const MoranSystem& system, std::size_t depth, unsigned workers) {
    require(depth >= 1 && depth <= system.levels(), ErrorKind::InvalidArgument,
            "depth must lie in [1, " + std::to_string(system.levels()) + "]");
    std::size_t total = 1;
    for (std::size_t k = 0; k < depth; ++k) {
        total *= system.level(k).size();
        require(total <= kMaxAttractorPoints, ErrorKind::TooLarge,
                "attractor enumeration exceeds 2^24 points at depth " + std::to_string(k + 1));
    }
    std::vector<double> scale(depth, 1.0);
    for (std::size_t k = 1; k < depth; ++k) {
        scale[k] = scale[k - 1] * system.contraction();
    }

    AttractorCloud cloud;
    cloud.depth = depth;
    cloud.R = system.ball_radius();
    cloud.error_radius = scale[depth - 1] * system.contraction() * cloud.R;
    cloud.points.resize(total);

    const auto& top = system.level(0);
    const std::size_t slice = total / top.size();
    parallel_for(top.size(), workers, [&](std::size_t digit) {
        std::size_t out = digit * slice;
        std::function<void(std::size_t, Complex2)> walk = [&](std::size_t k, Complex2 acc) {
            if (k == depth) {
                cloud.points[out++] = acc;
                return;
            }
            for (const auto& d : system.level(k)) {
                walk(k + 1, acc + scale[k] * d);
            }
        };
        walk(1, top[digit]);
    });
    return cloud;
}

Rect image_rect(const Rect& Q, double r, Complex2 d) {
    return {r * Q.x0 + d.re, r * Q.x1 + d.re, r * Q.y0 + d.im, r * Q.y1 + d.im};
}

namespace {

std::vector<double> representatives(double lo, double hi, std::vector<double> cuts) {
    std::vector<double> edges{lo, hi};
    for (double c : cuts) {
        if (c > lo && c < hi) {
            edges.push_back(c);
        }
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    std::vector<double> reps;
    for (std::size_t i = 0; i < edges.size(); ++i) {
        reps.push_back(edges[i]);
        if (i + 1 < edges.size()) {
            reps.push_back(0.5 * (edges[i] + edges[i + 1]));
        }
    }
    return reps;
}

} // namespace

CoverLevel rect_cover(const Rect& Q, const std::vector<Rect>& pieces, double tol) {
    require(Q.valid(), ErrorKind::InvalidArgument, "rectangle has inverted bounds");
    std::vector<double> xc, yc;
    for (const auto& p : pieces) {
        xc.insert(xc.end(), {p.x0, p.x1});
        yc.insert(yc.end(), {p.y0, p.y1});
    }
    // Coverage is constant on every cell of the arrangement, so one point per
    // cell (edge values and open-interval midpoints) decides it exactly.
    const auto xs = representatives(Q.x0, Q.x1, xc);
    const auto ys = representatives(Q.y0, Q.y1, yc);
    CoverLevel out;
    out.covered = true;
    double best2 = 0.0;
    for (double y : ys) {
        for (double x : xs) {
            const Complex2 p{x, y};
            // max-norm gap ranks witnesses; the Euclidean gap breaks ties
            double gap = std::numeric_limits<double>::infinity();
            double gap2 = gap;
            bool hit = false;
            for (const auto& piece : pieces) {
                if (piece.contains(p, tol)) {
                    hit = true;
                    break;
                }
                gap = std::min(gap, piece.distance(p));
                const double dx = std::max({piece.x0 - x, 0.0, x - piece.x1});
                const double dy = std::max({piece.y0 - y, 0.0, y - piece.y1});
                gap2 = std::min(gap2, std::hypot(dx, dy));
            }
            if (!hit && (out.covered || gap > out.witness_gap || (gap == out.witness_gap && gap2 > best2))) {
                out.covered = false;
                out.witness = p;
                out.witness_gap = gap;
                best2 = gap2;
            }
        }
    }
    return out;
}

std::vector<CoverLevel> covering_check(const MoranSystem& system, const Rect& Q, double tol) {
    std::vector<CoverLevel> out;
    for (const auto& level : system.all_levels()) {
        std::vector<Rect> pieces;
        for (const auto& d : level) {
            pieces.push_back(image_rect(Q, system.contraction(), d));
        }
        out.push_back(rect_cover(Q, pieces, tol));
    }
    return out;
}

std::vector<double> eighth_schedule(double delta, std::size_t K) {
    std::vector<double> eta(K);
    double p = 1.0;
    for (std::size_t k = 0; k < K; ++k) {
        p *= delta;
        eta[k] = p / 8.0;
    }
    return eta;
}

BlockSelection select_blocks(const SequenceWindow& window, double t, double delta, const std::vector<double>& eta) {
    require(delta > 0.0 && delta < 1.0, ErrorKind::InvalidArgument, "delta must lie in (0, 1)");
    require(!eta.empty(), ErrorKind::InvalidArgument, "eta schedule is empty");
    BlockSelection sel;
    sel.delta = delta;
    sel.eta = eta;
    sel.t = t;
    std::size_t next = 0;
    double target = 1.0;
    for (std::size_t k = 0; k < eta.size(); ++k) {
        target *= delta;
        const double lo = target - eta[k], hi = target + eta[k];
        std::vector<std::size_t> block;
        double bsum = 0.0, asum = 0.0;
        std::size_t n = next;
        for (; n < window.size() && bsum < target; ++n) {
            const Complex2 c = window[n];
            if (c.im == 0.0 || std::abs(c.re / c.im - t) + max_norm(c) >= eta[k]) {
                continue;
            }
            if (bsum + std::abs(c.im) > hi) {
                continue;
            }
            block.push_back(n);
            bsum += std::abs(c.im);
            asum += c.im < 0.0 ? -c.re : c.re;
        }
        if (bsum < lo) {
            fail(ErrorKind::InsufficientMass, "select_blocks: level " + std::to_string(k + 1) + " reached " +
                                                  std::to_string(bsum) + " of " + std::to_string(lo) +
                                                  " (shortfall " + std::to_string(lo - bsum) + ")");
        }
        next = n;
        sel.blocks.push_back(std::move(block));
        sel.a_sums.push_back(asum);
        sel.b_sums.push_back(bsum);
    }
    return sel;
}

std::string BracketCheck::first_failure() const {
    if (!a_ok) return "105/64 d^k <= a1 <= 153/64 d^k";
    if (!b_ok) return "7/8 d^k <= b1 <= 9/8 d^k";
    if (!alpha_ok) return "7/8 d^k <= alpha1 <= 9/8 d^k";
    if (!beta_ok) return "161/64 d^k <= beta1 <= 225/64 d^k";
    return "";
}

bool TwoRatioBuild::brackets_pass() const {
    return std::all_of(brackets.begin(), brackets.end(), [](const auto& b) { return b.all(); });
}

bool TwoRatioBuild::covering_pass() const {
    return std::all_of(covering.begin(), covering.end(), [](const auto& c) { return c.covered; });
}

namespace {

SequenceWindow swapped(const SequenceWindow& w) {
    std::vector<Complex2> out;
    out.reserve(w.size());
    for (const auto& c : w) {
        out.push_back({c.im, c.re});
    }
    return SequenceWindow(std::move(out), w.origin());
}

bool within(double x, double lo, double hi, double slack) { return x >= lo - slack && x <= hi + slack; }

} // namespace

TwoRatioBuild build_two_ratio_system(const SequenceWindow& windowA, const SequenceWindow& windowB, double delta,
                                     std::size_t K, bool throw_on_violation) {
    require(K >= 1, ErrorKind::InvalidArgument, "K must be positive");
    const auto eta = eighth_schedule(delta, K);
    TwoRatioBuild b;
    b.delta = delta;
    b.selA = select_blocks(windowA, 2.0, delta, eta);
    b.selB = select_blocks(swapped(windowB), 3.0, delta, eta);

    std::vector<std::vector<Complex2>> levels;
    double dk = 1.0;     // δ^k
    double inv = 1.0;    // δ^{1-k}
    for (std::size_t k = 0; k < K; ++k) {
        dk *= delta;
        if (k > 0) {
            inv /= delta;
        }
        BracketCheck br;
        br.level = k + 1;
        br.a1 = b.selA.a_sums[k];
        br.b1 = b.selA.b_sums[k];
        br.beta1 = b.selB.a_sums[k];
        br.alpha1 = b.selB.b_sums[k];
        const double s = 1e-12 * dk;
        br.a_ok = within(br.a1, 105.0 / 64 * dk, 153.0 / 64 * dk, s);
        br.b_ok = within(br.b1, 7.0 / 8 * dk, 9.0 / 8 * dk, s);
        br.alpha_ok = within(br.alpha1, 7.0 / 8 * dk, 9.0 / 8 * dk, s);
        br.beta_ok = within(br.beta1, 161.0 / 64 * dk, 225.0 / 64 * dk, s);
        br.sum_in_box = within(br.a1 + br.alpha1, 0, 5 * dk, s) && within(br.b1 + br.beta1, 0, 5 * dk, s);
        br.diff_in_box = within(br.a1 - br.alpha1, 0, 5 * dk, s) && within(br.b1 - br.beta1, -5 * dk, 0, s);
        if (throw_on_violation && !br.all()) {
            fail(ErrorKind::BracketViolation,
                 "level " + std::to_string(k + 1) + ": bracket " + br.first_failure() + " failed");
        }
        b.brackets.push_back(br);

        const Complex2 A{br.a1, br.b1}, B{br.alpha1, br.beta1};
        const std::vector<Complex2> D{A + B, A - B, -(A + B), -(A - B)};
        std::vector<Complex2> eff;
        for (const auto& d : D) {
            eff.push_back(inv * d);
        }
        b.D.push_back(D);
        levels.push_back(std::move(eff));
    }
    b.system = MoranSystem(delta, std::move(levels));
    b.covering = covering_check(b.system, Rect::square(5.0));
    return b;
}

SyntheticPair synthetic_two_ratio_windows(double tA, double tB, double delta, std::size_t K, std::size_t start,
                                          std::size_t max_horizon) {
    require(tB != 0.0 && std::isfinite(tA) && std::isfinite(tB), ErrorKind::InvalidArgument,
            "ratios must be finite and ratioB nonzero");
    const Mat2 M = normal_form_matrix(RatioValue::finite(tA), RatioValue::finite(1.0 / tB));
    const SequenceSpec a{LinearRatioFamily{RatioValue::finite(tA), 1.0, 1.0}, std::nullopt};
    const SequenceSpec b{LinearRatioFamily{RatioValue::finite(1.0 / tB), tB, 1.0}, std::nullopt};
    const auto eta = eighth_schedule(delta, K);
    for (std::size_t N = std::max<std::size_t>(start, 1);; N *= 2) {
        SyntheticPair p{apply_linear_map(make_window(a, N), M), apply_linear_map(make_window(b, N), M)};
        try {
            select_blocks(p.A, 2.0, delta, eta);
            select_blocks(swapped(p.B), 3.0, delta, eta);
            return p;
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::InsufficientMass || 2 * N > max_horizon) {
                throw;
            }
        }
    }
}

AddressResult address_for_target(const MoranSystem& system, const Rect& Q, Complex2 target, std::size_t depth,
                                 double tol) {
    require(depth >= 1 && depth <= system.levels(), ErrorKind::InvalidArgument,
            "depth must lie in [1, " + std::to_string(system.levels()) + "]");
    require(Q.contains(target, tol), ErrorKind::TargetEscapes, "target lies outside Q");
    const double r = system.contraction();
    AddressResult res;
    Complex2 z = target;
    double scale = 1.0;
    for (std::size_t k = 0; k < depth; ++k) {
        const auto& level = system.level(k);
        std::size_t pick = level.size();
        for (std::size_t i = 0; i < level.size(); ++i) {
            if (image_rect(Q, r, level[i]).contains(z, tol)) {
                pick = i;
                break;
            }
        }
        if (pick == level.size()) {
            fail(ErrorKind::TargetEscapes, "no level-" + std::to_string(k + 1) + " image holds the pulled-back point");
        }
        res.digits.push_back(pick + 1);
        z = Q.clamp((1.0 / r) * (z - level[pick]));
        scale *= r;
    }
    res.point = address_point(system, res.digits);
    res.error = max_norm(res.point - target);
    const double qmax = std::max({std::abs(Q.x0), std::abs(Q.x1), std::abs(Q.y0), std::abs(Q.y1)});
    res.bound = scale * std::max(system.ball_radius(), qmax);
    return res;
}

Complex2 address_point(const MoranSystem& system, const std::vector<std::size_t>& digits) {
    require(digits.size() <= system.levels(), ErrorKind::InvalidArgument, "address longer than the system");
    Complex2 acc;
    double scale = 1.0;
    for (std::size_t k = 0; k < digits.size(); ++k) {
        const auto& level = system.level(k);
        require(digits[k] >= 1 && digits[k] <= level.size(), ErrorKind::InvalidArgument,
                "digit " + std::to_string(k + 1) + " out of range");
        acc += scale * level[digits[k] - 1];
        scale *= system.contraction();
    }
    return acc;
}

ExpandedAddress expand_address(const TwoRatioBuild& build, const SequenceWindow& windowA,
                               const SequenceWindow& windowB, const std::vector<std::size_t>& digits) {
    require(digits.size() <= build.D.size(), ErrorKind::InvalidArgument, "address longer than the construction");
    ExpandedAddress ex;
    ex.signsA = SignVector::all_plus(windowA.size());
    ex.signsB = SignVector::all_plus(windowB.size());
    // D_k order: +(A+B), +(A-B), -(A+B), -(A-B) -> (εA, εB).
    static constexpr int kEps[4][2] = {{1, 1}, {1, -1}, {-1, -1}, {-1, 1}};
    for (std::size_t k = 0; k < digits.size(); ++k) {
        require(digits[k] >= 1 && digits[k] <= 4, ErrorKind::InvalidArgument, "two-ratio digits lie in 1..4");
        const int ea = kEps[digits[k] - 1][0], eb = kEps[digits[k] - 1][1];
        for (auto n : build.selA.blocks[k]) {
            const int s = ea * (windowA[n].im < 0.0 ? -1 : 1);
            ex.signsA.set(n, s);
            ex.usedA.push_back(n);
            ex.block_sum += s * windowA[n];
        }
        for (auto n : build.selB.blocks[k]) {
            const int s = eb * (windowB[n].re < 0.0 ? -1 : 1);
            ex.signsB.set(n, s);
            ex.usedB.push_back(n);
            ex.block_sum += s * windowB[n];
        }
    }
    return ex;
}

} // namespace signrange
