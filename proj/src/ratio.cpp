#include "signrange/ratio.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "signrange/error.hpp"

namespace signrange {

namespace {

struct Candidate {
    std::size_t pos;
    double w;    // working coordinate value in [-1, 1]
    double mass; // ‖c_n‖
};

double interval_mass(std::span<const Candidate> cs, double lo, double hi) {
    double m = 0.0;
    for (const auto& c : cs) {
        if (c.w >= lo && c.w <= hi) {
            m += c.mass;
        }
    }
    return m;
}

bool intervals_meet(double lo1, double hi1, double lo2, double hi2) { return lo1 <= hi2 && lo2 <= hi1; }

bool overlapping(const RatioReport& x, const RatioReport& y) {
    if (x.branch == y.branch) {
        return intervals_meet(x.lo, x.hi, y.lo, y.hi);
    }
    // The branches share only |t| = 1, i.e. working value ±1 in both.
    for (double edge : {-1.0, 1.0}) {
        if (x.lo <= edge && edge <= x.hi && y.lo <= edge && edge <= y.hi) {
            return true;
        }
    }
    return false;
}

} // namespace

bool RatioReport::contains(RatioValue t) const {
    if (branch == RatioBranch::BDominant) {
        return !t.infinite && t.value >= lo && t.value <= hi;
    }
    if (t.infinite) {
        return lo <= 0.0 && 0.0 <= hi;
    }
    if (t.value == 0.0) {
        return false;
    }
    const double w = 1.0 / t.value;
    return w >= lo && w <= hi;
}

RatioReport dyadic_ratio_extract(const SequenceWindow& window, int depth) {
    require(depth >= 0 && depth <= 60, ErrorKind::InvalidArgument, "depth must lie in [0, 60]");
    double mass_a = 0.0, mass_b = 0.0;
    for (const auto& c : window) {
        mass_a += std::abs(c.re);
        mass_b += std::abs(c.im);
    }
    RatioReport rep;
    rep.depth = depth;
    rep.horizon = window.size();
    rep.branch = mass_b >= mass_a ? RatioBranch::BDominant : RatioBranch::ADominant;

    std::vector<Candidate> cands;
    for (std::size_t i = 0; i < window.size(); ++i) {
        const Complex2 c = window[i];
        if (rep.branch == RatioBranch::BDominant) {
            if (c.im != 0.0 && std::abs(c.re) <= std::abs(c.im)) {
                cands.push_back({i, c.re / c.im, max_norm(c)});
            }
        } else if (c.re != 0.0 && std::abs(c.im) <= std::abs(c.re)) {
            cands.push_back({i, c.im / c.re, max_norm(c)});
        }
    }

    // Level 0 chooses between [-1, 0] and [0, 1]; level k halves the current interval.
    double lo = -1.0, hi = 0.0;
    if (interval_mass(cands, 0.0, 1.0) > interval_mass(cands, -1.0, 0.0)) {
        lo = 0.0;
        hi = 1.0;
    }
    rep.level_mass.push_back(interval_mass(cands, lo, hi));
    for (int k = 1; k <= depth; ++k) {
        const double mid = std::ldexp(lo + hi, -1);
        const double lower = interval_mass(cands, lo, mid);
        const double upper = interval_mass(cands, mid, hi);
        if (upper > lower) {
            lo = mid;
        } else {
            hi = mid;
        }
        rep.level_mass.push_back(std::max(lower, upper));
    }
    rep.lo = lo;
    rep.hi = hi;
    for (const auto& c : cands) {
        if (c.w >= lo && c.w <= hi) {
            rep.mask.push_back(c.pos);
            rep.mass += c.mass;
        }
    }

    const double estimate = std::ldexp(lo + hi, -1);
    if (rep.branch == RatioBranch::BDominant) {
        rep.ratio = RatioValue::finite(estimate);
    } else if (lo <= 0.0 && 0.0 <= hi) {
        rep.ratio = RatioValue::infinity();
    } else {
        rep.ratio = RatioValue::finite(1.0 / estimate);
    }
    return rep;
}

std::vector<RatioReport> detect_ratios(const SequenceWindow& window, int depth, double mass_threshold) {
    require(mass_threshold > 0.0, ErrorKind::InvalidArgument, "mass threshold must be positive");
    std::vector<std::size_t> remaining(window.size());
    for (std::size_t i = 0; i < remaining.size(); ++i) {
        remaining[i] = i;
    }
    std::vector<RatioReport> reports;
    while (!remaining.empty()) {
        double left = 0.0;
        for (auto i : remaining) {
            left += max_norm(window[i]);
        }
        if (left < mass_threshold) {
            break;
        }
        auto rep = dyadic_ratio_extract(subsequence(window, remaining), depth);
        if (rep.mask.empty()) {
            break;
        }
        for (auto& p : rep.mask) {
            p = remaining[p];
        }
        rep.horizon = window.size();
        std::vector<std::size_t> rest;
        std::set_difference(remaining.begin(), remaining.end(), rep.mask.begin(), rep.mask.end(),
                            std::back_inserter(rest));
        remaining = std::move(rest);
        reports.push_back(std::move(rep));
    }

    // Merge overlapping reports into the heavier one.
    std::stable_sort(reports.begin(), reports.end(), [](const auto& x, const auto& y) { return x.mass > y.mass; });
    std::vector<RatioReport> merged;
    for (auto& rep : reports) {
        auto it = std::find_if(merged.begin(), merged.end(), [&](const auto& m) { return overlapping(m, rep); });
        if (it == merged.end()) {
            merged.push_back(std::move(rep));
            continue;
        }
        std::vector<std::size_t> mask;
        std::merge(it->mask.begin(), it->mask.end(), rep.mask.begin(), rep.mask.end(), std::back_inserter(mask));
        it->mask = std::move(mask);
        it->mass += rep.mass;
        if (it->branch == rep.branch) {
            it->lo = std::min(it->lo, rep.lo);
            it->hi = std::max(it->hi, rep.hi);
        }
    }
    std::stable_sort(merged.begin(), merged.end(), [](const auto& x, const auto& y) { return x.mass > y.mass; });
    return merged;
}

Complex2 sample_direction(std::size_t j, std::size_t M) {
    require(M > 0 && j < 2 * M, ErrorKind::InvalidArgument, "direction index out of range");
    // Angle jπ/M in units of π/(4M): J in [0, 8M).
    std::size_t J = 4 * j;
    const std::size_t quarter = 2 * M; // π/2
    const std::size_t eighth = M;      // π/4
    double cs = 1.0, sn = 1.0;
    if (J >= 2 * quarter) { // [π, 2π): rotate by π
        J -= 2 * quarter;
        cs = -1.0;
        sn = -1.0;
    }
    if (J > quarter) { // (π/2, π): cos θ = -cos(π - θ)
        J = 2 * quarter - J;
        cs = -cs;
    }
    // J in [0, 2M] (θ in [0, π/2]).
    const double unit = std::numbers::pi / static_cast<double>(4 * M);
    double c = 0.0, s = 0.0;
    if (J == eighth) {
        c = s = std::sqrt(0.5);
    } else if (J > eighth) {
        const double phi = static_cast<double>(quarter - J) * unit;
        c = std::sin(phi);
        s = std::cos(phi);
    } else {
        const double phi = static_cast<double>(J) * unit;
        c = std::cos(phi);
        s = std::sin(phi);
    }
    return {cs * c, sn * s};
}

double directional_mass(const SequenceWindow& window, Complex2 direction) {
    double m = 0.0;
    for (const auto& c : window) {
        m += std::abs(direction.re * c.re + direction.im * c.im);
    }
    return m;
}

DirectionProfile nonsummability_profile(const SequenceWindow& window, std::size_t M) {
    require(M >= 4, ErrorKind::InvalidArgument, "profile needs at least 4 directions");
    DirectionProfile prof;
    prof.horizon = window.size();
    prof.min_mass = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < M; ++j) {
        const double theta = static_cast<double>(j) * std::numbers::pi / static_cast<double>(M);
        const double mass = directional_mass(window, sample_direction(j, M));
        prof.angles.push_back(theta);
        prof.masses.push_back(mass);
        if (mass < prof.min_mass) {
            prof.min_mass = mass;
            prof.min_angle = theta;
        }
    }
    return prof;
}

SequenceWindow apply_linear_map(const SequenceWindow& window, const Mat2& matrix) {
    require_nonsingular(matrix);
    std::vector<Complex2> out;
    out.reserve(window.size());
    for (const auto& c : window) {
        out.push_back(matrix.apply(c));
    }
    return SequenceWindow(std::move(out), window.origin());
}

SequenceWindow regroup(const SequenceWindow& window, std::span<const std::vector<std::size_t>> blocks,
                       const SignVector& signs) {
    require(signs.size() == window.size(), ErrorKind::LengthMismatch, "regroup: one sign per window index required");
    std::size_t expected = 0;
    std::vector<Complex2> out;
    out.reserve(blocks.size());
    for (const auto& block : blocks) {
        require(!block.empty(), ErrorKind::InvalidArgument, "regroup: empty block");
        Complex2 s;
        for (auto p : block) {
            require(p == expected, ErrorKind::InvalidArgument,
                    "regroup: blocks must partition the window into consecutive runs (expected position " +
                        std::to_string(expected) + ")");
            s += signs[p] > 0 ? window[p] : -window[p];
            ++expected;
        }
        out.push_back(s);
    }
    require(expected == window.size(), ErrorKind::InvalidArgument, "regroup: blocks do not cover the window");
    return SequenceWindow(std::move(out));
}

std::vector<std::vector<std::size_t>> uniform_blocks(std::size_t n, std::size_t block_size) {
    require(block_size > 0, ErrorKind::InvalidArgument, "block size must be positive");
    std::vector<std::vector<std::size_t>> blocks;
    for (std::size_t i = 0; i < n; i += block_size) {
        auto& b = blocks.emplace_back();
        for (std::size_t j = i; j < std::min(n, i + block_size); ++j) {
            b.push_back(j);
        }
    }
    return blocks;
}

Complex2 ratio_direction(RatioValue t) { return t.infinite ? Complex2{1.0, 0.0} : Complex2{t.value, 1.0}; }

Mat2 normal_form_matrix(RatioValue from_a, RatioValue from_b) {
    const Complex2 da = ratio_direction(from_a), db = ratio_direction(from_b);
    const Mat2 source{da.re, db.re, da.im, db.im};
    const Mat2 target{2.0, 1.0, 1.0, 3.0};
    return target * source.inverse();
}

} // namespace signrange
