#include "signrange/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "signrange/error.hpp"
#include "signrange/parallel.hpp"
#include "signrange/point_index.hpp"

namespace signrange {

namespace {

/// All 2^n signed sums of terms, accumulated left to right; entry bit i of the
/// position set means term i carries sign -1. Negating a vector negates its sum exactly.
std::vector<Complex2> signed_sums(std::span<const Complex2> terms) {
    std::vector<Complex2> sums{Complex2{}};
    sums.reserve(std::size_t{1} << terms.size());
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const std::size_t half = sums.size();
        sums.resize(2 * half);
        for (std::size_t j = 0; j < half; ++j) {
            const Complex2 s = sums[j];
            sums[j] = s + terms[i];
            sums[j + half] = s - terms[i];
        }
    }
    return sums;
}

void dedup_run(std::vector<Complex2>& run, double tol, std::vector<Complex2>& out) {
    std::sort(run.begin(), run.end(), [](Complex2 a, Complex2 b) { return a.im < b.im || (a.im == b.im && a.re < b.re); });
    const std::size_t first = out.size();
    for (const auto& p : run) {
        bool dup = false;
        for (std::size_t k = out.size(); k-- > first;) {
            if (p.im - out[k].im > tol) {
                break;
            }
            if (std::abs(p.re - out[k].re) <= tol) {
                dup = true;
                break;
            }
        }
        if (!dup) {
            out.push_back(p);
        }
    }
    std::sort(out.begin() + static_cast<std::ptrdiff_t>(first), out.end(), lex_less);
}

} // namespace

std::vector<Complex2> canonical_point_set(std::vector<Complex2> points, double tol) {
    std::sort(points.begin(), points.end(), lex_less);
    std::vector<Complex2> out;
    out.reserve(points.size());
    // Runs of points whose consecutive re gaps are <= tol may hold duplicates.
    std::vector<Complex2> run;
    for (std::size_t i = 0; i < points.size();) {
        std::size_t j = i + 1;
        while (j < points.size() && points[j].re - points[j - 1].re <= tol) {
            ++j;
        }
        if (j == i + 1) {
            out.push_back(points[i]);
        } else {
            run.assign(points.begin() + static_cast<std::ptrdiff_t>(i), points.begin() + static_cast<std::ptrdiff_t>(j));
            dedup_run(run, tol, out);
        }
        i = j;
    }
    std::sort(out.begin(), out.end(), lex_less);
    return out;
}

RangeSet exact_range(const SequenceWindow& window, unsigned workers) {
    const std::size_t N = window.size();
    require(N <= kMaxRangeLength, ErrorKind::TooLarge,
            "exact_range: N = " + std::to_string(N) + " exceeds " + std::to_string(kMaxRangeLength));
    const auto terms = window.terms();
    const std::size_t top = std::min<std::size_t>(3, N);
    const std::size_t rest = N - top;
    const std::size_t mid = rest / 2;

    const auto top_sums = signed_sums(terms.subspan(0, top));
    const auto mid_sums = signed_sums(terms.subspan(top, mid));
    const auto low_sums = signed_sums(terms.subspan(top + mid));
    const std::size_t per_subtree = mid_sums.size() * low_sums.size();

    std::vector<Complex2> all(top_sums.size() * per_subtree);
    parallel_for(top_sums.size(), workers, [&](std::size_t s) {
        Complex2* out = all.data() + s * per_subtree;
        for (const auto& m : mid_sums) {
            const Complex2 base = top_sums[s] + m;
            for (const auto& l : low_sums) {
                *out++ = base + l;
            }
        }
    });
    return {canonical_point_set(std::move(all), kRangeDedupTolerance), N};
}

bool same_point_set(std::span<const Complex2> a, std::span<const Complex2> b, double tol) {
    if (a.empty() || b.empty()) {
        return a.empty() && b.empty();
    }
    auto covered = [tol](std::span<const Complex2> from, std::span<const Complex2> to) {
        const PointIndex index(to, tol);
        return std::all_of(from.begin(), from.end(), [&](Complex2 p) { return index.any_within(p, tol); });
    };
    return covered(a, b) && covered(b, a);
}

DiscrepancyResult min_prefix_discrepancy(const SequenceWindow& window) {
    const std::size_t N = window.size();
    require(N <= kMaxDiscrepancyLength, ErrorKind::TooLarge,
            "min_prefix_discrepancy: N = " + std::to_string(N) + " exceeds " + std::to_string(kMaxDiscrepancyLength));
    const auto terms = window.terms();
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> path(N, 1), best_path;

    // Depth-first in lexicographic order (+1 first); a branch is cut once its
    // running max can no longer beat the incumbent strictly.
    std::function<void(std::size_t, Complex2, double)> dfs = [&](std::size_t i, Complex2 s, double m) {
        if (m >= best) {
            return;
        }
        if (i == N) {
            best = m;
            best_path = path;
            return;
        }
        for (int x : {1, -1}) {
            if (i == 0 && x == -1) {
                break; // a vector and its negation share the same prefix norms
            }
            path[i] = x;
            const Complex2 next = s + (x > 0 ? terms[i] : -terms[i]);
            dfs(i + 1, next, std::max(m, max_norm(next)));
        }
    };
    dfs(0, Complex2{}, 0.0);
    return {best, SignVector(best_path)};
}

bool transform_equivariance_check(const SequenceWindow& window, const Mat2& matrix, unsigned workers) {
    require_nonsingular(matrix);
    require(window.size() <= kMaxEquivarianceLength, ErrorKind::TooLarge,
            "transform_equivariance_check: N exceeds " + std::to_string(kMaxEquivarianceLength));
    auto mapped = exact_range(window, workers).points;
    for (auto& p : mapped) {
        p = matrix.apply(p);
    }
    std::vector<Complex2> image_terms;
    image_terms.reserve(window.size());
    for (const auto& c : window) {
        image_terms.push_back(matrix.apply(c));
    }
    const auto image_range = exact_range(SequenceWindow(std::move(image_terms)), workers);
    return same_point_set(mapped, image_range.points, 1e-9);
}

CoverageReport epsilon_net_coverage(const RangeSet& range, const Rect& window, double epsilon) {
    require(epsilon > 0.0, ErrorKind::InvalidArgument, "epsilon must be positive");
    require(window.valid(), ErrorKind::InvalidArgument, "coverage window is not a valid rectangle");
    require(!range.points.empty(), ErrorKind::InvalidArgument, "coverage of an empty range");

    auto centers = [epsilon](double lo, double hi) {
        std::vector<double> c;
        const double width = hi - lo;
        const std::size_t n = width > 0.0 ? static_cast<std::size_t>(std::ceil(width / epsilon)) : 1;
        if (width <= 0.0) {
            c.push_back(lo);
            return c;
        }
        const double pitch = width / static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) {
            c.push_back(lo + (static_cast<double>(i) + 0.5) * pitch);
        }
        return c;
    };
    const auto xs = centers(window.x0, window.x1);
    const auto ys = centers(window.y0, window.y1);

    const PointIndex index(range.points, epsilon);
    CoverageReport rep;
    rep.window = window;
    rep.epsilon = epsilon;
    rep.cells = xs.size() * ys.size();
    rep.worst_center = {xs.front(), ys.front()};
    std::size_t covered = 0;
    for (double y : ys) {
        for (double x : xs) {
            const double d = index.nearest({x, y}).first;
            if (d <= epsilon) {
                ++covered;
            }
            if (d > rep.worst_gap) {
                rep.worst_gap = d;
                rep.worst_center = {x, y};
            }
        }
    }
    rep.covered_fraction = static_cast<double>(covered) / static_cast<double>(rep.cells);
    return rep;
}

} // namespace signrange
