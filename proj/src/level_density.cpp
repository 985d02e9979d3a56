#include "signrange/level_density.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "signrange/error.hpp"
#include "signrange/parallel.hpp"

namespace signrange {

IndexSet IndexSet::explicit_set(std::vector<std::uint64_t> members) {
    std::sort(members.begin(), members.end());
    require(std::adjacent_find(members.begin(), members.end()) == members.end(), ErrorKind::InvalidArgument,
            "index set has repeated members");
    require(members.empty() || members.front() >= 1, ErrorKind::InvalidArgument, "index sets live in {1, 2, ...}");
    IndexSet s;
    s.members_ = std::move(members);
    return s;
}

IndexSet IndexSet::progression(std::uint64_t q, std::uint64_t j) {
    require(q >= 1 && j < q, ErrorKind::InvalidArgument, "progression needs q >= 1 and 0 <= j < q");
    IndexSet s;
    s.q_ = q;
    s.j_ = j;
    return s;
}

IndexSet IndexSet::squares(std::uint64_t horizon) {
    std::vector<std::uint64_t> m;
    for (std::uint64_t i = 1; i * i <= horizon; ++i) {
        m.push_back(i * i);
    }
    return explicit_set(std::move(m));
}

bool IndexSet::contains(std::uint64_t n) const {
    if (n == 0) {
        return false;
    }
    if (q_ != 0) {
        return n % q_ == j_;
    }
    return std::binary_search(members_.begin(), members_.end(), n);
}

std::uint64_t IndexSet::count(std::uint64_t k) const {
    if (q_ != 0) {
        if (j_ == 0) {
            return k / q_;
        }
        return k < j_ ? 0 : (k - j_) / q_ + 1;
    }
    return static_cast<std::uint64_t>(std::upper_bound(members_.begin(), members_.end(), k) - members_.begin());
}

DensityReport density(const IndexSet& set, std::uint64_t horizon) {
    require(horizon >= 10, ErrorKind::InvalidArgument, "density needs horizon >= 10");
    DensityReport r;
    r.horizon = horizon;
    r.upper = 0.0;
    r.lower = 1.0;
    for (int i = 0;; ++i) {
        const std::uint64_t k = (horizon + (std::uint64_t{1} << i) - 1) >> i;
        if (k < 10 || i >= 63) {
            break;
        }
        const double ratio = static_cast<double>(set.count(k)) / static_cast<double>(k);
        r.checkpoints.push_back(k);
        r.ratios.push_back(ratio);
        if (2 * k >= horizon) {
            r.upper = std::max(r.upper, ratio);
            r.lower = std::min(r.lower, ratio);
        }
    }
    return r;
}

std::size_t first_disagreement(const SignVector& x, const SignVector& y) {
    require(x.size() == y.size(), ErrorKind::LengthMismatch, "words differ in length");
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] != y[i]) {
            return i + 1;
        }
    }
    return 0;
}

double seq_metric(const SignVector& x, const SignVector& y) {
    const auto k = first_disagreement(x, y);
    return k == 0 ? 0.0 : std::ldexp(1.0, -static_cast<int>(std::min<std::size_t>(k, 1100)));
}

SignVector h_lambda(const SignVector& x, const IndexSet& set) {
    SignVector out;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!set.contains(i + 1)) {
            out.push_back(x[i]);
        }
    }
    return out;
}

HolderReport holder_check(const IndexSet& set, double eps, std::size_t samples, std::size_t N, std::uint64_t seed) {
    require(eps > 0.0 && eps < 1.0, ErrorKind::InvalidArgument, "eps must lie in (0, 1)");
    require(N >= 10, ErrorKind::InvalidArgument, "holder_check needs N >= 10");
    const auto dens = density(set, N);
    require(dens.upper < eps, ErrorKind::Precondition,
            "density estimate " + std::to_string(dens.upper) + " is not below eps " + std::to_string(eps));

    HolderReport r;
    // m_k <= eps k  <=>  2^{-k+m_k} <= 2^{-k(1-eps)}
    for (std::size_t k = 1; k <= N; ++k) {
        const double mk = static_cast<double>(set.count(k - 1));
        if (mk > eps * static_cast<double>(k)) {
            r.k0 = k;
        }
    }
    r.deterministic_pass = r.k0 < N;
    r.holds_from_one = r.k0 == 0;

    std::mt19937_64 rng(seed);
    auto below = [&](std::uint64_t n) { return rng() % n; };
    r.sampled_pass = true;
    r.worst_log2_ratio = -std::numeric_limits<double>::infinity();
    const std::size_t span = N - r.k0;
    for (std::size_t s = 0; s < samples && span > 0; ++s) {
        const std::size_t k = r.k0 + 1 + below(span);
        std::vector<int> xs(N), ys(N);
        for (std::size_t i = 0; i < N; ++i) {
            xs[i] = (rng() >> 63) ? 1 : -1;
            ys[i] = i + 1 < k ? xs[i] : (rng() >> 63) ? 1 : -1;
        }
        ys[k - 1] = -xs[k - 1];
        const SignVector x{std::span<const int>(xs)}, y{std::span<const int>(ys)};
        const std::size_t kh = first_disagreement(h_lambda(x, set), h_lambda(y, set));
        // log2 d(hx, hy) = -kh (or -inf when equal); log2 d(x, y) = -k.
        const double lhs = kh == 0 ? -std::numeric_limits<double>::infinity() : -static_cast<double>(kh);
        const double excess = lhs + (1.0 - eps) * static_cast<double>(k);
        if (excess > r.worst_log2_ratio) {
            r.worst_log2_ratio = excess;
            r.worst_k = k;
            r.worst_kh = kh;
        }
        if (excess > 1e-12) {
            r.sampled_pass = false;
        }
        ++r.samples;
    }
    if (r.samples == 0) {
        r.worst_log2_ratio = 0.0;
    }
    return r;
}

BoxDimReport box_dim_estimate(const PrefixPredicate& member, std::size_t depth, unsigned workers) {
    require(depth >= 1 && depth <= 40, ErrorKind::InvalidArgument, "depth must lie in [1, 40]");
    BoxDimReport r;
    r.survivors.assign(depth, 0);

    // Fixed split over the first min(3, depth) signs; each subtree counts into its own row.
    const std::size_t top = std::min<std::size_t>(3, depth);
    const std::size_t roots = std::size_t{1} << top;
    std::vector<std::vector<std::uint64_t>> rows(roots, std::vector<std::uint64_t>(depth, 0));
    parallel_for(roots, workers, [&](std::size_t root) {
        std::vector<std::int8_t> prefix;
        auto& row = rows[root];
        for (std::size_t i = 0; i < top; ++i) {
            prefix.push_back((root >> (top - 1 - i)) & 1u ? -1 : 1);
            if (!member(prefix)) {
                return;
            }
        }
        // Shorter prefixes are shared between roots and counted after the join.
        row[top - 1] += 1;
        std::function<void()> grow = [&] {
            if (prefix.size() == depth) {
                return;
            }
            for (int s : {1, -1}) {
                prefix.push_back(static_cast<std::int8_t>(s));
                if (member(prefix)) {
                    row[prefix.size() - 1] += 1;
                    grow();
                }
                prefix.pop_back();
            }
        };
        grow();
    });
    for (const auto& row : rows) {
        for (std::size_t k = 0; k < depth; ++k) {
            r.survivors[k] += row[k];
        }
    }
    // Levels shorter than the split: count distinct surviving short prefixes directly.
    for (std::size_t len = 1; len < top; ++len) {
        std::uint64_t c = 0;
        for (std::size_t p = 0; p < (std::size_t{1} << len); ++p) {
            std::vector<std::int8_t> prefix;
            bool ok = true;
            for (std::size_t i = 0; i < len && ok; ++i) {
                prefix.push_back((p >> (len - 1 - i)) & 1u ? -1 : 1);
                ok = member(prefix);
            }
            c += ok ? 1 : 0;
        }
        r.survivors[len - 1] = c;
    }

    r.all_rejected = r.survivors[0] == 0;
    r.extinct = std::any_of(r.survivors.begin(), r.survivors.end(), [](auto v) { return v == 0; });
    if (r.all_rejected) {
        r.estimate = 0.0;
        return r;
    }
    const std::size_t h = (depth + 1) / 2;
    if (h < 2) {
        r.estimate = std::log2(static_cast<double>(r.survivors[depth - 1]));
        r.estimate = std::clamp(r.estimate, 0.0, 1.0);
        return r;
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = depth - h + 1; k <= depth; ++k) {
        const double x = static_cast<double>(k);
        const double y = std::log2(static_cast<double>(std::max<std::uint64_t>(r.survivors[k - 1], 1)));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(h);
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    r.estimate = std::clamp(slope, 0.0, 1.0);
    return r;
}

PrefixPredicate ball_feasible_predicate(std::vector<Complex2> terms, Complex2 c, double delta, double tail_extra) {
    require(delta >= 0.0, ErrorKind::InvalidArgument, "delta must be nonnegative");
    std::vector<double> tail(terms.size() + 1, 0.0);
    for (std::size_t i = terms.size(); i-- > 0;) {
        tail[i] = tail[i + 1] + max_norm(terms[i]);
    }
    return [terms = std::move(terms), tail = std::move(tail), c, delta, tail_extra](std::span<const std::int8_t> x) {
        require(x.size() <= terms.size(), ErrorKind::IndexOutOfRange, "prefix longer than the term list");
        Complex2 s;
        for (std::size_t i = 0; i < x.size(); ++i) {
            s += x[i] > 0 ? terms[i] : -terms[i];
        }
        return max_norm(s - c) <= delta + tail[x.size()] + tail_extra;
    };
}

} // namespace signrange
