#include "signrange/selection.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "signrange/error.hpp"

namespace signrange {

namespace {

int sgn(double x) { return x < 0.0 ? -1 : 1; }

void require_unit(Complex2 c, const char* what) {
    require(max_norm(c) <= 1.0 + kUnitTolerance, ErrorKind::Precondition,
            std::string(what) + ": term norm exceeds 1");
}

SelectionResult finish(std::span<const Complex2> terms, SignVector signs, Complex2 target) {
    SelectionResult r;
    Complex2 s;
    double bound = 0.0;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        s += signs[i] > 0 ? terms[i] : -terms[i];
        bound = std::max(bound, max_norm(s));
    }
    r.signs = std::move(signs);
    r.prefix_bound = bound;
    r.sum = s;
    r.residual = target - s;
    return r;
}

// Super-term arena for bounded_signs. Every node covers a contiguous run of
// original indices; children are stored in index order with relative signs.
struct Node {
    Complex2 value;
    std::int64_t leaf = -1;
    std::vector<std::pair<std::uint32_t, std::int8_t>> children;
};

} // namespace

std::optional<int> pairable(Complex2 c1, Complex2 c2) {
    require_unit(c1, "pairable");
    require_unit(c2, "pairable");
    if (max_norm(c1 + c2) <= 1.0 + kUnitTolerance) {
        return 1;
    }
    if (max_norm(c1 - c2) <= 1.0 + kUnitTolerance) {
        return -1;
    }
    return std::nullopt;
}

bool pairing_fact_blocks(Complex2 c1, Complex2 c2) {
    return std::abs(c1.re) + std::abs(c2.re) > 1.0 && std::abs(c1.im) + std::abs(c2.im) > 1.0 &&
           c1.re * c2.re * c1.im * c2.im < 0.0;
}

Combine5Result combine5(std::span<const Complex2, 5> c) {
    for (std::size_t n = 0; n < 5; ++n) {
        require_unit(c[n], "combine5");
    }
    for (std::size_t n = 0; n + 1 < 5; ++n) {
        require(!pairable(c[n], c[n + 1]).has_value(), ErrorKind::Precondition,
                "combine5: pair (" + std::to_string(n + 1) + "," + std::to_string(n + 2) + ") is pairable");
    }
    std::array<int, 5> s{};
    for (std::size_t n = 0; n < 5; ++n) {
        s[n] = sgn(c[n].re);
    }
    Combine5Result r;
    r.u = s[0] * c[0] - s[1] * c[1] - s[2] * c[2] + s[3] * c[3];
    r.v = s[1] * c[1] - s[2] * c[2] - s[3] * c[3] + s[4] * c[4];
    std::array<int, 5> x{};
    if (std::abs(r.u.re) <= 1.0) {
        r.used_u = true;
        x = {s[0], -s[1], -s[2], s[3], 1};
    } else {
        r.used_u = false;
        x = {1, s[1], -s[2], -s[3], s[4]};
    }
    r.signs = SignVector(std::span<const int>(x));
    for (std::size_t n = 0; n < 5; ++n) {
        r.sum += x[n] * c[n];
    }
    return r;
}

BoundedSelection bounded_signs(std::span<const Complex2> terms) {
    const std::size_t N = terms.size();
    const double sup = sup_norm(terms);
    const double scale = sup > 0.0 ? 1.0 / sup : 1.0; // the bound is scale-free: normalize to sup = 1

    BoundedSelection out;
    std::vector<Node> arena;
    arena.reserve(2 * N + 1);
    std::vector<std::uint32_t> buffer;

    auto make_node = [&](std::span<const std::uint32_t> ids, std::span<const int> signs) {
        Node node;
        for (std::size_t i = 0; i < ids.size(); ++i) {
            node.value += signs[i] > 0 ? arena[ids[i]].value : -arena[ids[i]].value;
            node.children.emplace_back(ids[i], static_cast<std::int8_t>(signs[i]));
        }
        arena.push_back(std::move(node));
        return static_cast<std::uint32_t>(arena.size() - 1);
    };

    for (std::size_t n = 0; n < N; ++n) {
        Node leaf;
        leaf.value = scale * terms[n];
        leaf.leaf = static_cast<std::int64_t>(n);
        arena.push_back(std::move(leaf));
        buffer.push_back(static_cast<std::uint32_t>(arena.size() - 1));

        for (;;) {
            bool merged = false;
            for (std::size_t j = 0; j + 1 < buffer.size(); ++j) {
                if (auto s = pairable(arena[buffer[j]].value, arena[buffer[j + 1]].value)) {
                    const std::uint32_t ids[2] = {buffer[j], buffer[j + 1]};
                    const int signs[2] = {1, *s};
                    const auto id = make_node(ids, signs);
                    buffer[j] = id;
                    buffer.erase(buffer.begin() + static_cast<std::ptrdiff_t>(j + 1));
                    ++out.merges;
                    merged = true;
                    break;
                }
            }
            if (merged) {
                continue;
            }
            if (buffer.size() < 5) {
                break;
            }
            std::array<Complex2, 5> five;
            for (std::size_t j = 0; j < 5; ++j) {
                five[j] = arena[buffer[j]].value;
            }
            const auto cr = combine5(five);
            std::array<int, 5> s{};
            for (std::size_t j = 0; j < 5; ++j) {
                s[j] = sgn(five[j].re);
            }
            // u collapses super-terms 1..4, v collapses 2..5.
            bool take_u = max_norm(cr.u) <= 1.0 + kUnitTolerance;
            if (!take_u && max_norm(cr.v) > 1.0 + kUnitTolerance) {
                ++out.fallbacks;
                take_u = max_norm(cr.u) <= max_norm(cr.v);
            }
            if (take_u) {
                const int signs[4] = {s[0], -s[1], -s[2], s[3]};
                const auto id = make_node(std::span(buffer).first(4), signs);
                buffer.erase(buffer.begin() + 1, buffer.begin() + 4);
                buffer[0] = id;
            } else {
                const int signs[4] = {s[1], -s[2], -s[3], s[4]};
                const auto id = make_node(std::span(buffer).subspan(1, 4), signs);
                buffer.erase(buffer.begin() + 2, buffer.end());
                buffer[1] = id;
            }
            ++out.combines;
        }
    }

    // Relative leaf signs within each top-level super-term.
    std::vector<int> rel(N, 1);
    std::vector<std::pair<std::size_t, std::size_t>> spans; // [begin, end) per top node
    std::vector<std::pair<std::uint32_t, int>> stack;
    for (auto top : buffer) {
        std::size_t lo = N, hi = 0;
        stack.emplace_back(top, 1);
        while (!stack.empty()) {
            auto [id, sign] = stack.back();
            stack.pop_back();
            const Node& node = arena[id];
            if (node.leaf >= 0) {
                const auto i = static_cast<std::size_t>(node.leaf);
                rel[i] = sign;
                lo = std::min(lo, i);
                hi = std::max(hi, i + 1);
                continue;
            }
            for (auto it = node.children.rbegin(); it != node.children.rend(); ++it) {
                stack.emplace_back(it->first, sign * it->second);
            }
        }
        spans.emplace_back(lo, hi);
    }

    // Exhaustive orientation of the (at most four) remaining super-terms.
    const std::size_t T = buffer.size();
    SignVector best;
    double best_bound = std::numeric_limits<double>::infinity();
    const std::size_t combos = T == 0 ? 1 : std::size_t{1} << (T - 1);
    for (std::size_t mask = 0; mask < combos; ++mask) {
        SignVector cand = SignVector::all_plus(N);
        for (std::size_t t = 0; t < T; ++t) {
            const bool minus = t > 0 && ((mask >> (T - 1 - t)) & 1u);
            for (std::size_t i = spans[t].first; i < spans[t].second; ++i) {
                cand.set(i, minus ? -rel[i] : rel[i]);
            }
        }
        const double b = max_prefix_norm(terms, cand);
        if (b < best_bound) {
            best_bound = b;
            best = std::move(cand);
        }
    }
    static_cast<SelectionResult&>(out) = finish(terms, std::move(best), Complex2{});
    return out;
}

TailSelection tail_control(std::span<const Complex2> terms) {
    const std::size_t N = terms.size();
    const double S = sup_norm(terms);
    TailSelection out;
    if (N == 0) {
        return out;
    }
    if (S == 0.0) {
        static_cast<SelectionResult&>(out) = finish(terms, SignVector::all_plus(N), Complex2{});
        out.blocks.push_back({0, N, 0.0, 0.0, 0.0, Complex2{}, 1});
        return out;
    }

    std::vector<double> tail(N);
    double run = 0.0;
    for (std::size_t i = N; i-- > 0;) {
        run = std::max(run, max_norm(terms[i]));
        tail[i] = run;
    }
    auto level = [&](double t) {
        int k = 0;
        while (t <= std::ldexp(S, -(k + 1))) {
            ++k;
        }
        return k;
    };

    SignVector signs = SignVector::all_plus(N);
    Complex2 running;
    std::size_t begin = 0;
    while (begin < N) {
        const int k = level(tail[begin]);
        std::size_t end = begin + 1;
        while (end < N && (tail[end] == 0.0 || level(tail[end]) == k)) {
            ++end;
        }
        const auto block = terms.subspan(begin, end - begin);
        const auto bs = bounded_signs(block);
        const int eps = max_norm(running + bs.sum) <= max_norm(running - bs.sum) ? 1 : -1;
        for (std::size_t i = 0; i < block.size(); ++i) {
            signs.set(begin + i, eps * bs.signs[i]);
        }
        running += eps * bs.sum;
        out.blocks.push_back({begin, end, std::ldexp(S, -k), sup_norm(block), bs.prefix_bound, eps * bs.sum, eps});
        begin = end;
    }
    static_cast<SelectionResult&>(out) = finish(terms, std::move(signs), Complex2{});
    return out;
}

GreedyRealResult greedy_target_real(std::span<const double> terms, double a) {
    require(!terms.empty(), ErrorKind::InvalidArgument, "greedy_target_real: empty term list");
    GreedyRealResult r;
    std::vector<int> x(terms.size());
    double S = 0.0;
    double envelope = 0.0;
    const double slack = 1e-12 * std::max(1.0, std::abs(a));
    for (std::size_t n = 0; n < terms.size(); ++n) {
        const double t = terms[n];
        x[n] = sgn(a - S) * sgn(t);
        S += x[n] * t;
        const double gap = std::abs(a - S);
        if (!r.crossing && gap <= std::abs(t)) {
            r.crossing = n;
        }
        if (r.crossing) {
            envelope = std::max(envelope, std::abs(t));
            const double excess = gap - envelope;
            r.worst_envelope_excess = n == *r.crossing ? excess : std::max(r.worst_envelope_excess, excess);
            if (excess > slack) {
                r.envelope_holds = false;
            }
        }
    }
    r.signs = SignVector(std::span<const int>(x));
    r.residual = a - S;
    return r;
}

namespace {

enum class Role : std::uint8_t { Real, Imag, Leftover };

SelectionResult steer(const SequenceWindow& window, const Mat2& M, const std::vector<Role>& roles, Complex2 c,
                      double eps) {
    const std::size_t N = window.size();
    std::vector<int> x(N, 1);
    std::vector<std::size_t> re_idx, im_idx, left_idx;
    for (std::size_t n = 0; n < N; ++n) {
        (roles[n] == Role::Real ? re_idx : roles[n] == Role::Imag ? im_idx : left_idx).push_back(n);
    }

    // Leftovers get a small total first, then the two classes steer toward the rest.
    Complex2 S;
    if (!left_idx.empty()) {
        std::vector<Complex2> left;
        for (auto n : left_idx) {
            left.push_back(window[n]);
        }
        const auto tc = tail_control(left);
        for (std::size_t i = 0; i < left_idx.size(); ++i) {
            x[left_idx[i]] = tc.signs[i];
        }
        S = M.apply(tc.sum);
    }
    const Complex2 target = M.apply(c);

    constexpr std::size_t kRound = 64;
    std::size_t pr = 0, pi = 0;
    while (pr < re_idx.size() || pi < im_idx.size()) {
        for (std::size_t k = 0; k < kRound && pr < re_idx.size(); ++k, ++pr) {
            const auto n = re_idx[pr];
            const Complex2 t = M.apply(window[n]);
            x[n] = sgn(target.re - S.re) * sgn(t.re);
            S += x[n] * t;
        }
        for (std::size_t k = 0; k < kRound && pi < im_idx.size(); ++k, ++pi) {
            const auto n = im_idx[pi];
            const Complex2 t = M.apply(window[n]);
            x[n] = sgn(target.im - S.im) * sgn(t.im);
            S += x[n] * t;
        }
    }

    auto r = finish(window.terms(), SignVector(std::span<const int>(x)), c);
    const double miss = max_norm(r.residual);
    if (miss > eps) {
        fail(ErrorKind::InsufficientMass, "target not reached within eps: residual " + std::to_string(miss) +
                                              ", shortfall " + std::to_string(miss - eps));
    }
    return r;
}

std::vector<bool> mask_flags(const RatioReport& r, std::size_t N) {
    std::vector<bool> f(N, false);
    for (auto p : r.mask) {
        require(p < N, ErrorKind::IndexOutOfRange, "ratio mask position outside the window");
        f[p] = true;
    }
    return f;
}

} // namespace

SelectionResult approx_target_complex(const SequenceWindow& window, std::span<const RatioReport> ratios, Complex2 c,
                                      double eps) {
    require(eps > 0.0, ErrorKind::InvalidArgument, "eps must be positive");
    require(c.finite(), ErrorKind::InvalidArgument, "target must be finite");
    require(!ratios.empty(), ErrorKind::NoRatio, "no ratio supplied");
    const std::size_t N = window.size();

    auto plus = finish(window.terms(), SignVector::all_plus(N), c);
    if (max_norm(plus.residual) <= eps) {
        return plus;
    }
    const double mass = total_mass(window.terms());
    if (max_norm(c) - eps > mass) {
        fail(ErrorKind::InsufficientMass, "target beyond reach: need " + std::to_string(max_norm(c) - eps) +
                                              ", window mass " + std::to_string(mass) + ", shortfall " +
                                              std::to_string(max_norm(c) - eps - mass));
    }

    const RatioReport& r1 = ratios[0];
    const Complex2 d1 = ratio_direction(r1.ratio);
    const RatioReport* r2 = nullptr;
    for (std::size_t i = 1; i < ratios.size() && !r2; ++i) {
        const Complex2 d = ratio_direction(ratios[i].ratio);
        const double det = d1.re * d.im - d1.im * d.re;
        if (std::abs(det) > 1e-9 * std::max(1.0, max_norm(d1)) * std::max(1.0, max_norm(d))) {
            r2 = &ratios[i];
        }
    }

    std::vector<Role> roles(N, Role::Leftover);
    if (r2) {
        const Complex2 d2 = ratio_direction(r2->ratio);
        const Mat2 M = Mat2{d1.re, d2.re, d1.im, d2.im}.inverse();
        const auto in1 = mask_flags(r1, N), in2 = mask_flags(*r2, N);
        const bool no_masks = r1.mask.empty() && r2->mask.empty();
        for (std::size_t n = 0; n < N; ++n) {
            const Complex2 t = M.apply(window[n]);
            const Role nearest = std::abs(t.re) >= std::abs(t.im) ? Role::Real : Role::Imag;
            if ((in1[n] && in2[n]) || no_masks) {
                roles[n] = nearest;
            } else if (in1[n]) {
                roles[n] = Role::Real;
            } else if (in2[n]) {
                roles[n] = Role::Imag;
            }
        }
        return steer(window, M, roles, c, eps);
    }

    // One ratio: its class (mask members and every term nearer the ratio axis
    // after the shear) has a small real coordinate and steers the imaginary one;
    // the rest steers the real one.
    const Mat2 M = r1.ratio.infinite ? Mat2{0.0, 1.0, 1.0, 0.0} : Mat2{1.0, -r1.ratio.value, 0.0, 1.0};
    const auto in1 = mask_flags(r1, N);
    std::vector<bool> near(N);
    double outside_re = 0.0, all_re = 0.0;
    for (std::size_t n = 0; n < N; ++n) {
        const Complex2 t = M.apply(window[n]);
        near[n] = in1[n] || std::abs(t.re) < std::abs(t.im);
        all_re += std::abs(t.re);
        outside_re += near[n] ? 0.0 : std::abs(t.re);
    }
    // When the ratio class carries most of the real coordinate too (a window
    // with one ratio), alternate its members between the two roles.
    const bool share = outside_re < 0.5 * all_re;
    std::size_t rank = 0;
    for (std::size_t n = 0; n < N; ++n) {
        if (!near[n]) {
            roles[n] = Role::Real;
        } else {
            roles[n] = share && rank % 2 == 0 ? Role::Real : Role::Imag;
            ++rank;
        }
    }
    return steer(window, M, roles, c, eps);
}

} // namespace signrange
