#include "signrange/sequence.hpp"

#include <cmath>

#include "signrange/error.hpp"

namespace signrange {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

constexpr int kMaxTowerExponent = 60;

Complex2 linear_ratio_term(const LinearRatioFamily& f, std::size_t n) {
    const double w = f.scale / std::pow(static_cast<double>(n), f.power);
    if (f.t.infinite) {
        return {w, 0.0};
    }
    return {w * f.t.value, w};
}

void validate_linear(const LinearRatioFamily& f) {
    require(std::isfinite(f.scale) && std::isfinite(f.power), ErrorKind::InvalidArgument,
            "linear-ratio: scale and power must be finite");
    require(f.t.infinite || std::isfinite(f.t.value), ErrorKind::InvalidArgument,
            "linear-ratio: ratio must be finite or the infinity marker");
}

} // namespace

std::uint64_t DyadicTowerFamily::block_begin(std::size_t k) const {
    std::uint64_t s = 0;
    for (std::size_t l = 0; l < k; ++l) {
        s += std::uint64_t{1} << (m[l] + n[l]);
    }
    return s;
}

std::uint64_t DyadicTowerFamily::block_end(std::size_t k) const {
    return block_begin(k) + (std::uint64_t{1} << (m[k] + n[k]));
}

std::size_t DyadicTowerFamily::block_of(std::uint64_t j) const {
    std::uint64_t begin = 1; // block 0 is the single (unused) index 0
    for (std::size_t k = 1; k < m.size(); ++k) {
        const std::uint64_t end = begin + (std::uint64_t{1} << (m[k] + n[k]));
        if (j >= begin && j < end) {
            return k;
        }
        begin = end;
    }
    return 0;
}

std::string family_name(const SequenceSpec& spec) {
    return std::visit(overloaded{
                          [](const ExplicitFamily&) { return std::string("explicit"); },
                          [](const LinearRatioFamily&) { return std::string("linear-ratio"); },
                          [](const HarmonicLogAltFamily&) { return std::string("harmonic-log-alt"); },
                          [](const DyadicTowerFamily&) { return std::string("dyadic-tower"); },
                          [](const InterleavedFamily&) { return std::string("interleaved"); },
                      },
                      spec.family);
}

void validate(const SequenceSpec& spec) {
    require(!spec.limit || *spec.limit > 0, ErrorKind::InvalidArgument, "length limit must be positive");
    std::visit(overloaded{
                   [](const ExplicitFamily& f) {
                       require(!f.terms.empty(), ErrorKind::InvalidArgument, "explicit family must be nonempty");
                       for (const auto& c : f.terms) {
                           require(c.finite(), ErrorKind::InvalidArgument, "explicit family has a non-finite term");
                       }
                   },
                   [](const LinearRatioFamily& f) { validate_linear(f); },
                   [](const HarmonicLogAltFamily&) {},
                   [](const DyadicTowerFamily& f) {
                       require(f.m.size() == f.n.size() && f.m.size() >= 2, ErrorKind::InvalidArgument,
                               "dyadic-tower: m and n schedules must have equal length >= 2");
                       require(f.m[0] == 0 && f.n[0] == 0, ErrorKind::InvalidArgument,
                               "dyadic-tower: m_0 = n_0 = 0 required");
                       for (std::size_t k = 0; k < f.m.size(); ++k) {
                           require(f.m[k] >= 0 && f.n[k] >= 0 && f.m[k] + f.n[k] <= kMaxTowerExponent,
                                   ErrorKind::InvalidArgument, "dyadic-tower: exponents out of range");
                           if (k + 1 < f.m.size()) {
                               require(f.n[k + 1] >= f.n[k] + f.m[k] + 3, ErrorKind::InvalidArgument,
                                       "dyadic-tower: n_{k+1} >= n_k + m_k + 3 violated at k = " +
                                           std::to_string(k));
                           }
                       }
                   },
                   [](const InterleavedFamily& f) {
                       require(!f.parts.empty(), ErrorKind::InvalidArgument, "interleaved family needs parts");
                       for (const auto& p : f.parts) {
                           validate_linear(p);
                       }
                   },
               },
               spec.family);
}

std::optional<std::size_t> max_length(const SequenceSpec& spec) {
    std::optional<std::size_t> n = std::visit(
        overloaded{
            [](const ExplicitFamily& f) -> std::optional<std::size_t> { return f.terms.size(); },
            [](const DyadicTowerFamily& f) -> std::optional<std::size_t> {
                return static_cast<std::size_t>(f.block_end(f.blocks()) - 1);
            },
            [](const auto&) -> std::optional<std::size_t> { return std::nullopt; },
        },
        spec.family);
    if (spec.limit) {
        n = n ? std::min(*n, *spec.limit) : *spec.limit;
    }
    return n;
}

Complex2 term(const SequenceSpec& spec, std::size_t n) {
    require(n >= 1, ErrorKind::IndexOutOfRange, "sequence indices start at 1");
    if (const auto len = max_length(spec)) {
        require(n <= *len, ErrorKind::IndexOutOfRange,
                "index " + std::to_string(n) + " beyond length " + std::to_string(*len));
    }
    return std::visit(overloaded{
                          [n](const ExplicitFamily& f) { return f.terms[n - 1]; },
                          [n](const LinearRatioFamily& f) { return linear_ratio_term(f, n); },
                          [n](const HarmonicLogAltFamily&) {
                              const double x = static_cast<double>(n);
                              const double sign = (n % 2 == 0) ? 1.0 : -1.0;
                              return Complex2{sign / (x * std::log(x + 1.0)), 1.0 / x};
                          },
                          [n](const DyadicTowerFamily& f) {
                              const std::size_t k = f.block_of(n);
                              return Complex2{std::ldexp(1.0, -f.m[k]), std::ldexp(1.0, -f.m[k] - f.n[k])};
                          },
                          [n](const InterleavedFamily& f) {
                              return linear_ratio_term(f.parts[(n - 1) % f.parts.size()], n);
                          },
                      },
                      spec.family);
}

SequenceWindow::SequenceWindow(std::vector<Complex2> terms, std::size_t origin)
    : terms_(std::move(terms)), origin_(origin) {
    require(!terms_.empty(), ErrorKind::InvalidArgument, "window must be nonempty");
    require(origin_ >= 1, ErrorKind::InvalidArgument, "window origin must be >= 1");
    for (const auto& c : terms_) {
        require(c.finite(), ErrorKind::InvalidArgument, "window term is not finite");
    }
}

SequenceWindow make_window(const SequenceSpec& spec, std::size_t N) {
    validate(spec);
    require(N >= 1, ErrorKind::InvalidArgument, "window length must be >= 1");
    if (const auto len = max_length(spec)) {
        require(N <= *len, ErrorKind::IndexOutOfRange,
                "requested " + std::to_string(N) + " terms but only " + std::to_string(*len) + " exist");
    }
    std::vector<Complex2> terms;
    terms.reserve(N);
    for (std::size_t n = 1; n <= N; ++n) {
        terms.push_back(term(spec, n));
    }
    return SequenceWindow(std::move(terms));
}

SequenceWindow subsequence(const SequenceWindow& window, std::span<const std::size_t> positions) {
    std::vector<Complex2> terms;
    terms.reserve(positions.size());
    for (std::size_t i = 0; i < positions.size(); ++i) {
        require(positions[i] < window.size(), ErrorKind::IndexOutOfRange, "subsequence position out of range");
        require(i == 0 || positions[i] > positions[i - 1], ErrorKind::InvalidArgument,
                "subsequence positions must be strictly increasing");
        terms.push_back(window[positions[i]]);
    }
    return SequenceWindow(std::move(terms));
}

} // namespace signrange
