#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "signrange/complex2.hpp"
#include "signrange/ratio_value.hpp"

namespace signrange {

/// A finite list of terms.
struct ExplicitFamily {
    std::vector<Complex2> terms;
};

/// c_n = scale · (t + i) / n^power, so a_n / b_n = t for every n.
/// With t = infinity the terms are real: c_n = scale / n^power.
struct LinearRatioFamily {
    RatioValue t = RatioValue::finite(0.0);
    double scale = 1.0;
    double power = 1.0;
};

/// c_n = (-1)^n / (n ln(n+1)) + i/n: non-summable, single ratio 0.
struct HarmonicLogAltFamily {};

/// Block-constant dyadic terms. Block k >= 1 occupies indices
/// sum_{l<k} 2^{m_l+n_l} <= j < sum_{l<=k} 2^{m_l+n_l} and carries
/// c_j = 2^{-m_k} + i 2^{-m_k-n_k}. Requires m_0 = n_0 = 0 and
/// n_{k+1} >= n_k + m_k + 3.
struct DyadicTowerFamily {
    std::vector<int> m;
    std::vector<int> n;

    std::size_t blocks() const { return m.empty() ? 0 : m.size() - 1; }
    /// First index of block k (k >= 1).
    std::uint64_t block_begin(std::size_t k) const;
    /// One past the last index of block k.
    std::uint64_t block_end(std::size_t k) const;
    /// Block holding index j, or 0 when j is past the last block.
    std::size_t block_of(std::uint64_t j) const;
};

/// Term n is drawn from parts[(n-1) mod P], evaluated at the global index n.
struct InterleavedFamily {
    std::vector<LinearRatioFamily> parts;
};

using Family = std::variant<ExplicitFamily, LinearRatioFamily, HarmonicLogAltFamily, DyadicTowerFamily,
                            InterleavedFamily>;

/// Generator description for {c_n}. `limit` caps the usable length; unset means
/// unbounded (explicit and dyadic-tower families are always finite).
struct SequenceSpec {
    Family family;
    std::optional<std::size_t> limit;
};

std::string family_name(const SequenceSpec& spec);

/// Throws Error(InvalidArgument) when the family violates its invariants.
void validate(const SequenceSpec& spec);

/// Number of available terms, nullopt when unbounded.
std::optional<std::size_t> max_length(const SequenceSpec& spec);

/// c_n for n >= 1.
Complex2 term(const SequenceSpec& spec, std::size_t n);

/// A finite prefix c_origin, ..., c_{origin+N-1} of a sequence. Storage index i
/// holds the term with sequence index origin + i.
class SequenceWindow {
public:
    explicit SequenceWindow(std::vector<Complex2> terms, std::size_t origin = 1);

    std::size_t size() const { return terms_.size(); }
    std::size_t origin() const { return origin_; }
    std::span<const Complex2> terms() const { return terms_; }
    const Complex2& operator[](std::size_t i) const { return terms_[i]; }

    auto begin() const { return terms_.begin(); }
    auto end() const { return terms_.end(); }

private:
    std::vector<Complex2> terms_;
    std::size_t origin_;
};

/// Materializes the first N terms of spec.
SequenceWindow make_window(const SequenceSpec& spec, std::size_t N);

/// Terms at the given 0-based storage positions (ascending), re-based at origin 1.
SequenceWindow subsequence(const SequenceWindow& window, std::span<const std::size_t> positions);

} // namespace signrange
