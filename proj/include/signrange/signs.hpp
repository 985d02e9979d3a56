#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include "signrange/complex2.hpp"
#include "signrange/rational.hpp"
#include "signrange/sequence.hpp"

namespace signrange {

/// A finite word over {-1, +1}.
class SignVector {
public:
    SignVector() = default;
    SignVector(std::initializer_list<int> signs);
    /// Throws Error(InvalidArgument) if any entry is not exactly -1 or +1.
    explicit SignVector(std::span<const int> signs);

    static SignVector all_plus(std::size_t n);

    std::size_t size() const { return signs_.size(); }
    bool empty() const { return signs_.empty(); }
    int operator[](std::size_t i) const { return signs_[i]; }

    /// Requires s in {-1, +1}.
    void set(std::size_t i, int s);
    void push_back(int s);
    void flip(std::size_t i) { signs_[i] = static_cast<std::int8_t>(-signs_[i]); }

    SignVector negated() const;
    std::vector<int> to_ints() const { return {signs_.begin(), signs_.end()}; }

    friend bool operator==(const SignVector&, const SignVector&) = default;

private:
    std::vector<std::int8_t> signs_;
};

/// S_k = sum_{n <= k} x_n c_n for k = 1..N.
std::vector<Complex2> partial_sums(const SequenceWindow& window, const SignVector& signs);
std::vector<Complex2> partial_sums(std::span<const Complex2> terms, const SignVector& signs);

/// max_k ‖S_k‖.
double max_prefix_norm(std::span<const Complex2> terms, const SignVector& signs);

/// Entry n is R(2^{n-1} x): +1 when frac(2^{n-1} x) lies in [0, 1/2), -1 on [1/2, 1).
/// Doubling is exact in binary floating point, so the result equals the binary digits of x.
SignVector rademacher_signs(double x, std::size_t N);

/// Exact variant for rationals in [0, 1).
SignVector rademacher_signs(const Rational& x, std::size_t N);

} // namespace signrange
