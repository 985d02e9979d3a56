#include "signrange/signs.hpp"

#include <cmath>

#include "signrange/error.hpp"

namespace signrange {

namespace {

std::int8_t checked(int s) {
    require(s == 1 || s == -1, ErrorKind::InvalidArgument, "sign entries must be -1 or +1");
    return static_cast<std::int8_t>(s);
}

} // namespace

SignVector::SignVector(std::initializer_list<int> signs) {
    signs_.reserve(signs.size());
    for (int s : signs) {
        signs_.push_back(checked(s));
    }
}

SignVector::SignVector(std::span<const int> signs) {
    signs_.reserve(signs.size());
    for (int s : signs) {
        signs_.push_back(checked(s));
    }
}

SignVector SignVector::all_plus(std::size_t n) {
    SignVector v;
    v.signs_.assign(n, 1);
    return v;
}

void SignVector::set(std::size_t i, int s) { signs_.at(i) = checked(s); }

void SignVector::push_back(int s) { signs_.push_back(checked(s)); }

SignVector SignVector::negated() const {
    SignVector v = *this;
    for (auto& s : v.signs_) {
        s = static_cast<std::int8_t>(-s);
    }
    return v;
}

std::vector<Complex2> partial_sums(std::span<const Complex2> terms, const SignVector& signs) {
    require(terms.size() == signs.size(), ErrorKind::LengthMismatch,
            "partial_sums: " + std::to_string(terms.size()) + " terms vs " + std::to_string(signs.size()) +
                " signs");
    std::vector<Complex2> out;
    out.reserve(terms.size());
    Complex2 s;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        s += signs[i] > 0 ? terms[i] : -terms[i];
        out.push_back(s);
    }
    return out;
}

std::vector<Complex2> partial_sums(const SequenceWindow& window, const SignVector& signs) {
    return partial_sums(window.terms(), signs);
}

double max_prefix_norm(std::span<const Complex2> terms, const SignVector& signs) {
    double best = 0.0;
    for (const auto& s : partial_sums(terms, signs)) {
        best = std::max(best, max_norm(s));
    }
    return best;
}

SignVector rademacher_signs(double x, std::size_t N) {
    require(x >= 0.0 && x < 1.0, ErrorKind::InvalidArgument, "rademacher_signs: x must lie in [0, 1)");
    SignVector out;
    double y = x;
    for (std::size_t n = 0; n < N; ++n) {
        out.push_back(y < 0.5 ? 1 : -1);
        y *= 2.0;
        y -= std::floor(y);
    }
    return out;
}

SignVector rademacher_signs(const Rational& x, std::size_t N) {
    require(x.num() >= 0 && x.num() < x.den(), ErrorKind::InvalidArgument,
            "rademacher_signs: x must lie in [0, 1)");
    require(x.den() < (std::int64_t{1} << 62), ErrorKind::InvalidArgument, "rademacher_signs: denominator too large");
    SignVector out;
    std::int64_t r = x.num(); // frac(2^{n-1} x) = r / den
    for (std::size_t n = 0; n < N; ++n) {
        out.push_back(2 * r < x.den() ? 1 : -1);
        r = (2 * r) % x.den();
    }
    return out;
}

} // namespace signrange
