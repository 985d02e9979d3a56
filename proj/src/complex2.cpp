#include "signrange/complex2.hpp"

#include "signrange/error.hpp"

namespace signrange {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::IndexOutOfRange: return "index-out-of-range";
    case ErrorKind::LengthMismatch: return "length-mismatch";
    case ErrorKind::TooLarge: return "too-large";
    case ErrorKind::SingularMatrix: return "singular-matrix";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::InsufficientMass: return "insufficient-mass";
    case ErrorKind::NoRatio: return "no-ratio";
    case ErrorKind::BracketViolation: return "bracket-violation";
    case ErrorKind::TargetEscapes: return "target-escapes";
    case ErrorKind::NotBlockAligned: return "not-block-aligned";
    case ErrorKind::Io: return "io";
    }
    return "unknown";
}

double sup_norm(std::span<const Complex2> terms) {
    double s = 0.0;
    for (const auto& c : terms) {
        s = std::max(s, max_norm(c));
    }
    return s;
}

double total_mass(std::span<const Complex2> terms) {
    double s = 0.0;
    for (const auto& c : terms) {
        s += max_norm(c);
    }
    return s;
}

void require_nonsingular(const Mat2& m) {
    require(std::abs(m.det()) > 1e-9, ErrorKind::SingularMatrix, "matrix is singular (|det| <= 1e-9)");
}

Mat2 Mat2::inverse() const {
    require_nonsingular(*this);
    const double d = det();
    return {m22 / d, -m12 / d, -m21 / d, m11 / d};
}

double Rect::distance(Complex2 p) const {
    const double dx = std::max({x0 - p.re, 0.0, p.re - x1});
    const double dy = std::max({y0 - p.im, 0.0, p.im - y1});
    return std::max(dx, dy);
}

} // namespace signrange
