#pragma once

#include <algorithm>
#include <cmath>
#include <span>

namespace signrange {

/// A complex number a + ib held as a real pair. All norms in this library are the
/// max-norm ‖a + ib‖ = max(|a|, |b|); the Euclidean modulus is at most √2 times larger.
struct Complex2 {
    double re = 0.0;
    double im = 0.0;

    constexpr Complex2() = default;
    constexpr Complex2(double r, double i = 0.0) : re(r), im(i) {}

    constexpr Complex2 operator-() const { return {-re, -im}; }
    constexpr Complex2& operator+=(Complex2 o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    constexpr Complex2& operator-=(Complex2 o) {
        re -= o.re;
        im -= o.im;
        return *this;
    }
    constexpr Complex2& operator*=(double s) {
        re *= s;
        im *= s;
        return *this;
    }

    friend constexpr Complex2 operator+(Complex2 a, Complex2 b) { return {a.re + b.re, a.im + b.im}; }
    friend constexpr Complex2 operator-(Complex2 a, Complex2 b) { return {a.re - b.re, a.im - b.im}; }
    friend constexpr Complex2 operator*(double s, Complex2 c) { return {s * c.re, s * c.im}; }
    friend constexpr Complex2 operator*(Complex2 c, double s) { return {s * c.re, s * c.im}; }
    friend constexpr bool operator==(Complex2 a, Complex2 b) = default;

    bool finite() const { return std::isfinite(re) && std::isfinite(im); }
};

inline double max_norm(Complex2 c) { return std::max(std::abs(c.re), std::abs(c.im)); }

/// Largest max-norm over a list; 0 for an empty list.
double sup_norm(std::span<const Complex2> terms);

/// Sum of max-norms.
double total_mass(std::span<const Complex2> terms);

/// Lexicographic (re, im) order, used to canonicalize point sets.
inline bool lex_less(Complex2 a, Complex2 b) { return a.re < b.re || (a.re == b.re && a.im < b.im); }

/// Real 2x2 matrix acting on (re, im) as a column vector:
/// (a, b) -> (m11·a + m12·b, m21·a + m22·b).
struct Mat2 {
    double m11 = 1.0, m12 = 0.0;
    double m21 = 0.0, m22 = 1.0;

    static constexpr Mat2 identity() { return {}; }

    constexpr double det() const { return m11 * m22 - m12 * m21; }

    constexpr Complex2 apply(Complex2 c) const { return {m11 * c.re + m12 * c.im, m21 * c.re + m22 * c.im}; }

    friend constexpr Mat2 operator*(const Mat2& x, const Mat2& y) {
        return {x.m11 * y.m11 + x.m12 * y.m21, x.m11 * y.m12 + x.m12 * y.m22,
                x.m21 * y.m11 + x.m22 * y.m21, x.m21 * y.m12 + x.m22 * y.m22};
    }

    /// Throws Error(SingularMatrix) when |det| <= 1e-9.
    Mat2 inverse() const;
};

/// Throws Error(SingularMatrix) unless |det| > 1e-9.
void require_nonsingular(const Mat2& m);

/// Closed axis-aligned rectangle [x0, x1] × [y0, y1]; degenerate sides are allowed.
struct Rect {
    double x0 = 0.0, x1 = 0.0;
    double y0 = 0.0, y1 = 0.0;

    static Rect square(double half) { return {-half, half, -half, half}; }

    bool contains(Complex2 p, double tol = 0.0) const {
        return p.re >= x0 - tol && p.re <= x1 + tol && p.im >= y0 - tol && p.im <= y1 + tol;
    }
    /// Max-norm distance from p to the rectangle (0 inside).
    double distance(Complex2 p) const;
    Complex2 clamp(Complex2 p) const { return {std::clamp(p.re, x0, x1), std::clamp(p.im, y0, y1)}; }
    bool valid() const { return x0 <= x1 && y0 <= y1; }
};

} // namespace signrange
