#include "signrange/rational.hpp"

#include <numeric>

#include "signrange/error.hpp"

namespace signrange {

Rational::Rational(std::int64_t num, std::int64_t den) {
    require(den != 0, ErrorKind::InvalidArgument, "rational with zero denominator");
    require(num != INT64_MIN && den != INT64_MIN, ErrorKind::InvalidArgument, "rational component out of range");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    num_ = num / g;
    den_ = den / g;
}

std::string Rational::str() const { return std::to_string(num_) + "/" + std::to_string(den_); }

} // namespace signrange
