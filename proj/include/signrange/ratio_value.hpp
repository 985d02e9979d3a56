#pragma once

#include <compare>
#include <limits>
#include <string>

namespace signrange {

/// A ratio t = lim a_n / b_n, which may be the infinity marker. The marker is
/// ordered above every real value.
struct RatioValue {
    bool infinite = false;
    double value = 0.0;

    static constexpr RatioValue finite(double t) { return {false, t}; }
    static constexpr RatioValue infinity() { return {true, 0.0}; }

    friend constexpr bool operator==(const RatioValue& a, const RatioValue& b) {
        return a.infinite == b.infinite && (a.infinite || a.value == b.value);
    }
    friend constexpr std::partial_ordering operator<=>(const RatioValue& a, const RatioValue& b) {
        if (a.infinite || b.infinite) {
            return a.infinite <=> b.infinite;
        }
        return a.value <=> b.value;
    }

    std::string str() const { return infinite ? std::string("inf") : std::to_string(value); }
};

} // namespace signrange
