#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace signrange {

enum class ErrorKind {
    InvalidArgument,     // malformed input, failed precondition
    IndexOutOfRange,
    LengthMismatch,
    TooLarge,            // enumeration guards
    SingularMatrix,
    Precondition,
    InsufficientMass,
    NoRatio,
    BracketViolation,    // a constructive bound from the theory failed: a finding
    TargetEscapes,
    NotBlockAligned,
    Io,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool condition, ErrorKind kind, const std::string& what) {
    if (!condition) {
        fail(kind, what);
    }
}

} // namespace signrange
