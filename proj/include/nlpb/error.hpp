// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>

namespace nlpb {

enum class ErrorCode {
    RejectedSequence,
    DimMismatch,
    NotHermitian,
    NotPositive,
    NotDiagonalizable,
    NoVacuum,
    DegenerateVacuum,
    ZeroOverlap,
    SingularT,
    LadderMismatch,
    InvalidF,
    NonMonotone,
    InvalidParams,
    NegativeEpsilon,
    InvalidS,
    InvalidQ,
    NotHermitianS,
    OutsideRadius,
    BadGrid,
    ConfigError,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries one of the codes above so that
// callers (and tests) can branch on the kind of failure, not on message text.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Short scientific rendering for error messages.
inline std::string format_real(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return buf;
}

}  // namespace nlpb
