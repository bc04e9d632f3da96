#pragma once

#include <stdexcept>
#include <string>

namespace jumplab {

// Error taxonomy shared by the C++ core and the C API layer.
enum class ErrorCode {
    Ok = 0,
    InvalidArgument = 1,
    InsufficientData = 2,
    DegeneratePath = 3,
    DegenerateVariance = 4,
    NumericFailure = 5,
    ParseError = 6,
    FlatDay = 7,
    IoError = 8,
    Internal = 9,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& what) {
    throw Error(code, what);
}

inline void require(bool cond, ErrorCode code, const std::string& what) {
    if (!cond) raise(code, what);
}

}  // namespace jumplab
