#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lftensor {

enum class ErrorCode {
    MissingView,
    DimensionMismatch,
    CorruptDescriptor,
    IoFailure,
    BadMagic,
    BadScale,
    TruncatedPayload,
    EvenAngularDim,
    InvalidArgument,
    DegeneratePrediction,
    EmptySet,
    TooFewViews,
    RowOutOfBounds,
    DegenerateAngularGrid,
    EmptyAperture,
    IndexOutOfBounds,
};

std::string_view to_string(ErrorCode code);

/// Data error raised by every library operation. The CLI maps it to exit code 1.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace lftensor
