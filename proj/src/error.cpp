#include "lftensor/error.hpp"

namespace lftensor {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::MissingView: return "MissingView";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::CorruptDescriptor: return "CorruptDescriptor";
        case ErrorCode::IoFailure: return "IoFailure";
        case ErrorCode::BadMagic: return "BadMagic";
        case ErrorCode::BadScale: return "BadScale";
        case ErrorCode::TruncatedPayload: return "TruncatedPayload";
        case ErrorCode::EvenAngularDim: return "EvenAngularDim";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::DegeneratePrediction: return "DegeneratePrediction";
        case ErrorCode::EmptySet: return "EmptySet";
        case ErrorCode::TooFewViews: return "TooFewViews";
        case ErrorCode::RowOutOfBounds: return "RowOutOfBounds";
        case ErrorCode::DegenerateAngularGrid: return "DegenerateAngularGrid";
        case ErrorCode::EmptyAperture: return "EmptyAperture";
        case ErrorCode::IndexOutOfBounds: return "IndexOutOfBounds";
    }
    return "Unknown";
}

}  // namespace lftensor
