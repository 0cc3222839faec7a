#pragma once
/// @file error.hpp
/// Error codes and the exception type shared by every airshower module.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace airshower {

enum class Errc {
    // codec
    BadMagic,
    BadFieldCount,
    BadFieldValue,
    // store
    UnknownDevice,
    StorageFailure,
    CorruptLine,
    // flashdetect
    DimensionMismatch,
    TooFewFrames,
    // timesync
    EmptyInput,
    NegativeRtt,
    // ratestats
    BadRange,
    BadWindow,
    BaselineMissing,
    DegenerateInput,
    BadFit,
    // activity
    ZeroVariance,
    TooFewSamples,
    MissingClass,
    DegenerateFeature,
    // exposure
    UnorderedTrack,
    BadBBox,
    // simfleet
    BadConfig,
    // query service
    BadParameter,
    UnknownEndpoint,
};

constexpr std::string_view to_string(Errc c) noexcept {
    switch (c) {
        case Errc::BadMagic: return "BadMagic";
        case Errc::BadFieldCount: return "BadFieldCount";
        case Errc::BadFieldValue: return "BadFieldValue";
        case Errc::UnknownDevice: return "UnknownDevice";
        case Errc::StorageFailure: return "StorageFailure";
        case Errc::CorruptLine: return "CorruptLine";
        case Errc::DimensionMismatch: return "DimensionMismatch";
        case Errc::TooFewFrames: return "TooFewFrames";
        case Errc::EmptyInput: return "EmptyInput";
        case Errc::NegativeRtt: return "NegativeRtt";
        case Errc::BadRange: return "BadRange";
        case Errc::BadWindow: return "BadWindow";
        case Errc::BaselineMissing: return "BaselineMissing";
        case Errc::DegenerateInput: return "DegenerateInput";
        case Errc::BadFit: return "BadFit";
        case Errc::ZeroVariance: return "ZeroVariance";
        case Errc::TooFewSamples: return "TooFewSamples";
        case Errc::MissingClass: return "MissingClass";
        case Errc::DegenerateFeature: return "DegenerateFeature";
        case Errc::UnorderedTrack: return "UnorderedTrack";
        case Errc::BadBBox: return "BadBBox";
        case Errc::BadConfig: return "BadConfig";
        case Errc::BadParameter: return "BadParameter";
        case Errc::UnknownEndpoint: return "UnknownEndpoint";
    }
    return "Unknown";
}

/// Thrown by every operation that can fail. `field` names the offending
/// input (codec field name, query parameter, ...) when there is one.
class Error : public std::runtime_error {
public:
    Error(Errc code, std::string detail, std::string field = {})
        : std::runtime_error(compose(code, detail, field)),
          code_(code),
          detail_(std::move(detail)),
          field_(std::move(field)) {}

    Errc code() const noexcept { return code_; }
    const std::string& detail() const noexcept { return detail_; }
    const std::string& field() const noexcept { return field_; }

private:
    static std::string compose(Errc code, const std::string& detail, const std::string& field) {
        std::string s{to_string(code)};
        if (!field.empty()) s += "(" + field + ")";
        if (!detail.empty()) s += ": " + detail;
        return s;
    }

    Errc code_;
    std::string detail_;
    std::string field_;
};

}  // namespace airshower
