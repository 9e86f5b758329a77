#pragma once

#include <stdexcept>
#include <string>

namespace optivmd {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// signal_io
struct NotWav : Error { using Error::Error; };
struct UnsupportedEncoding : Error { using Error::Error; };
struct TruncatedFile : Error { using Error::Error; };
struct UnrecognizedPattern : Error { using Error::Error; };
struct UnknownEmotionCode : Error { using Error::Error; };

// vmd_core
struct EmptySignal : Error { using Error::Error; };
struct LengthMismatch : Error { using Error::Error; };
struct ZeroEnergyMode : Error { using Error::Error; };
struct NonFiniteValue : Error { using Error::Error; };

// features
struct SignalTooShort : Error { using Error::Error; };
struct BadBandEdges : Error { using Error::Error; };
struct WrongKind : Error { using Error::Error; };
struct TooManyChannels : Error { using Error::Error; };

// augment
struct RowTooShort : Error { using Error::Error; };
struct ClassTooSmall : Error { using Error::Error; };

// search_train
struct ExternalScorerFailed : Error { using Error::Error; };
struct FailedAllCells : Error { using Error::Error; };

// config / cli
struct ConfigError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

}  // namespace optivmd
