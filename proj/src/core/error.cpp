#include "core/error.hpp"

namespace csclock {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::MissingFile: return "MissingFile";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::DuplicateTransition: return "DuplicateTransition";
    case ErrorKind::MissingLifetime: return "MissingLifetime";
    case ErrorKind::UnknownUnit: return "UnknownUnit";
    case ErrorKind::UnknownLevel: return "UnknownLevel";
    case ErrorKind::InvalidQuantumNumbers: return "InvalidQuantumNumbers";
    case ErrorKind::ForbiddenTransition: return "ForbiddenTransition";
    case ErrorKind::TooCloseToResonance: return "TooCloseToResonance";
    case ErrorKind::EmptyDataset: return "EmptyDataset";
    case ErrorKind::InvalidF: return "InvalidF";
    case ErrorKind::InvalidM: return "InvalidM";
    case ErrorKind::EmptyWindow: return "EmptyWindow";
    case ErrorKind::NegativeTemperature: return "NegativeTemperature";
    case ErrorKind::MissingHyperfineConstants: return "MissingHyperfineConstants";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::DegenerateInput: return "DegenerateInput";
    case ErrorKind::SubwavelengthPeriod: return "SubwavelengthPeriod";
    case ErrorKind::ZeroArea: return "ZeroArea";
    case ErrorKind::ZeroBuildup: return "ZeroBuildup";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::MissingModelInput: return "MissingModelInput";
    case ErrorKind::ZeroSensitivity: return "ZeroSensitivity";
    case ErrorKind::UnstableServo: return "UnstableServo";
    case ErrorKind::TooShortTrace: return "TooShortTrace";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::UsageError: return "UsageError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(message), kind_(kind) {}

void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace csclock
