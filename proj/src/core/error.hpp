#pragma once

#include <stdexcept>
#include <string>

namespace csclock {

enum class ErrorKind {
  MissingFile,
  ParseError,
  DuplicateTransition,
  MissingLifetime,
  UnknownUnit,
  UnknownLevel,
  InvalidQuantumNumbers,
  ForbiddenTransition,
  TooCloseToResonance,
  EmptyDataset,
  InvalidF,
  InvalidM,
  EmptyWindow,
  NegativeTemperature,
  MissingHyperfineConstants,
  GridMismatch,
  DegenerateInput,
  SubwavelengthPeriod,
  ZeroArea,
  ZeroBuildup,
  InvalidArgument,
  MissingModelInput,
  ZeroSensitivity,
  UnstableServo,
  TooShortTrace,
  ConfigError,
  UsageError,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

}  // namespace csclock
