#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "core/quantum.hpp"
#include "core/units.hpp"

namespace csclock {

struct TransitionRecord {
  FineLevel lower;
  FineLevel upper;
  double wavelength_m = 0.0;  // vacuum
  double reduced_dipole_au = 0.0;
  std::string source;

  double wavelength_nm() const { return wavelength_m * 1e9; }
  bool operator==(const TransitionRecord&) const = default;
};

struct HyperfineConstants {
  double a_hz = 0.0;
  double b_hz = 0.0;
  std::string source;
  bool operator==(const HyperfineConstants&) const = default;
};

struct Lifetime {
  double tau_s = 0.0;
  std::string source;
  bool operator==(const Lifetime&) const = default;
};

struct AtomicDataset {
  Species species = Species::Cs;
  HalfInt nuclear_spin = HalfInt::from_twice(7);
  Polarizability core_polarizability;
  std::string core_source;
  std::map<FineLevel, HyperfineConstants> hyperfine;
  std::map<FineLevel, Lifetime> lifetimes;
  std::vector<TransitionRecord> transitions;

  const HyperfineConstants* hyperfine_for(const FineLevel& lv) const;
  const Lifetime* lifetime_for(const FineLevel& lv) const;
  bool has_level(const FineLevel& lv) const;
  bool operator==(const AtomicDataset&) const = default;
};

FineLevel clock_ground_level(Species s);
FineLevel clock_excited_level(Species s);

enum class Severity { Error, Warning, Note };

struct ValidationIssue {
  Severity severity;
  std::string code;
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;

  std::vector<ValidationIssue> errors() const;
  bool usable() const { return errors().empty(); }
  bool has(std::string_view code) const;
};

ValidationReport validate_dataset(const AtomicDataset& d);

AtomicDataset parse_dataset_text(std::string_view text);
AtomicDataset parse_dataset_json(std::string_view text);
// Detects JSON by a leading '{'. Throws on the first validation error.
AtomicDataset load_dataset(const std::filesystem::path& path);

// Casimir-formula hyperfine energy in Hz for a fine-structure level.
double hyperfine_energy_hz(double a_hz, double b_hz, HalfInt I, HalfInt j, int f);

}  // namespace csclock
