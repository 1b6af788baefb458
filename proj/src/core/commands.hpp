#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "core/config.hpp"
#include "core/dataset.hpp"
#include "core/lattice.hpp"
#include "core/polarizability.hpp"
#include "core/stability.hpp"
#include "core/systematics.hpp"
#include "core/zeeman.hpp"

namespace csclock {

struct Artifact {
  std::string name;
  std::string format;  // csv, json, text
  std::string content;
};

struct CommandOptions {
  std::optional<std::string> target;
  std::optional<std::string> allocation;
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;
};

// Subcommand names as on the command line, e.g. "magic find".
const std::vector<std::string>& command_names();

// Validates the config, loads the dataset and runs one subcommand. Artifacts are
// filtered by the configured output formats and are byte-stable for a given config.
std::vector<Artifact> run_command(const std::string& command, const RunConfig& cfg, const CommandOptions& opt = {});

// Writes artifacts under dir, creating it. Returns the written paths.
std::vector<std::string> write_artifacts(const std::vector<Artifact>& a, const std::string& dir);

struct PolarizabilityAnchors {
  double alpha0_ground_lattice_a3 = 0.0;
  double alpha0_ground_static_a3 = 0.0;
  double alpha0_excited_lattice_a3 = 0.0;
  double alpha2_excited_lattice_a3 = 0.0;
  double delta_alpha_probe_a3 = 0.0;
  std::vector<MagicPoint> magic;
  std::optional<double> tensor_spread;  // at the first magic root
  BbrShift bbr;
};

PolarizabilityAnchors polarizability_anchors(const AtomicDataset& d, const RunConfig& cfg);

struct ZeemanSummary {
  double delta65_hz = 0.0;  // |E(f_max) - E(f_max - 1)| of the excited level at zero field
  StretchedShift stretched;
  struct PairRoots {
    BranchPair pair;
    std::vector<MagicField> roots;
  };
  std::vector<PairRoots> magic_b;
};

ZeemanSummary zeeman_summary(const AtomicDataset& d, const RunConfig& cfg, ZeemanMap* ground = nullptr,
                             ZeemanMap* excited = nullptr);

struct LatticeSummary {
  LatticeConfig config;
  TrapMetrics metrics;
  Depumping depumping;
  double delta65_rad_s = 0.0;
  double gamma_rad_s = 0.0;
};

LatticeSummary lattice_summary(const AtomicDataset& d, const RunConfig& cfg);

// Clock parameters with the atom number filled from the lattice geometry when unset.
ClockParams clock_params(const RunConfig& cfg);

struct SystematicsResult {
  SensitivityInputs inputs;
  std::vector<std::string> input_origin;  // "config" or "dataset" per model input
  std::vector<BudgetRow> rows;
  TimingTarget target;
  double fractional_target = 0.0;
  std::optional<double> model_magic_slope_a3_per_mhz;
};

SystematicsResult systematics_result(const AtomicDataset& d, const RunConfig& cfg, const CommandOptions& opt = {});

}  // namespace csclock
