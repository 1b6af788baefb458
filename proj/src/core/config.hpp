#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "core/lattice.hpp"
#include "core/locksim.hpp"
#include "core/stability.hpp"
#include "core/zeeman.hpp"

namespace csclock {

struct PolarizabilitySection {
  std::string ground = "6s1/2";
  int ground_f = 4;
  int ground_m = 4;
  std::string excited = "5d5/2";
  int excited_f = 6;
  int excited_m = 6;
  double scan_min_nm = 795.0;
  double scan_max_nm = 810.0;
  double scan_step_nm = 0.01;
  double wide_min_nm = 600.0;
  double wide_max_nm = 900.0;
  double wide_step_nm = 0.25;
  double probe_scan_min_nm = 675.0;
  double probe_scan_max_nm = 695.0;
  double probe_scan_step_nm = 0.05;
  double magic_min_nm = 795.0;
  double magic_max_nm = 810.0;
  double magic_step_nm = 0.05;
  double lattice_nm = 803.0;
  double probe_nm = 685.0;
  double exclusion_half_width_nm = 0.01;
  double bbr_ground_300k_hz = -3.589;
  double bbr_excited_300k_hz = 5.315;
  double temperature_k = 300.0;
};

struct ZeemanSection {
  std::string ground = "6s1/2";
  std::string excited = "5d5/2";
  double b_min_t = 0.0;
  double b_max_t = 2e-3;
  int steps = 401;
  double field_t = 1e-8;
  double g_excited = 0.5;
  double g_ground = 0.25;
  std::vector<BranchPair> pairs{{4, 2, 6, 1}, {4, -2, 6, -1}, {4, 4, 6, 2}, {4, -4, 6, -2}};
};

struct LatticeSection {
  LatticeConfig config;
  std::optional<double> polarizability_a3;  // default: dataset ground-state alpha0 at the lattice wavelength
  double spectrum_span_hz = 2.5e6;
  int spectrum_points = 501;
  double depumping_saturation = 1.0;
  double depumping_branching = 1.0;
};

struct ClockSection {
  ClockParams params;
  std::optional<double> atom_number;  // default: lattice geometry
};

struct SystematicsSection {
  std::string target = "1ns@30d";
  std::string allocation = "full-per-row";
  std::optional<double> probe_delta_alpha_a3;
  double probe_saturation_intensity_w_m2 = 5700.0;
  std::optional<double> magic_slope_a3_per_mhz;
  std::optional<double> lattice_alpha0_a3;
  double atom_temperature_k = 1e-6;
  double dc_field_beta_hz_per_v_m = -4.7;
};

struct SimulationSection {
  SimConfig sim;
  std::optional<double> f_s_hz;
  std::optional<double> f_m_hz;
  int seeds = 1;
  std::vector<double> taus;
};

struct ReportSection {
  std::vector<std::string> sections{"polarizability", "zeeman", "lattice", "stability", "systematics"};
  std::optional<std::string> reference_scenario;
};

struct OutputSection {
  std::filesystem::path directory = "out";
  std::vector<std::string> formats{"csv", "json", "text"};
};

struct RunConfig {
  std::string scenario = "custom";
  std::string description;
  std::filesystem::path dataset;
  std::filesystem::path base_dir;
  PolarizabilitySection polarizability;
  ZeemanSection zeeman;
  LatticeSection lattice;
  ClockSection clock;
  SystematicsSection systematics;
  SimulationSection simulation;
  ReportSection report;
  OutputSection output;

  bool wants(std::string_view format) const;
  // Range and cross-field checks plus dataset existence; throws ConfigError.
  void validate() const;
  SimConfig sim_config() const;
};

std::filesystem::path data_dir();
std::filesystem::path scenario_path(const std::string& name);

RunConfig parse_run_config(const std::string& yaml_text, const std::filesystem::path& base_dir,
                           const std::vector<std::string>& overrides = {});
RunConfig load_run_config(const std::filesystem::path& path, const std::vector<std::string>& overrides = {});
RunConfig load_scenario(const std::string& name, const std::vector<std::string>& overrides = {});

// Resolves a dataset reference relative to base_dir, then the bundled data directory.
std::filesystem::path resolve_data_path(const std::filesystem::path& p, const std::filesystem::path& base_dir);

}  // namespace csclock
