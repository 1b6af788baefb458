#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "core/allan.hpp"
#include "core/stability.hpp"

namespace csclock {

enum class MagneticModel { White, RandomWalk };

struct SimConfig {
  ClockParams clock;
  std::optional<double> detection_rate_per_s;  // peak full-sample rate; default from clock
  std::optional<double> linewidth_hz;          // default from clock
  double servo_gain = 0.6283185307179586;      // per switching cycle
  double lo_psd = 0.0;                         // white FM above the knee, Hz^2/Hz
  double lo_knee_hz = 20e3;
  double lo_floor_psd = 0.0;                   // white FM below the knee
  double bias_b_t = 0.0;
  MagneticModel b_model = MagneticModel::White;
  double b_amplitude = 0.0;  // T rms per cycle (white) or T/sqrt(s) (random walk)
  std::optional<double> zeeman_hz_per_t;  // default 2 muB/h
  bool alternate = true;
  bool shot_noise = true;
  double initial_detuning_hz = 0.0;
  double duty = 1.0;
  double duration_s = 100.0;
  double time_step_s = 1e-6;
  double record_interval_s = 0.01;
  std::uint64_t seed = 1;
  bool keep_counts = false;

  void check() const;
  double ndot() const;
  double delta_nu() const;
  double zeeman() const;
};

struct WindowCounts {
  double red_plus, blue_plus, red_minus, blue_minus;
};

struct SimTrace {
  std::vector<double> time_s;
  std::vector<double> y;
  std::vector<double> correction_hz;
  std::vector<WindowCounts> counts;  // per switching cycle when keep_counts
  std::uint64_t seed = 0;
  double record_interval_s = 0.0;
};

SimTrace simulate(const SimConfig& cfg);
std::string trace_csv(const SimTrace& t);

// (Delta nu / nu_c) / sqrt(Ndot), the alternating-lock shot-noise coefficient.
double analytic_shot_noise_sigma(const SimConfig& cfg);

std::uint64_t splitmix64(std::uint64_t& state);
std::vector<std::uint64_t> campaign_seeds(std::uint64_t master, std::size_t n);

struct CampaignResult {
  std::vector<double> tau;
  std::vector<double> mean_sigma;
  std::vector<double> spread;  // standard error of the mean; single run: chi-square half-width
  std::vector<std::uint64_t> seeds;
  std::vector<AllanSeries> per_seed;
  std::vector<double> per_seed_mean_y;
};

CampaignResult run_campaign(const SimConfig& cfg, std::size_t n_seeds, std::uint64_t master_seed,
                            const std::vector<double>& taus, unsigned threads = 0);
std::string campaign_csv(const CampaignResult& r);

}  // namespace csclock
