#pragma once

#include <optional>
#include <string>
#include <vector>

#include "core/dataset.hpp"
#include "core/units.hpp"

namespace csclock {

struct PolarizabilityOptions {
  double exclusion_half_width_nm = 0.01;
};

struct PolarizabilityRecord {
  FineLevel level;
  std::optional<double> wavelength_nm;  // nullopt: static
  Polarizability alpha0;
  Polarizability alpha2;
  bool core_included = false;
};

PolarizabilityRecord dynamic_polarizability(const AtomicDataset& d, const FineLevel& level,
                                            std::optional<double> wavelength_nm,
                                            const PolarizabilityOptions& opt = {});

// Ratio alpha2(f)/alpha2(j).
double tensor_recoupling_factor(HalfInt j, HalfInt I, int f);

struct HyperfinePolarizability {
  int f = 0;
  int m = 0;
  Polarizability alpha;
  std::optional<double> wavelength_nm;
};

HyperfinePolarizability hyperfine_polarizability(const PolarizabilityRecord& rec, HalfInt I, int f, int m);

struct HyperfineState {
  FineLevel level;
  int f = 0;
  int m = 0;
};

// alpha_e(f,m) - alpha_g(f,m) in A^3.
double differential_polarizability(const AtomicDataset& d, const HyperfineState& ground, const HyperfineState& excited,
                                   double wavelength_nm, const PolarizabilityOptions& opt = {});

struct MagicPoint {
  double wavelength_nm = 0.0;
  double slope_a3_per_mhz = 0.0;  // d(delta alpha)/d(nu)
  double bracket_lo_nm = 0.0;
  double bracket_hi_nm = 0.0;
  double residual_a3 = 0.0;
};

struct MagicWindow {
  double min_nm = 0.0;
  double max_nm = 0.0;
  double step_nm = 0.05;
};

std::vector<MagicPoint> find_magic_wavelengths(const AtomicDataset& d, const HyperfineState& ground,
                                               const HyperfineState& excited, const MagicWindow& window,
                                               const PolarizabilityOptions& opt = {});

std::vector<double> resonance_wavelengths_nm(const AtomicDataset& d, const FineLevel& level);

struct ScanRow {
  double wavelength_nm;
  double alpha0_ground;
  double alpha0_excited;
  double alpha2_excited;
  double delta_alpha;
};

// Points inside resonance exclusion zones are omitted.
std::vector<ScanRow> polarizability_scan(const AtomicDataset& d, const HyperfineState& ground,
                                         const HyperfineState& excited, const MagicWindow& window,
                                         const PolarizabilityOptions& opt = {});
std::string scan_csv(const std::vector<ScanRow>& rows);

struct BbrShift {
  double shift_hz = 0.0;
  double sensitivity_hz_per_k = 0.0;
};

BbrShift bbr_shift(double ground_shift_300k_hz, double excited_shift_300k_hz, double temperature_k);

}  // namespace csclock
