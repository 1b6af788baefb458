#pragma once

#include <string>
#include <vector>

namespace csclock {

struct LatticeConfig {
  double period_um = 0.9;
  double wavelength_um = 0.803;
  double region_um = 250.0;
  double power_w = 2.0;
  double axial_power_w = 2.2;
  double buildup = 50.0;
  double fill = 0.5;
  double probe_wavelength_nm = 685.0;
  double mass_kg = 0.0;
  double polarizability_a3 = -374.0;
  double saturated_linewidth_hz = 1.7584e5;
  bool bright = false;

  // Throws InvalidArgument on a violated invariant.
  void check() const;
  bool paraxial() const { return period_um > wavelength_um / 2.0; }
};

double talbot_length_um(double wavelength_um, double period_um);

struct LatticeGeometry {
  double talbot_um = 0.0;
  double sites = 0.0;
  double atoms = 0.0;
};

LatticeGeometry lattice_geometry(const LatticeConfig& cfg);

double recoil_energy_j(double wavelength_m, double mass_kg);

struct TrapDepth {
  double depth_uk = 0.0;
  double recoil_uk = 0.0;
  double depth_recoil = 0.0;
};

// Uniform intensity power/area; alpha in A^3, wavelength sets the recoil unit.
TrapDepth trap_depth(double alpha_a3, double power_w, double area_m2, double wavelength_m, double mass_kg,
                     bool bright = false);

double lamb_dicke(double probe_wavelength_m, double mass_kg, double nu_vib_hz);
double sideband_weight(double nu_vib_hz, double linewidth_hz);

struct SpectrumSample {
  double detuning_hz;
  double relative_absorption;
};

struct AxialSidebands {
  double nu_vib_hz = 0.0;
  double lamb_dicke = 0.0;
  double relative_sideband = 0.0;
  std::vector<SpectrumSample> spectrum;
};

AxialSidebands axial_sidebands(const LatticeConfig& cfg, double span_hz = 2.5e6, std::size_t points = 501);
double sideband_spectrum(double detuning_hz, double nu_vib_hz, double eta, double linewidth_hz);
std::string spectrum_csv(const std::vector<SpectrumSample>& s);

struct Depumping {
  double ratio = 0.0;
  double rate_per_s = 0.0;
};

Depumping depumping(double saturation, double delta65_rad_s, double gamma_rad_s, double branching = 1.0);

struct TrapMetrics {
  double talbot_um = 0.0;
  double sites = 0.0;
  double atoms = 0.0;
  double depth_uk = 0.0;
  double recoil_uk = 0.0;
  double depth_recoil = 0.0;
  double nu_vib_mhz = 0.0;
  double lamb_dicke = 0.0;
  double relative_sideband = 0.0;
  bool paraxial = true;
};

TrapMetrics lattice_design(const LatticeConfig& cfg);

}  // namespace csclock
