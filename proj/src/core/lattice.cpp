#include "core/lattice.hpp"

#include <cmath>

#include <fmt/format.h>

#include "core/constants.hpp"
#include "core/error.hpp"

namespace csclock {

namespace {

double dipole_potential_j(double alpha_a3, double intensity_w_m2) {
  return 2.0 * kPi * std::abs(alpha_a3) * 1e-30 * intensity_w_m2 / kPhys.c;
}

}  // namespace

void LatticeConfig::check() const {
  if (!(period_um > 0.0) || !(wavelength_um > 0.0) || !(region_um > 0.0))
    fail(ErrorKind::InvalidArgument, "lattice period, wavelength and region size must be positive");
  if (fill < 0.0 || fill > 1.0) fail(ErrorKind::InvalidArgument, fmt::format("fill fraction {} outside [0,1]", fill));
  if (power_w < 0.0 || axial_power_w < 0.0) fail(ErrorKind::InvalidArgument, "powers must be >= 0");
  if (!(mass_kg > 0.0)) fail(ErrorKind::InvalidArgument, "atom mass must be positive");
  if (!(probe_wavelength_nm > 0.0)) fail(ErrorKind::InvalidArgument, "probe wavelength must be positive");
}

double talbot_length_um(double wavelength_um, double period_um) {
  if (!(wavelength_um > 0.0)) fail(ErrorKind::InvalidArgument, "wavelength must be positive");
  if (period_um < wavelength_um)
    fail(ErrorKind::SubwavelengthPeriod, fmt::format("period {} um is below the wavelength {} um", period_um, wavelength_um));
  const double r = wavelength_um / period_um;
  return wavelength_um / (1.0 - std::sqrt(1.0 - r * r));
}

LatticeGeometry lattice_geometry(const LatticeConfig& cfg) {
  cfg.check();
  LatticeGeometry g;
  g.talbot_um = talbot_length_um(cfg.wavelength_um, cfg.period_um);
  const double w = cfg.region_um, d = cfg.period_um;
  g.sites = w * w * w / (d * d * g.talbot_um);
  g.atoms = cfg.fill * g.sites;
  return g;
}

double recoil_energy_j(double wavelength_m, double mass_kg) {
  const double h = kPhys.planck_h;
  return h * h / (2.0 * mass_kg * wavelength_m * wavelength_m);
}

TrapDepth trap_depth(double alpha_a3, double power_w, double area_m2, double wavelength_m, double mass_kg, bool bright) {
  if (!(area_m2 > 0.0)) fail(ErrorKind::ZeroArea, "trap area must be positive");
  if (alpha_a3 > 0.0 && !bright)
    fail(ErrorKind::InvalidArgument, "positive polarizability needs the bright-trap flag");
  if (power_w < 0.0) fail(ErrorKind::InvalidArgument, "power must be >= 0");
  TrapDepth t;
  const double u = dipole_potential_j(alpha_a3, power_w / area_m2);
  const double er = recoil_energy_j(wavelength_m, mass_kg);
  t.depth_uk = u / kPhys.kB * 1e6;
  t.recoil_uk = er / kPhys.kB * 1e6;
  t.depth_recoil = u / er;
  return t;
}

double lamb_dicke(double probe_wavelength_m, double mass_kg, double nu_vib_hz) {
  const double k = 2.0 * kPi / probe_wavelength_m;
  return k * std::sqrt(kPhys.hbar / (2.0 * mass_kg * 2.0 * kPi * nu_vib_hz));
}

double sideband_weight(double nu_vib_hz, double linewidth_hz) {
  const double x = 2.0 * nu_vib_hz / linewidth_hz;
  return 1.0 / (1.0 + x * x);
}

double sideband_spectrum(double detuning_hz, double nu_vib_hz, double eta, double linewidth_hz) {
  auto L = [&](double x) { return sideband_weight(x, linewidth_hz); };
  const double e2 = eta * eta;
  const double norm = 1.0 + 2.0 * e2 * L(nu_vib_hz);
  return (L(detuning_hz) + e2 * (L(detuning_hz - nu_vib_hz) + L(detuning_hz + nu_vib_hz))) / norm;
}

AxialSidebands axial_sidebands(const LatticeConfig& cfg, double span_hz, std::size_t points) {
  cfg.check();
  if (!(cfg.buildup > 0.0)) fail(ErrorKind::ZeroBuildup, "cavity buildup must be positive");
  if (!(cfg.axial_power_w > 0.0)) fail(ErrorKind::InvalidArgument, "1D-lattice power must be positive");
  if (!(cfg.saturated_linewidth_hz > 0.0)) fail(ErrorKind::InvalidArgument, "linewidth must be positive");
  const double area = cfg.region_um * cfg.region_um * 1e-12;
  // Counter-propagating beams at the circulating intensity give a 4x antinode.
  const double i_peak = 4.0 * cfg.buildup * cfg.axial_power_w / area;
  const double u0 = dipole_potential_j(cfg.polarizability_a3, i_peak);
  const double er = recoil_energy_j(cfg.wavelength_um * 1e-6, cfg.mass_kg);
  AxialSidebands s;
  s.nu_vib_hz = 2.0 * std::sqrt(u0 * er) / kPhys.planck_h;
  s.lamb_dicke = lamb_dicke(cfg.probe_wavelength_nm * 1e-9, cfg.mass_kg, s.nu_vib_hz);
  s.relative_sideband = sideband_weight(s.nu_vib_hz, cfg.saturated_linewidth_hz);
  if (points >= 2) {
    for (std::size_t k = 0; k < points; ++k) {
      const double det = -span_hz + 2.0 * span_hz * static_cast<double>(k) / static_cast<double>(points - 1);
      s.spectrum.push_back({det, sideband_spectrum(det, s.nu_vib_hz, s.lamb_dicke, cfg.saturated_linewidth_hz)});
    }
  }
  return s;
}

std::string spectrum_csv(const std::vector<SpectrumSample>& s) {
  std::string out = "detuning_Hz,relative_absorption\n";
  for (const auto& p : s) out += fmt::format("{:.6e},{:.9e}\n", p.detuning_hz, p.relative_absorption);
  return out;
}

Depumping depumping(double s, double delta65, double gamma, double branching) {
  if (!(s > 0.0) || !(delta65 > 0.0) || !(gamma > 0.0))
    fail(ErrorKind::InvalidArgument, "depumping needs s, delta65 and gamma > 0");
  if (branching < 0.0) fail(ErrorKind::InvalidArgument, "branching multiplier must be >= 0");
  Depumping d;
  const double x = delta65 / gamma;
  d.ratio = 0.5 / (2.0 / s + 4.0 * x * x);
  d.rate_per_s = d.ratio * gamma * branching;
  return d;
}

TrapMetrics lattice_design(const LatticeConfig& cfg) {
  const auto geo = lattice_geometry(cfg);
  const double area = cfg.region_um * cfg.region_um * 1e-12;
  const auto depth = trap_depth(cfg.polarizability_a3, cfg.power_w, area, cfg.wavelength_um * 1e-6, cfg.mass_kg, cfg.bright);
  const auto sb = axial_sidebands(cfg, 0.0, 0);
  TrapMetrics m;
  m.talbot_um = geo.talbot_um;
  m.sites = geo.sites;
  m.atoms = geo.atoms;
  m.depth_uk = depth.depth_uk;
  m.recoil_uk = depth.recoil_uk;
  m.depth_recoil = depth.depth_recoil;
  m.nu_vib_mhz = sb.nu_vib_hz / 1e6;
  m.lamb_dicke = sb.lamb_dicke;
  m.relative_sideband = sb.relative_sideband;
  m.paraxial = cfg.paraxial();
  return m;
}

}  // namespace csclock
