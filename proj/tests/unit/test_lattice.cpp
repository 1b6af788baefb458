#include <cmath>

#include "core/constants.hpp"
#include "core/error.hpp"
#include "core/lattice.hpp"
#include "core/quantum.hpp"
#include "doctest.h"

using namespace csclock;

namespace {
template <class F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::InvalidArgument;
}

LatticeConfig baseline() {
  LatticeConfig c;
  c.mass_kg = mass_of(Species::Cs);
  return c;
}

constexpr double kPiT = 3.14159265358979323846;
}  // namespace

TEST_SUITE("lattice") {
  TEST_CASE("Talbot length") {
    CHECK(std::abs(talbot_length_um(0.803, 0.9) - 1.46) <= 0.01 * 1.46);
    CHECK(talbot_length_um(0.803, 0.803) == doctest::Approx(0.803));
    const double d = 20 * 0.803;
    CHECK(std::abs(talbot_length_um(0.803, d) - 2 * d * d / 0.803) <= 0.01 * 2 * d * d / 0.803);
    CHECK(kind_of([] { talbot_length_um(0.803, 0.5); }) == ErrorKind::SubwavelengthPeriod);
    CHECK(kind_of([] { talbot_length_um(0.0, 0.5); }) == ErrorKind::InvalidArgument);
    double prev = 0.0;
    for (double p = 0.81; p < 5.0; p += 0.1) {
      const double l = talbot_length_um(0.803, p);
      CHECK(l > prev);
      prev = l;
    }
  }

  TEST_CASE("site and atom counts") {
    auto c = baseline();
    const auto g = lattice_geometry(c);
    CHECK(std::abs(g.sites - 1.3e7) <= 0.05 * 1.3e7);
    CHECK(std::abs(g.atoms - 6.6e6) <= 0.05 * 6.6e6);
    CHECK(g.atoms == doctest::Approx(0.5 * g.sites));
    c.fill = 0.0;
    CHECK(lattice_geometry(c).atoms == 0.0);
    c = baseline();
    c.region_um *= 2.0;
    CHECK(lattice_geometry(c).sites == doctest::Approx(8.0 * g.sites));
    c = baseline();
    c.fill = 1.5;
    CHECK(kind_of([&] { lattice_geometry(c); }) == ErrorKind::InvalidArgument);
    c = baseline();
    c.mass_kg = 0.0;
    CHECK(kind_of([&] { lattice_geometry(c); }) == ErrorKind::InvalidArgument);
  }

  TEST_CASE("trap depth") {
    const double m = mass_of(Species::Cs);
    const double area = 250e-6 * 250e-6;
    const auto t = trap_depth(-374.0, 2.0, area, 803e-9, m);
    CHECK(std::abs(t.depth_uk - 18.0) <= 0.05 * 18.0);
    CHECK(std::abs(t.recoil_uk - 0.112) <= 0.01 * 0.112);
    CHECK(t.depth_recoil == doctest::Approx(t.depth_uk / t.recoil_uk));
    // independent: U = alpha_SI I / (2 eps0 c), alpha_SI = 4 pi eps0 alpha_vol
    const double u = 4 * kPiT * 374.0e-30 * (2.0 / area) / (2 * kPhys.c);
    CHECK(t.depth_uk == doctest::Approx(u / kPhys.kB * 1e6).epsilon(1e-9));
    CHECK(trap_depth(-374.0, 0.0, area, 803e-9, m).depth_uk == 0.0);
    CHECK(trap_depth(-374.0, 4.0, area, 803e-9, m).depth_uk == doctest::Approx(2 * t.depth_uk));
    CHECK(kind_of([&] { trap_depth(-374.0, 2.0, 0.0, 803e-9, m); }) == ErrorKind::ZeroArea);
    CHECK(kind_of([&] { trap_depth(374.0, 2.0, area, 803e-9, m); }) == ErrorKind::InvalidArgument);
    CHECK(trap_depth(374.0, 2.0, area, 803e-9, m, true).depth_uk == doctest::Approx(t.depth_uk));
    CHECK(kind_of([&] { trap_depth(-374.0, -1.0, area, 803e-9, m); }) == ErrorKind::InvalidArgument);
  }

  TEST_CASE("axial confinement and Lamb-Dicke parameter") {
    const auto c = baseline();
    const auto s = axial_sidebands(c, 2.5e6, 11);
    // harmonic approximation of U0 cos^2(kx): omega = k sqrt(2 U0 / m)
    const double area = c.region_um * c.region_um * 1e-12;
    const double u0 = 4 * kPiT * 374.0e-30 * (4 * c.buildup * c.axial_power_w / area) / (2 * kPhys.c);
    const double k = 2 * kPiT / (c.wavelength_um * 1e-6);
    const double nu = k * std::sqrt(2 * u0 / c.mass_kg) / (2 * kPiT);
    CHECK(s.nu_vib_hz == doctest::Approx(nu).epsilon(1e-9));
    // eta^2 = E_rec(probe) / (h nu)
    const double er = recoil_energy_j(685e-9, c.mass_kg);
    CHECK(s.lamb_dicke == doctest::Approx(std::sqrt(er / (kPhys.planck_h * s.nu_vib_hz))).epsilon(1e-9));
    CHECK(s.lamb_dicke < 0.1);
    CHECK(s.spectrum.size() == 11);
  }

  TEST_CASE("sideband spectrum") {
    const double gamma = 1.7584e5, nu = 1e6, eta = 0.06;
    CHECK(sideband_spectrum(0.0, nu, eta, gamma) == doctest::Approx(1.0).epsilon(1e-15));
    for (double d : {1e3, 1e5, 9e5, 1e6, 2e6})
      CHECK(sideband_spectrum(d, nu, eta, gamma) == doctest::Approx(sideband_spectrum(-d, nu, eta, gamma)));
    CHECK(sideband_spectrum(nu, nu, eta, gamma) > sideband_spectrum(nu, nu, 0.0, gamma));
    double prev = 1.0;
    for (double v = 1e5; v < 5e6; v *= 1.5) {
      const double w = sideband_weight(v, gamma);
      CHECK(w < prev);
      prev = w;
    }
    auto c = baseline();
    c.axial_power_w = 4.4;
    const double strong = axial_sidebands(c, 0.0, 0).relative_sideband;
    CHECK(strong < axial_sidebands(baseline(), 0.0, 0).relative_sideband);
    c = baseline();
    c.buildup = 0.0;
    CHECK(kind_of([&] { axial_sidebands(c); }) == ErrorKind::ZeroBuildup);
    const auto csv = spectrum_csv(axial_sidebands(baseline(), 1e6, 3).spectrum);
    CHECK(csv.rfind("detuning_Hz,relative_absorption\n", 0) == 0);
  }

  TEST_CASE("hyperfine depumping") {
    const double d65 = 2 * kPiT * 127.3e6, gamma = 1.0 / 1.28e-6;
    const auto d = depumping(1.0, d65, gamma);
    CHECK(std::abs(d.ratio - 1.2e-7) <= 0.05 * 1.2e-7);
    CHECK(std::abs(d.rate_per_s - 0.094) <= 0.05 * 0.094);
    CHECK(depumping(1.0, d65, gamma, 0.0).rate_per_s == 0.0);
    CHECK(depumping(1.0, 1e300, gamma).ratio == doctest::Approx(0.0).epsilon(1e-30));
    CHECK(depumping(10.0, d65, gamma).ratio > d.ratio);
    CHECK(depumping(1.0, 2 * d65, gamma).ratio == doctest::Approx(d.ratio / 4).epsilon(1e-5));
    CHECK(kind_of([&] { depumping(0.0, d65, gamma); }) == ErrorKind::InvalidArgument);
    CHECK(kind_of([&] { depumping(1.0, d65, gamma, -1.0); }) == ErrorKind::InvalidArgument);
  }

  TEST_CASE("design summary is consistent with its parts") {
    const auto c = baseline();
    const auto m = lattice_design(c);
    const auto g = lattice_geometry(c);
    CHECK(m.talbot_um == g.talbot_um);
    CHECK(m.sites == g.sites);
    CHECK(m.paraxial);
    CHECK(m.depth_recoil > 100.0);
    CHECK(m.nu_vib_mhz * 1e6 == doctest::Approx(axial_sidebands(c, 0.0, 0).nu_vib_hz));
  }
}
