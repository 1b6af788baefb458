#pragma once

#include <numbers>

namespace csclock {

// CODATA 2018 values, SI units.
struct PhysConstants {
  double planck_h;
  double hbar;
  double c;
  double kB;
  double bohr_magneton;
  double elementary_charge;
  double bohr_radius;
  double vacuum_permittivity;
  double atomic_mass_unit;
  double cs_mass;
  double rb87_mass;
  double hartree_per_cm;
  double electron_g;
};

inline constexpr double kPlanck = 6.62607015e-34;
inline constexpr double kAmu = 1.66053906660e-27;

inline constexpr PhysConstants kPhys{
    kPlanck,
    kPlanck / (2.0 * std::numbers::pi),
    299792458.0,
    1.380649e-23,
    9.2740100783e-24,
    1.602176634e-19,
    5.29177210903e-11,
    8.8541878128e-12,
    kAmu,
    132.905451961 * kAmu,
    86.909180531 * kAmu,
    219474.6313632,
    2.00231930436,
};

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kSecondsPerDay = 86400.0;

}  // namespace csclock
