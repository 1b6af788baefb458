#pragma once

#include <string>
#include <vector>

#include "core/dataset.hpp"

namespace csclock {

double lande_gj(const FineLevel& level);
double lande_gf(double g_j, HalfInt j, HalfInt I, int f);

struct HyperfineHamiltonian {
  FineLevel level;
  HalfInt I;
  double a_hz = 0.0;
  double b_hz = 0.0;
  double g_j = 0.0;

  static HyperfineHamiltonian from(const AtomicDataset& d, const FineLevel& level);
  // Ascending eigenvalues (Hz) of the m-block at field b (T), labelled by f descending in energy rank.
  std::vector<std::pair<int, double>> block(int m, double b_tesla) const;
  double energy(int f, int m, double b_tesla) const;
  // Sum of block eigenvalues.
  double block_trace(int m, double b_tesla) const;
  int f_min() const;
  int f_max() const;
};

struct ZeemanBranch {
  int f = 0;
  int m = 0;
  std::vector<double> energy_hz;
  std::string label() const;
};

struct ZeemanMap {
  HyperfineHamiltonian hamiltonian;
  std::vector<double> b_tesla;
  std::vector<ZeemanBranch> branches;

  const ZeemanBranch& branch(int f, int m) const;
};

ZeemanMap zeeman_map(const AtomicDataset& d, const FineLevel& level, double b_min, double b_max, std::size_t steps);
std::string zeeman_csv(const ZeemanMap& map);

struct StretchedShift {
  double plus_hz = 0.0;
  double minus_hz = 0.0;
};

StretchedShift stretched_shift(double b_tesla, double g_excited = 0.5, double g_ground = 0.25, int m_excited = 6,
                               int m_ground = 4);

struct BranchPair {
  int ground_f = 4;
  int ground_m = 4;
  int excited_f = 6;
  int excited_m = 2;
};

struct MagicField {
  double b_tesla = 0.0;
  double residual_slope_hz_per_t = 0.0;  // central difference on fresh eigenvalues
  double spline_slope_hz_per_t = 0.0;
};

std::vector<MagicField> find_magic_b(const ZeemanMap& ground, const ZeemanMap& excited, const BranchPair& pair,
                                     double b_lo, double b_hi);

}  // namespace csclock
