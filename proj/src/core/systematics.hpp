#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace csclock {

struct BudgetRow {
  std::string name;
  double beta = 0.0;  // Hz per unit
  std::string unit;
  double fractional = 0.0;
  std::optional<double> delta_a;
  std::optional<double> requirement;  // signed: nu_c dt_i / (beta tau)
};

struct TimingTarget {
  double dt_s = 1e-9;
  double tau_s = 30.0 * 86400.0;

  // "1ns@30d"; units s ms us ns ps and s min h d.
  static TimingTarget parse(std::string_view text);
  void check() const;
};

struct SensitivityInputs {
  std::optional<double> nu_c;
  std::optional<double> probe_delta_alpha_a3;
  std::optional<double> probe_saturation_intensity_w_m2;
  std::optional<double> magic_slope_a3_per_mhz;
  std::optional<double> lattice_alpha0_a3;
  std::optional<double> atom_temperature_k;
  std::optional<double> dc_field_beta_hz_per_v_m;
  std::optional<double> bbr_sensitivity_hz_per_k;
};

// Five rows: probe power, lattice frequency, magnetic field, dc field, blackbody.
std::vector<BudgetRow> sensitivity_coefficients(const SensitivityInputs& in);

enum class Allocation { FullPerRow, EqualSplit };
Allocation parse_allocation(std::string_view text);

std::vector<BudgetRow> requirements(std::vector<BudgetRow> rows, double nu_c, const TimingTarget& target,
                                    Allocation policy = Allocation::FullPerRow);

struct BudgetTotals {
  double linear_hz = 0.0;
  double worst_case_hz = 0.0;
  double quadrature_hz = 0.0;
  double fractional_linear = 0.0;
  double fractional_worst_case = 0.0;
  double fractional_quadrature = 0.0;
};

BudgetTotals budget(const std::vector<BudgetRow>& rows, double nu_c);
double fractional_target(const TimingTarget& t);
double timing_error_s(double delta_nu_hz, double nu_c, double tau_s);

std::string systematics_csv(const std::vector<BudgetRow>& rows);
std::string systematics_json(const std::vector<BudgetRow>& rows, const TimingTarget& target, double nu_c);

}  // namespace csclock
