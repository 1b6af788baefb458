#pragma once

#include <string>

namespace csclock {

struct ClockParams {
  double nu_c = 4.376e14;
  double tau_a = 1.28e-6;
  double atom_number = 6.6e6;
  double eta_col = 0.2;
  double eta_det = 0.9;
  double lo_psd_2fs = 1.0;  // Hz^2/Hz at twice the switching rate
  double lo_psd_2fm = 1.0;  // Hz^2/Hz at twice the modulation rate
  double f_s = 1e4;
  double f_m = 1e5;
  double saturation = 1.0;

  void check() const;
};

double linewidth(double tau_a, double saturation);

struct DetectionRate {
  double ndot = 0.0;
  double photocurrent_a = 0.0;
  double snr = 0.0;
};

DetectionRate detection_rate(const ClockParams& p);
double qpn_stability(double delta_nu, double nu_c, double ndot);

struct Intermodulation {
  double lo = 0.0;  // larger of the two processes
  double lo_2fs = 0.0;
  double lo_2fm = 0.0;
  double shot = 0.0;
};

Intermodulation intermodulation(const ClockParams& p, double delta_nu, double snr);

struct StabilityBudget {
  double delta_nu = 0.0;
  double ndot = 0.0;
  double photocurrent_a = 0.0;
  double snr = 0.0;
  double sigma_qpn = 0.0;
  double sigma_im_lo = 0.0;
  double sigma_im_lo_2fs = 0.0;
  double sigma_im_lo_2fm = 0.0;
  double sigma_im_shot = 0.0;
  double sigma_total = 0.0;
};

StabilityBudget total_budget(const ClockParams& p);
std::string budget_json(const StabilityBudget& b);
std::string budget_text(const StabilityBudget& b);

}  // namespace csclock
