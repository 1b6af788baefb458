#include "core/stability.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "core/constants.hpp"
#include "core/error.hpp"
#include "json.hpp"

namespace csclock {

void ClockParams::check() const {
  if (!(nu_c > 0.0) || !(tau_a > 0.0) || !(f_s > 0.0) || !(f_m > 0.0))
    fail(ErrorKind::InvalidArgument, "nu_c, tau_a, f_s and f_m must be positive");
  if (atom_number < 0.0) fail(ErrorKind::InvalidArgument, "atom number must be >= 0");
  if (!(eta_col > 0.0) || eta_col > 1.0 || !(eta_det > 0.0) || eta_det > 1.0)
    fail(ErrorKind::InvalidArgument, "efficiencies must lie in (0, 1]");
  if (lo_psd_2fs < 0.0 || lo_psd_2fm < 0.0) fail(ErrorKind::InvalidArgument, "LO noise PSD must be >= 0");
  if (!(saturation > 0.0)) fail(ErrorKind::InvalidArgument, "saturation must be positive");
}

double linewidth(double tau_a, double s) {
  if (!(tau_a > 0.0)) fail(ErrorKind::InvalidArgument, "lifetime must be positive");
  if (s < 0.0) fail(ErrorKind::InvalidArgument, "saturation must be >= 0");
  return std::sqrt(1.0 + s) / (2.0 * kPi * tau_a);
}

DetectionRate detection_rate(const ClockParams& p) {
  p.check();
  DetectionRate r;
  const double s = p.saturation;
  r.ndot = p.eta_col * p.eta_det * p.atom_number * s / (2.0 * (1.0 + s)) / p.tau_a;
  r.photocurrent_a = kPhys.elementary_charge * r.ndot;
  r.snr = std::sqrt(r.ndot / 2.0);
  return r;
}

double qpn_stability(double delta_nu, double nu_c, double ndot) {
  if (!(delta_nu > 0.0) || !(nu_c > 0.0) || !(ndot > 0.0))
    fail(ErrorKind::InvalidArgument, "QPN limit needs positive linewidth, frequency and detection rate");
  return delta_nu / nu_c / std::sqrt(ndot);
}

Intermodulation intermodulation(const ClockParams& p, double delta_nu, double snr) {
  p.check();
  if (!(snr > 0.0) || !(delta_nu > 0.0)) fail(ErrorKind::InvalidArgument, "intermodulation needs positive SNR and linewidth");
  Intermodulation im;
  im.lo_2fs = std::sqrt(p.lo_psd_2fs) / (2.0 * p.nu_c);
  im.lo_2fm = std::sqrt(p.lo_psd_2fm) / (2.0 * p.nu_c);
  im.lo = std::max(im.lo_2fs, im.lo_2fm);
  im.shot = std::sqrt(delta_nu / snr) / (2.0 * p.nu_c);
  return im;
}

StabilityBudget total_budget(const ClockParams& p) {
  StabilityBudget b;
  b.delta_nu = linewidth(p.tau_a, p.saturation);
  const auto r = detection_rate(p);
  b.ndot = r.ndot;
  b.photocurrent_a = r.photocurrent_a;
  b.snr = r.snr;
  b.sigma_qpn = qpn_stability(b.delta_nu, p.nu_c, b.ndot);
  const auto im = intermodulation(p, b.delta_nu, b.snr);
  b.sigma_im_lo = im.lo;
  b.sigma_im_lo_2fs = im.lo_2fs;
  b.sigma_im_lo_2fm = im.lo_2fm;
  b.sigma_im_shot = im.shot;
  b.sigma_total = std::sqrt(b.sigma_qpn * b.sigma_qpn + b.sigma_im_lo * b.sigma_im_lo + b.sigma_im_shot * b.sigma_im_shot);
  return b;
}

std::string budget_json(const StabilityBudget& b) {
  nlohmann::ordered_json j;
  j["delta_nu_hz"] = b.delta_nu;
  j["detection_rate_per_s"] = b.ndot;
  j["photocurrent_a"] = b.photocurrent_a;
  j["snr_per_sqrt_hz"] = b.snr;
  j["sigma_qpn"] = b.sigma_qpn;
  j["sigma_im_lo"] = b.sigma_im_lo;
  j["sigma_im_lo_2fs"] = b.sigma_im_lo_2fs;
  j["sigma_im_lo_2fm"] = b.sigma_im_lo_2fm;
  j["sigma_im_shot"] = b.sigma_im_shot;
  j["sigma_total"] = b.sigma_total;
  return j.dump(2) + "\n";
}

std::string budget_text(const StabilityBudget& b) {
  std::string s;
  s += fmt::format("{:<28}{:>14}\n", "quantity", "value");
  s += fmt::format("{:<28}{:>14.4e}\n", "linewidth [Hz]", b.delta_nu);
  s += fmt::format("{:<28}{:>14.4e}\n", "detection rate [1/s]", b.ndot);
  s += fmt::format("{:<28}{:>14.4e}\n", "photocurrent [A]", b.photocurrent_a);
  s += fmt::format("{:<28}{:>14.4e}\n", "SNR [1/sqrt(Hz)]", b.snr);
  s += fmt::format("{:<28}{:>14.4e}\n", "sigma_QPN [1/sqrt(s)]", b.sigma_qpn);
  s += fmt::format("{:<28}{:>14.4e}\n", "sigma_IM_LO", b.sigma_im_lo);
  s += fmt::format("{:<28}{:>14.4e}\n", "  at 2 f_s", b.sigma_im_lo_2fs);
  s += fmt::format("{:<28}{:>14.4e}\n", "  at 2 f_m", b.sigma_im_lo_2fm);
  s += fmt::format("{:<28}{:>14.4e}\n", "sigma_IM_shot", b.sigma_im_shot);
  s += fmt::format("{:<28}{:>14.4e}\n", "sigma_total [1/sqrt(s)]", b.sigma_total);
  return s;
}

}  // namespace csclock
