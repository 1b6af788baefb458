#include "core/polarizability.hpp"

#include <cmath>
#include <map>

#include <fmt/format.h>

#include "core/angular.hpp"
#include "core/constants.hpp"
#include "core/error.hpp"

namespace csclock {

namespace {

double photon_energy_au(double wavelength_nm) { return 1e7 / (wavelength_nm * kPhys.hartree_per_cm); }

std::vector<double> grid(const MagicWindow& w) {
  if (!(w.step_nm > 0.0) || !(w.max_nm > w.min_nm) || !(w.min_nm > 0.0))
    fail(ErrorKind::EmptyWindow, fmt::format("empty wavelength window [{}, {}] step {}", w.min_nm, w.max_nm, w.step_nm));
  const auto n = static_cast<std::size_t>(std::floor((w.max_nm - w.min_nm) / w.step_nm + 1e-9));
  std::vector<double> out;
  out.reserve(n + 1);
  for (std::size_t i = 0; i <= n; ++i) out.push_back(w.min_nm + static_cast<double>(i) * w.step_nm);
  return out;
}

bool near_resonance(const std::vector<double>& res, double wl, double half_width) {
  for (double r : res)
    if (std::abs(wl - r) < half_width) return true;
  return false;
}

bool resonance_between(const std::vector<double>& res, double a, double b) {
  for (double r : res)
    if (r >= a && r <= b) return true;
  return false;
}

}  // namespace

PolarizabilityRecord dynamic_polarizability(const AtomicDataset& d, const FineLevel& level,
                                            std::optional<double> wavelength_nm, const PolarizabilityOptions& opt) {
  if (d.transitions.empty()) fail(ErrorKind::EmptyDataset, "dataset has no transitions");
  if (wavelength_nm && !(*wavelength_nm > 0.0))
    fail(ErrorKind::InvalidArgument, "wavelength must be positive");
  const double omega = wavelength_nm ? photon_energy_au(*wavelength_nm) : 0.0;
  const HalfInt J = level.j;
  const double j = J.value();
  const HalfInt one = HalfInt::integer(1), two = HalfInt::integer(2);
  const double C = std::sqrt(5.0 * j * (2 * j - 1) / (6.0 * (j + 1) * (2 * j + 1) * (2 * j + 3)));

  std::map<int, double> sixj;
  double s0 = 0.0, s2 = 0.0;
  bool found = false;
  for (const auto& t : d.transitions) {
    const bool is_lower = t.lower == level;
    if (!is_lower && t.upper != level) continue;
    found = true;
    const double wl_t = t.wavelength_nm();
    if (wavelength_nm && std::abs(*wavelength_nm - wl_t) < opt.exclusion_half_width_nm)
      fail(ErrorKind::TooCloseToResonance,
           fmt::format("{} nm is within {} nm of {} -> {} at {} nm", *wavelength_nm, opt.exclusion_half_width_nm,
                       t.lower.label(), t.upper.label(), wl_t));
    const double dE = (is_lower ? 1.0 : -1.0) * photon_energy_au(wl_t);
    const double term = dE * t.reduced_dipole_au * t.reduced_dipole_au / (dE * dE - omega * omega);
    s0 += term;
    if (J.twice >= 2) {
      const HalfInt Jp = is_lower ? t.upper.j : t.lower.j;
      auto it = sixj.find(Jp.twice);
      if (it == sixj.end()) it = sixj.emplace(Jp.twice, wigner6j(J, one, Jp, one, J, two).approx()).first;
      const int phase = (J.twice + Jp.twice + 2) / 2;
      s2 += ((phase % 2) ? -1.0 : 1.0) * it->second * term;
    }
  }
  if (!found) fail(ErrorKind::UnknownLevel, "no transitions involve " + level.label());

  PolarizabilityRecord r;
  r.level = level;
  r.wavelength_nm = wavelength_nm;
  double a0 = 2.0 / (3.0 * (2 * j + 1)) * s0;
  if (level == clock_ground_level(d.species)) {
    a0 += d.core_polarizability.bohr3();
    r.core_included = true;
  }
  r.alpha0 = Polarizability::bohr3(a0);
  r.alpha2 = J.twice >= 2 ? Polarizability::bohr3(-4.0 * C * s2) : Polarizability();
  return r;
}

double tensor_recoupling_factor(HalfInt J, HalfInt I, int f) {
  if (J.twice < 2 || f < 1) return 0.0;
  const double j = J.value(), i = I.value();
  const double K = f * (f + 1.0) + j * (j + 1) - i * (i + 1);
  return (3.0 * K * (K - 1) - 4.0 * f * (f + 1.0) * j * (j + 1)) /
         ((2.0 * f + 3) * (2.0 * f + 2) * j * (2 * j - 1));
}

HyperfinePolarizability hyperfine_polarizability(const PolarizabilityRecord& rec, HalfInt I, int f, int m) {
  if (!f_allowed(rec.level.j, I, f))
    fail(ErrorKind::InvalidF, fmt::format("f={} not allowed for {} with I={}", f, rec.level.label(), I.str()));
  if (std::abs(m) > f) fail(ErrorKind::InvalidM, fmt::format("|m|={} exceeds f={}", std::abs(m), f));
  HyperfinePolarizability h;
  h.f = f;
  h.m = m;
  h.wavelength_nm = rec.wavelength_nm;
  h.alpha = rec.alpha0;
  if (f >= 1 && rec.level.j.twice >= 2) {
    const double a2f = tensor_recoupling_factor(rec.level.j, I, f);
    const double w = (3.0 * m * m - f * (f + 1.0)) / (f * (2.0 * f - 1.0));
    h.alpha = rec.alpha0 + rec.alpha2 * (w * a2f);
  }
  return h;
}

double differential_polarizability(const AtomicDataset& d, const HyperfineState& ground, const HyperfineState& excited,
                                   double wavelength_nm, const PolarizabilityOptions& opt) {
  auto one = [&](const HyperfineState& s) {
    auto rec = dynamic_polarizability(d, s.level, wavelength_nm, opt);
    return hyperfine_polarizability(rec, d.nuclear_spin, s.f, s.m).alpha.angstrom3();
  };
  return one(excited) - one(ground);
}

std::vector<double> resonance_wavelengths_nm(const AtomicDataset& d, const FineLevel& level) {
  std::vector<double> out;
  for (const auto& t : d.transitions)
    if (t.lower == level || t.upper == level) out.push_back(t.wavelength_nm());
  return out;
}

std::vector<MagicPoint> find_magic_wavelengths(const AtomicDataset& d, const HyperfineState& ground,
                                               const HyperfineState& excited, const MagicWindow& window,
                                               const PolarizabilityOptions& opt) {
  auto res = resonance_wavelengths_nm(d, ground.level);
  for (double r : resonance_wavelengths_nm(d, excited.level)) res.push_back(r);
  const double hw = opt.exclusion_half_width_nm;
  auto delta = [&](double wl) { return differential_polarizability(d, ground, excited, wl, opt); };

  std::vector<std::pair<double, double>> pts;
  for (double wl : grid(window))
    if (!near_resonance(res, wl, hw)) pts.push_back({wl, delta(wl)});
  if (pts.empty()) fail(ErrorKind::EmptyWindow, "every grid point lies inside a resonance exclusion zone");

  std::vector<MagicPoint> out;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    auto [a, fa] = pts[i];
    auto [b, fb] = pts[i + 1];
    if (resonance_between(res, a, b)) continue;
    if (fa == 0.0 && i > 0) continue;  // reported as the right end of the previous interval
    if (fa * fb > 0.0) continue;
    MagicPoint mp;
    mp.bracket_lo_nm = a;
    mp.bracket_hi_nm = b;
    double lo = a, hi = b, flo = fa, mid = a, fm = fa;
    if (fb == 0.0) {
      mid = b;
      fm = 0.0;
    } else if (fa != 0.0) {
      for (int it = 0; it < 200; ++it) {
        mid = 0.5 * (lo + hi);
        fm = delta(mid);
        if ((std::abs(fm) < 1e-6 && hi - lo < 1e-9) || fm == 0.0 || hi - lo < 1e-13) break;
        if ((fm < 0.0) == (flo < 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
    }
    mp.wavelength_nm = mid;
    mp.residual_a3 = fm;
    const double c = kPhys.c;
    const double nu = c / (mid * 1e-9);
    const double dnu = 100e6;
    const double wp = c / (nu + dnu) * 1e9, wm = c / (nu - dnu) * 1e9;
    mp.slope_a3_per_mhz = (delta(wp) - delta(wm)) / (2.0 * dnu / 1e6);
    out.push_back(mp);
  }
  return out;
}

std::vector<ScanRow> polarizability_scan(const AtomicDataset& d, const HyperfineState& ground,
                                         const HyperfineState& excited, const MagicWindow& window,
                                         const PolarizabilityOptions& opt) {
  auto res = resonance_wavelengths_nm(d, ground.level);
  for (double r : resonance_wavelengths_nm(d, excited.level)) res.push_back(r);
  std::vector<ScanRow> rows;
  for (double wl : grid(window)) {
    if (near_resonance(res, wl, opt.exclusion_half_width_nm)) continue;
    auto g = dynamic_polarizability(d, ground.level, wl, opt);
    auto e = dynamic_polarizability(d, excited.level, wl, opt);
    const double ag = hyperfine_polarizability(g, d.nuclear_spin, ground.f, ground.m).alpha.angstrom3();
    const double ae = hyperfine_polarizability(e, d.nuclear_spin, excited.f, excited.m).alpha.angstrom3();
    rows.push_back({wl, g.alpha0.angstrom3(), e.alpha0.angstrom3(), e.alpha2.angstrom3(), ae - ag});
  }
  return rows;
}

std::string scan_csv(const std::vector<ScanRow>& rows) {
  std::string s = "wavelength_nm,alpha0_ground,alpha0_excited,alpha2_excited,delta_alpha\n";
  for (const auto& r : rows)
    s += fmt::format("{:.4f},{:.6e},{:.6e},{:.6e},{:.6e}\n", r.wavelength_nm, r.alpha0_ground, r.alpha0_excited,
                     r.alpha2_excited, r.delta_alpha);
  return s;
}

BbrShift bbr_shift(double ground_shift_300k_hz, double excited_shift_300k_hz, double temperature_k) {
  if (temperature_k < 0.0) fail(ErrorKind::NegativeTemperature, fmt::format("temperature {} K < 0", temperature_k));
  const double d300 = excited_shift_300k_hz - ground_shift_300k_hz;
  const double x = temperature_k / 300.0;
  return {d300 * x * x * x * x, 4.0 * d300 * x * x * x / 300.0};
}

}  // namespace csclock
