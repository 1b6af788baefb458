#include "core/systematics.hpp"

#include <charconv>
#include <cmath>

#include <fmt/format.h>

#include "core/constants.hpp"
#include "core/error.hpp"
#include "json.hpp"

namespace csclock {

namespace {

double need(const std::optional<double>& v, const char* name) {
  if (!v) fail(ErrorKind::MissingModelInput, std::string("missing model input '") + name + "'");
  return *v;
}

double parse_quantity(std::string_view text, bool is_time_span) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc()) fail(ErrorKind::InvalidArgument, "bad timing target '" + std::string(text) + "'");
  std::string_view unit = text.substr(static_cast<std::size_t>(p - text.data()));
  if (unit == "s" || unit.empty()) return v;
  if (!is_time_span) {
    if (unit == "ms") return v * 1e-3;
    if (unit == "us") return v * 1e-6;
    if (unit == "ns") return v * 1e-9;
    if (unit == "ps") return v * 1e-12;
  } else {
    if (unit == "min") return v * 60.0;
    if (unit == "h") return v * 3600.0;
    if (unit == "d") return v * kSecondsPerDay;
  }
  fail(ErrorKind::InvalidArgument, "unknown time unit '" + std::string(unit) + "'");
}

}  // namespace

TimingTarget TimingTarget::parse(std::string_view text) {
  auto at = text.find('@');
  if (at == std::string_view::npos) fail(ErrorKind::InvalidArgument, "timing target must look like 1ns@30d");
  TimingTarget t{parse_quantity(text.substr(0, at), false), parse_quantity(text.substr(at + 1), true)};
  t.check();
  return t;
}

void TimingTarget::check() const {
  if (!(dt_s > 0.0) || !(tau_s > 0.0)) fail(ErrorKind::InvalidArgument, "timing target needs dt > 0 and tau > 0");
}

std::vector<BudgetRow> sensitivity_coefficients(const SensitivityInputs& in) {
  const double nu_c = need(in.nu_c, "nu_c");
  const double h = kPhys.planck_h, c = kPhys.c;
  std::vector<BudgetRow> rows;
  auto row = [&](std::string name, double beta, std::string unit) {
    BudgetRow r;
    r.name = std::move(name);
    r.beta = beta;
    r.unit = std::move(unit);
    r.fractional = beta / nu_c;
    rows.push_back(std::move(r));
  };

  // Light shift h dnu = -dalpha I / (2 eps0 c) with dalpha in SI; per 1% of I_sat.
  const double dalpha = need(in.probe_delta_alpha_a3, "probe_delta_alpha_a3");
  const double isat = need(in.probe_saturation_intensity_w_m2, "probe_saturation_intensity_w_m2");
  row("probe beam power", 2.0 * kPi * std::abs(dalpha) * 1e-30 * isat / (c * h) * 0.01, "%");

  const double slope = need(in.magic_slope_a3_per_mhz, "magic_slope_a3_per_mhz");
  const double a0 = need(in.lattice_alpha0_a3, "lattice_alpha0_a3");
  const double temp = need(in.atom_temperature_k, "atom_temperature_k");
  if (a0 == 0.0) fail(ErrorKind::InvalidArgument, "lattice polarizability must be nonzero");
  row("lattice laser frequency", std::abs(slope) / std::abs(a0) * kPhys.kB * temp / h, "MHz");

  row("magnetic field spatial variation", kPhys.bohr_magneton / h * 1e-12, "pT");
  row("dc electric field", need(in.dc_field_beta_hz_per_v_m, "dc_field_beta_hz_per_v_m"), "V/m");
  row("blackbody radiation", need(in.bbr_sensitivity_hz_per_k, "bbr_sensitivity_hz_per_k"), "K");
  return rows;
}

Allocation parse_allocation(std::string_view text) {
  if (text == "full-per-row" || text == "full") return Allocation::FullPerRow;
  if (text == "equal-split" || text == "equal") return Allocation::EqualSplit;
  fail(ErrorKind::InvalidArgument, "unknown allocation policy '" + std::string(text) + "'");
}

std::vector<BudgetRow> requirements(std::vector<BudgetRow> rows, double nu_c, const TimingTarget& target,
                                    Allocation policy) {
  target.check();
  if (!(nu_c > 0.0)) fail(ErrorKind::InvalidArgument, "nu_c must be positive");
  const double dt = policy == Allocation::FullPerRow ? target.dt_s : target.dt_s / static_cast<double>(rows.size());
  for (auto& r : rows) {
    if (r.beta == 0.0) fail(ErrorKind::ZeroSensitivity, "row '" + r.name + "' has zero sensitivity");
    r.requirement = nu_c * dt / (r.beta * target.tau_s);
  }
  return rows;
}

BudgetTotals budget(const std::vector<BudgetRow>& rows, double nu_c) {
  if (!(nu_c > 0.0)) fail(ErrorKind::InvalidArgument, "nu_c must be positive");
  BudgetTotals t;
  double q = 0.0;
  for (const auto& r : rows) {
    if (!r.delta_a) fail(ErrorKind::InvalidArgument, "row '" + r.name + "' has no environment stability");
    const double term = r.beta * *r.delta_a;
    t.linear_hz += term;
    t.worst_case_hz += std::abs(term);
    q += term * term;
  }
  t.quadrature_hz = std::sqrt(q);
  t.fractional_linear = t.linear_hz / nu_c;
  t.fractional_worst_case = t.worst_case_hz / nu_c;
  t.fractional_quadrature = t.quadrature_hz / nu_c;
  return t;
}

double fractional_target(const TimingTarget& t) {
  if (t.dt_s < 0.0 || !(t.tau_s > 0.0)) fail(ErrorKind::InvalidArgument, "timing target needs dt >= 0 and tau > 0");
  return t.dt_s / t.tau_s;
}

double timing_error_s(double delta_nu_hz, double nu_c, double tau_s) { return delta_nu_hz / nu_c * tau_s; }

std::string systematics_csv(const std::vector<BudgetRow>& rows) {
  std::string s = "name,beta,unit,fractional,requirement\n";
  for (const auto& r : rows)
    s += fmt::format("{},{:.6g},{},{:.6g},{}\n", r.name, r.beta, r.unit, r.fractional,
                     r.requirement ? fmt::format("{:.6g}", std::abs(*r.requirement)) : std::string());
  return s;
}

std::string systematics_json(const std::vector<BudgetRow>& rows, const TimingTarget& target, double nu_c) {
  nlohmann::ordered_json j;
  j["nu_c_hz"] = nu_c;
  j["target"] = {{"dt_s", target.dt_s}, {"tau_s", target.tau_s}, {"fractional", fractional_target(target)}};
  auto arr = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json o;
    o["name"] = r.name;
    o["beta"] = r.beta;
    o["unit"] = r.unit;
    o["fractional"] = r.fractional;
    if (r.requirement) o["requirement"] = std::abs(*r.requirement);
    else o["requirement"] = nullptr;
    arr.push_back(o);
  }
  j["rows"] = arr;
  return j.dump(2) + "\n";
}

}  // namespace csclock
