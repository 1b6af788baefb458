#include "core/commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include <fmt/format.h>

#include "core/allan.hpp"
#include "core/constants.hpp"
#include "core/error.hpp"
#include "core/locksim.hpp"
#include "json.hpp"

namespace csclock {

using ojson = nlohmann::ordered_json;

namespace {

std::string dump(const ojson& j) { return j.dump(2) + "\n"; }

HyperfineState ground_state(const RunConfig& c) {
  const auto& P = c.polarizability;
  return {FineLevel::parse(P.ground), P.ground_f, P.ground_m};
}

HyperfineState excited_state(const RunConfig& c) {
  const auto& P = c.polarizability;
  return {FineLevel::parse(P.excited), P.excited_f, P.excited_m};
}

PolarizabilityOptions pol_options(const RunConfig& c) { return {c.polarizability.exclusion_half_width_nm}; }

ojson magic_json(const MagicPoint& m) {
  return {{"wavelength_nm", m.wavelength_nm},
          {"slope_a3_per_mhz", m.slope_a3_per_mhz},
          {"bracket_lo_nm", m.bracket_lo_nm},
          {"bracket_hi_nm", m.bracket_hi_nm},
          {"residual_a3", m.residual_a3}};
}

std::string magic_csv(const std::vector<MagicPoint>& pts) {
  std::string s = "wavelength_nm,slope_a3_per_mhz,bracket_lo_nm,bracket_hi_nm,residual_a3\n";
  for (const auto& m : pts)
    s += fmt::format("{:.9f},{:.6e},{:.9f},{:.9f},{:.3e}\n", m.wavelength_nm, m.slope_a3_per_mhz, m.bracket_lo_nm,
                     m.bracket_hi_nm, m.residual_a3);
  return s;
}

// alpha(f, m) for the ground state and every excited m >= 0 across a window.
std::string resolved_scan_csv(const AtomicDataset& d, const RunConfig& c) {
  const auto g = ground_state(c), e = excited_state(c);
  const auto& P = c.polarizability;
  const auto opt = pol_options(c);
  std::string s = fmt::format("wavelength_nm,ground_f{}_m{}", g.f, g.m);
  for (int m = 0; m <= e.f; ++m) s += fmt::format(",excited_f{}_m{}", e.f, m);
  s += "\n";
  const auto n = static_cast<long>(std::floor((P.scan_max_nm - P.scan_min_nm) / P.scan_step_nm + 1e-9));
  for (long k = 0; k <= n; ++k) {
    const double wl = P.scan_min_nm + static_cast<double>(k) * P.scan_step_nm;
    try {
      const auto rg = dynamic_polarizability(d, g.level, wl, opt);
      const auto re = dynamic_polarizability(d, e.level, wl, opt);
      s += fmt::format("{:.4f},{:.6f}", wl, hyperfine_polarizability(rg, d.nuclear_spin, g.f, g.m).alpha.angstrom3());
      for (int m = 0; m <= e.f; ++m)
        s += fmt::format(",{:.6f}", hyperfine_polarizability(re, d.nuclear_spin, e.f, m).alpha.angstrom3());
      s += "\n";
    } catch (const Error& err) {
      if (err.kind() != ErrorKind::TooCloseToResonance) throw;
    }
  }
  return s;
}

std::string scan_window(const AtomicDataset& d, const RunConfig& c, double lo, double hi, double step) {
  return scan_csv(polarizability_scan(d, ground_state(c), excited_state(c), {lo, hi, step}, pol_options(c)));
}

ojson anchors_json(const PolarizabilityAnchors& a, const RunConfig& c) {
  ojson j;
  j["lattice_wavelength_nm"] = c.polarizability.lattice_nm;
  j["alpha0_ground_lattice_a3"] = a.alpha0_ground_lattice_a3;
  j["alpha0_ground_static_a3"] = a.alpha0_ground_static_a3;
  j["alpha0_excited_lattice_a3"] = a.alpha0_excited_lattice_a3;
  j["alpha2_excited_lattice_a3"] = a.alpha2_excited_lattice_a3;
  j["probe_wavelength_nm"] = c.polarizability.probe_nm;
  j["delta_alpha_probe_a3"] = a.delta_alpha_probe_a3;
  ojson m = ojson::array();
  for (const auto& p : a.magic) m.push_back(magic_json(p));
  j["magic"] = m;
  j["tensor_spread"] = a.tensor_spread ? ojson(*a.tensor_spread) : ojson(nullptr);
  j["bbr_temperature_k"] = c.polarizability.temperature_k;
  j["bbr_shift_hz"] = a.bbr.shift_hz;
  j["bbr_sensitivity_hz_per_k"] = a.bbr.sensitivity_hz_per_k;
  return j;
}

std::string anchors_text(const PolarizabilityAnchors& a, const RunConfig& c) {
  std::string s;
  s += fmt::format("alpha0 ground at {} nm: {:.2f} A^3\n", c.polarizability.lattice_nm, a.alpha0_ground_lattice_a3);
  s += fmt::format("alpha0 ground static: {:.2f} A^3\n", a.alpha0_ground_static_a3);
  s += fmt::format("alpha0 excited at {} nm: {:.2f} A^3\n", c.polarizability.lattice_nm, a.alpha0_excited_lattice_a3);
  s += fmt::format("alpha2 excited at {} nm: {:.2f} A^3\n", c.polarizability.lattice_nm, a.alpha2_excited_lattice_a3);
  s += fmt::format("delta alpha at {} nm: {:.2f} A^3\n", c.polarizability.probe_nm, a.delta_alpha_probe_a3);
  for (const auto& m : a.magic)
    s += fmt::format("magic wavelength: {:.4f} nm (slope {:.3e} A^3/MHz)\n", m.wavelength_nm, m.slope_a3_per_mhz);
  if (a.tensor_spread) s += fmt::format("tensor spread at magic: {:.4f}\n", *a.tensor_spread);
  s += fmt::format("BBR shift at {} K: {:.4f} Hz ({:.4f} Hz/K)\n", c.polarizability.temperature_k, a.bbr.shift_hz,
                   a.bbr.sensitivity_hz_per_k);
  return s;
}

ojson zeeman_json(const ZeemanSummary& z, const RunConfig& c) {
  ojson j;
  j["delta65_hz"] = z.delta65_hz;
  j["field_t"] = c.zeeman.field_t;
  j["stretched_plus_hz"] = z.stretched.plus_hz;
  j["stretched_minus_hz"] = z.stretched.minus_hz;
  ojson pairs = ojson::array();
  for (const auto& p : z.magic_b) {
    ojson roots = ojson::array();
    for (const auto& r : p.roots)
      roots.push_back({{"b_tesla", r.b_tesla},
                       {"residual_slope_hz_per_t", r.residual_slope_hz_per_t},
                       {"spline_slope_hz_per_t", r.spline_slope_hz_per_t}});
    pairs.push_back({{"ground_f", p.pair.ground_f},
                     {"ground_m", p.pair.ground_m},
                     {"excited_f", p.pair.excited_f},
                     {"excited_m", p.pair.excited_m},
                     {"roots", roots}});
  }
  j["magic_b"] = pairs;
  return j;
}

std::string zeeman_text(const ZeemanSummary& z, const RunConfig& c) {
  std::string s = fmt::format("excited f=6/f=5 splitting: {:.4f} MHz\n", z.delta65_hz / 1e6);
  s += fmt::format("stretched shift at {:.3e} T: {:+.3f} / {:+.3f} Hz\n", c.zeeman.field_t, z.stretched.plus_hz,
                   z.stretched.minus_hz);
  for (const auto& p : z.magic_b) {
    s += fmt::format("magic B |{},{}> -> |{},{}>:", p.pair.ground_f, p.pair.ground_m, p.pair.excited_f,
                     p.pair.excited_m);
    if (p.roots.empty()) s += " none";
    for (const auto& r : p.roots) s += fmt::format(" {:.6e} T", r.b_tesla);
    s += "\n";
  }
  return s;
}

ojson lattice_json(const LatticeSummary& l) {
  const auto& m = l.metrics;
  return {{"polarizability_a3", l.config.polarizability_a3},
          {"talbot_um", m.talbot_um},
          {"sites", m.sites},
          {"atoms", m.atoms},
          {"depth_uk", m.depth_uk},
          {"recoil_uk", m.recoil_uk},
          {"depth_recoil", m.depth_recoil},
          {"nu_vib_mhz", m.nu_vib_mhz},
          {"lamb_dicke", m.lamb_dicke},
          {"relative_sideband", m.relative_sideband},
          {"paraxial", m.paraxial},
          {"depumping_ratio", l.depumping.ratio},
          {"depumping_rate_per_s", l.depumping.rate_per_s}};
}

std::string lattice_text(const LatticeSummary& l) {
  const auto& m = l.metrics;
  std::string s;
  s += fmt::format("Talbot length: {:.4f} um\n", m.talbot_um);
  s += fmt::format("sites: {:.4e}\natoms: {:.4e}\n", m.sites, m.atoms);
  s += fmt::format("trap depth: {:.3f} uK ({:.1f} recoil)\n", m.depth_uk, m.depth_recoil);
  s += fmt::format("axial vibrational frequency: {:.4f} MHz\n", m.nu_vib_mhz);
  s += fmt::format("Lamb-Dicke parameter: {:.4f}\n", m.lamb_dicke);
  s += fmt::format("relative sideband: {:.4e}\n", m.relative_sideband);
  s += fmt::format("depumping ratio: {:.4e}, rate {:.4e} 1/s\n", l.depumping.ratio, l.depumping.rate_per_s);
  if (!m.paraxial) s += "warning: lattice period below lambda/2, Talbot formula outside paraxial regime\n";
  return s;
}

ojson systematics_extra(const SystematicsResult& r) {
  ojson in;
  const auto& I = r.inputs;
  const std::vector<std::pair<const char*, std::optional<double>>> vals{
      {"probe_delta_alpha_a3", I.probe_delta_alpha_a3},
      {"probe_saturation_intensity_w_m2", I.probe_saturation_intensity_w_m2},
      {"magic_slope_a3_per_mhz", I.magic_slope_a3_per_mhz},
      {"lattice_alpha0_a3", I.lattice_alpha0_a3},
      {"atom_temperature_k", I.atom_temperature_k},
      {"dc_field_beta_hz_per_v_m", I.dc_field_beta_hz_per_v_m},
      {"bbr_sensitivity_hz_per_k", I.bbr_sensitivity_hz_per_k}};
  for (std::size_t k = 0; k < vals.size(); ++k)
    in[vals[k].first] = {{"value", *vals[k].second}, {"origin", r.input_origin[k]}};
  ojson j;
  j["inputs"] = in;
  j["model_magic_slope_a3_per_mhz"] =
      r.model_magic_slope_a3_per_mhz ? ojson(*r.model_magic_slope_a3_per_mhz) : ojson(nullptr);
  return j;
}

std::string systematics_text(const SystematicsResult& r) {
  std::string s = fmt::format("target: {:.3e} s over {:.3e} s (fractional {:.4e})\n", r.target.dt_s, r.target.tau_s,
                              r.fractional_target);
  for (const auto& row : r.rows)
    s += fmt::format("{:<34} beta {:>11.4e} Hz/{:<4} fractional {:>11.4e}  requirement {:.4g} {}\n", row.name,
                     row.beta, row.unit, row.fractional, std::abs(*row.requirement), row.unit);
  return s;
}

std::vector<double> default_taus(const SimConfig& s) {
  const auto n = static_cast<std::size_t>(std::floor(s.duration_s / s.record_interval_s + 1e-9));
  return octave_taus(n, s.record_interval_s);
}

struct SimOutcome {
  CampaignResult campaign;
  std::optional<SimTrace> trace;
  double analytic = 0.0;
  double slope = 0.0;
};

SimOutcome run_sim(const RunConfig& c, const CommandOptions& opt) {
  SimConfig s = c.sim_config();
  if (opt.seed) s.seed = *opt.seed;
  s.check();
  const auto taus = c.simulation.taus.empty() ? default_taus(s) : c.simulation.taus;
  SimOutcome o;
  o.campaign = run_campaign(s, static_cast<std::size_t>(c.simulation.seeds), s.seed, taus, opt.threads);
  if (c.simulation.seeds == 1) {
    SimConfig one = s;
    one.seed = o.campaign.seeds.front();
    o.trace = simulate(one);
  }
  o.analytic = analytic_shot_noise_sigma(s);
  if (o.campaign.tau.size() >= 2) o.slope = fit_loglog_slope(o.campaign.tau, o.campaign.mean_sigma);
  return o;
}

ojson sim_json(const SimOutcome& o) {
  ojson j;
  ojson seeds = ojson::array();
  for (auto s : o.campaign.seeds) seeds.push_back(s);
  j["seeds"] = seeds;
  j["analytic_sigma_1s"] = o.analytic;
  j["loglog_slope"] = o.slope;
  ojson rows = ojson::array();
  for (std::size_t k = 0; k < o.campaign.tau.size(); ++k)
    rows.push_back({{"tau_s", o.campaign.tau[k]},
                    {"mean_sigma", o.campaign.mean_sigma[k]},
                    {"spread", o.campaign.spread[k]},
                    {"analytic", o.analytic / std::sqrt(o.campaign.tau[k])}});
  j["adev"] = rows;
  ojson means = ojson::array();
  for (double m : o.campaign.per_seed_mean_y) means.push_back(m);
  j["mean_y_per_seed"] = means;
  return j;
}

std::string sim_text(const SimOutcome& o) {
  std::string s = fmt::format("seeds: {}\nanalytic shot-noise sigma(1 s): {:.4e}\nlog-log slope: {:.4f}\n",
                              o.campaign.seeds.size(), o.analytic, o.slope);
  for (std::size_t k = 0; k < o.campaign.tau.size(); ++k)
    s += fmt::format("tau {:>10.4g} s  sigma {:.4e} +/- {:.2e}  analytic {:.4e}\n", o.campaign.tau[k],
                     o.campaign.mean_sigma[k], o.campaign.spread[k], o.analytic / std::sqrt(o.campaign.tau[k]));
  return s;
}

ojson budget_obj(const StabilityBudget& b) { return ojson::parse(budget_json(b)); }

std::vector<Artifact> filter(std::vector<Artifact> all, const RunConfig& c) {
  std::vector<Artifact> out;
  for (auto& a : all)
    if (c.wants(a.format)) out.push_back(std::move(a));
  return out;
}

bool has_section(const RunConfig& c, const char* name) {
  for (const auto& s : c.report.sections)
    if (s == name) return true;
  return false;
}

std::string fmt_sci(double v, int digits = 3) { return fmt::format("{:.{}e}", v, digits); }

std::vector<Artifact> report(const AtomicDataset& d, const RunConfig& c, const CommandOptions& opt) {
  std::vector<Artifact> out;
  ojson j;
  j["scenario"] = c.scenario;
  std::string md = fmt::format("# {} clock report: {}\n\n", species_name(d.species), c.scenario);
  if (!c.description.empty()) md += c.description + "\n\n";

  const ClockParams cp = clock_params(c);
  const StabilityBudget sb = total_budget(cp);

  if (has_section(c, "stability")) {
    j["stability"] = budget_obj(sb);
    md += "## Short-term stability\n\n";
    md += "| quantity | value |\n|---|---|\n";
    md += fmt::format("| linewidth | {:.4e} Hz |\n", sb.delta_nu);
    md += fmt::format("| detection rate | {:.4e} 1/s |\n", sb.ndot);
    md += fmt::format("| photocurrent | {:.4e} A |\n", sb.photocurrent_a);
    md += fmt::format("| SNR in 1 Hz | {:.4e} |\n", sb.snr);
    md += fmt::format("| sigma_QPN | {} |\n", fmt_sci(sb.sigma_qpn));
    md += fmt::format("| sigma_IM (LO, 2 f_s) | {} |\n", fmt_sci(sb.sigma_im_lo_2fs));
    md += fmt::format("| sigma_IM (LO, 2 f_m) | {} |\n", fmt_sci(sb.sigma_im_lo_2fm));
    md += fmt::format("| sigma_IM (shot) | {} |\n", fmt_sci(sb.sigma_im_shot));
    md += fmt::format("| sigma_total | {} |\n\n", fmt_sci(sb.sigma_total));
    md += "All values are Allan deviations at 1 s; they scale as 1/sqrt(tau).\n\n";
  }

  if (has_section(c, "comparison") && c.report.reference_scenario) {
    const RunConfig ref = load_scenario(*c.report.reference_scenario);
    ref.validate();
    const StabilityBudget rb = total_budget(clock_params(ref));
    const double ratio_qpn = sb.sigma_qpn / rb.sigma_qpn;
    const double ratio_total = sb.sigma_total / rb.sigma_total;
    j["comparison"] = {{"reference_scenario", *c.report.reference_scenario},
                       {"reference_sigma_qpn", rb.sigma_qpn},
                       {"reference_sigma_total", rb.sigma_total},
                       {"ratio_qpn", ratio_qpn},
                       {"ratio_total", ratio_total}};
    md += fmt::format("## Comparison with {}\n\n", *c.report.reference_scenario);
    md += fmt::format("| quantity | this | reference | ratio |\n|---|---|---|---|\n");
    md += fmt::format("| sigma_QPN | {} | {} | {:.3f} |\n", fmt_sci(sb.sigma_qpn), fmt_sci(rb.sigma_qpn), ratio_qpn);
    md += fmt::format("| sigma_total | {} | {} | {:.3f} |\n\n", fmt_sci(sb.sigma_total), fmt_sci(rb.sigma_total),
                      ratio_total);
  }

  if (has_section(c, "polarizability")) {
    const auto a = polarizability_anchors(d, c);
    j["polarizability"] = anchors_json(a, c);
    md += "## Polarizability\n\n";
    md += fmt::format("| quantity | value |\n|---|---|\n");
    md += fmt::format("| alpha0 {} at {} nm | {:.2f} A^3 |\n", c.polarizability.ground, c.polarizability.lattice_nm,
                      a.alpha0_ground_lattice_a3);
    md += fmt::format("| alpha0 {} static | {:.2f} A^3 |\n", c.polarizability.ground, a.alpha0_ground_static_a3);
    md += fmt::format("| alpha0 {} at {} nm | {:.2f} A^3 |\n", c.polarizability.excited, c.polarizability.lattice_nm,
                      a.alpha0_excited_lattice_a3);
    md += fmt::format("| alpha2 {} at {} nm | {:.2f} A^3 |\n", c.polarizability.excited, c.polarizability.lattice_nm,
                      a.alpha2_excited_lattice_a3);
    md += fmt::format("| delta alpha at {} nm | {:.2f} A^3 |\n", c.polarizability.probe_nm, a.delta_alpha_probe_a3);
    for (const auto& m : a.magic)
      md += fmt::format("| magic wavelength | {:.4f} nm, slope {:.3e} A^3/MHz |\n", m.wavelength_nm,
                        m.slope_a3_per_mhz);
    if (a.tensor_spread) md += fmt::format("| tensor spread at magic | {:.4f} |\n", *a.tensor_spread);
    md += fmt::format("| BBR shift at {} K | {:.4f} Hz |\n\n", c.polarizability.temperature_k, a.bbr.shift_hz);
    md += "Curves: `fig4_polarizability.csv` (wide scan), `fig5_zeeman_resolved.csv` (excited f=6 substates), "
          "`probe_delta_alpha.csv` (near the probe wavelength).\n\n";
    out.push_back({"fig4_polarizability.csv", "csv",
                   scan_window(d, c, c.polarizability.wide_min_nm, c.polarizability.wide_max_nm,
                               c.polarizability.wide_step_nm)});
    out.push_back({"fig5_zeeman_resolved.csv", "csv", resolved_scan_csv(d, c)});
    out.push_back({"probe_delta_alpha.csv", "csv",
                   scan_window(d, c, c.polarizability.probe_scan_min_nm, c.polarizability.probe_scan_max_nm,
                               c.polarizability.probe_scan_step_nm)});
  }

  if (has_section(c, "zeeman")) {
    const auto z = zeeman_summary(d, c);
    j["zeeman"] = zeeman_json(z, c);
    md += "## Zeeman structure\n\n";
    md += fmt::format("- excited f=6/f=5 splitting: {:.3f} MHz\n", z.delta65_hz / 1e6);
    md += fmt::format("- stretched-state shift at {:.1e} T: {:+.2f} Hz / {:+.2f} Hz\n", c.zeeman.field_t,
                      z.stretched.plus_hz, z.stretched.minus_hz);
    for (const auto& p : z.magic_b) {
      md += fmt::format("- magic field |{},{}> -> |{},{}>:", p.pair.ground_f, p.pair.ground_m, p.pair.excited_f,
                        p.pair.excited_m);
      if (p.roots.empty()) md += " none in window";
      for (const auto& r : p.roots) md += fmt::format(" {:.4e} T", r.b_tesla);
      md += "\n";
    }
    md += "\n";
  }

  if (has_section(c, "lattice")) {
    const auto l = lattice_summary(d, c);
    j["lattice"] = lattice_json(l);
    const auto& m = l.metrics;
    md += "## Lattice\n\n| quantity | value |\n|---|---|\n";
    md += fmt::format("| Talbot length | {:.4f} um |\n", m.talbot_um);
    md += fmt::format("| sites | {:.3e} |\n", m.sites);
    md += fmt::format("| atoms | {:.3e} |\n", m.atoms);
    md += fmt::format("| trap depth | {:.2f} uK ({:.0f} recoil) |\n", m.depth_uk, m.depth_recoil);
    md += fmt::format("| axial vibrational frequency | {:.4f} MHz |\n", m.nu_vib_mhz);
    md += fmt::format("| Lamb-Dicke parameter | {:.4f} |\n", m.lamb_dicke);
    md += fmt::format("| relative sideband | {:.3e} |\n", m.relative_sideband);
    md += fmt::format("| depumping ratio | {:.3e} |\n\n", l.depumping.ratio);
    md += "Sideband spectrum: `fig3_sidebands.csv`.\n\n";
    LatticeConfig lc = l.config;
    out.push_back({"fig3_sidebands.csv", "csv",
                   spectrum_csv(axial_sidebands(lc, c.lattice.spectrum_span_hz,
                                                static_cast<std::size_t>(c.lattice.spectrum_points))
                                    .spectrum)});
  }

  if (has_section(c, "systematics")) {
    const auto r = systematics_result(d, c, opt);
    j["systematics"] = ojson::parse(systematics_json(r.rows, r.target, cp.nu_c));
    j["systematics_model"] = systematics_extra(r);
    md += "## Systematic error budget\n\n";
    md += fmt::format("Timing target {:.3g} s over {:.3g} s: fractional {:.3e}.\n\n", r.target.dt_s, r.target.tau_s,
                      r.fractional_target);
    md += "| effect | beta | fractional | requirement |\n|---|---|---|---|\n";
    for (const auto& row : r.rows)
      md += fmt::format("| {} | {:.3e} Hz/{} | {:.3e} /{} | {:.4g} {} |\n", row.name, row.beta, row.unit,
                        row.fractional, row.unit, std::abs(*row.requirement), row.unit);
    md += "\n";
    out.push_back({"table1_systematics.csv", "csv", systematics_csv(r.rows)});
  }

  if (has_section(c, "simulation")) {
    const auto o = run_sim(c, opt);
    j["simulation"] = sim_json(o);
    md += "## Lock simulation\n\n";
    md += fmt::format("Analytic shot-noise sigma(1 s) {:.4e}; fitted log-log slope {:.3f}.\n\n", o.analytic, o.slope);
    out.push_back({"simulation_adev.csv", "csv", campaign_csv(o.campaign)});
  }

  out.insert(out.begin(), {"report.json", "json", dump(j)});
  auto kept = filter(std::move(out), c);
  kept.insert(kept.begin(), {"report.md", "text", md});
  return kept;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"polarizability scan", "magic find",        "zeeman map",
                                              "lattice design",      "stability budget",  "systematics table",
                                              "simulate",            "report"};
  return names;
}

ClockParams clock_params(const RunConfig& c) {
  ClockParams p = c.clock.params;
  if (c.clock.atom_number) {
    p.atom_number = *c.clock.atom_number;
  } else {
    p.atom_number = lattice_geometry(c.lattice.config).atoms;
  }
  return p;
}

PolarizabilityAnchors polarizability_anchors(const AtomicDataset& d, const RunConfig& c) {
  const auto g = ground_state(c), e = excited_state(c);
  const auto opt = pol_options(c);
  const auto& P = c.polarizability;
  PolarizabilityAnchors a;
  a.alpha0_ground_lattice_a3 = dynamic_polarizability(d, g.level, P.lattice_nm, opt).alpha0.angstrom3();
  a.alpha0_ground_static_a3 = dynamic_polarizability(d, g.level, std::nullopt, opt).alpha0.angstrom3();
  const auto re = dynamic_polarizability(d, e.level, P.lattice_nm, opt);
  a.alpha0_excited_lattice_a3 = re.alpha0.angstrom3();
  a.alpha2_excited_lattice_a3 = re.alpha2.angstrom3();
  a.delta_alpha_probe_a3 = differential_polarizability(d, g, e, P.probe_nm, opt);
  a.magic = find_magic_wavelengths(d, g, e, {P.magic_min_nm, P.magic_max_nm, P.magic_step_nm}, opt);
  if (!a.magic.empty()) {
    const auto rm = dynamic_polarizability(d, e.level, a.magic.front().wavelength_nm, opt);
    const double a_top = hyperfine_polarizability(rm, d.nuclear_spin, e.f, e.m).alpha.angstrom3();
    const double a_zero = hyperfine_polarizability(rm, d.nuclear_spin, e.f, 0).alpha.angstrom3();
    if (a_zero != 0.0) a.tensor_spread = std::abs((a_top - a_zero) / a_zero);
  }
  a.bbr = bbr_shift(P.bbr_ground_300k_hz, P.bbr_excited_300k_hz, P.temperature_k);
  return a;
}

ZeemanSummary zeeman_summary(const AtomicDataset& d, const RunConfig& c, ZeemanMap* ground_out,
                             ZeemanMap* excited_out) {
  const auto& Z = c.zeeman;
  const FineLevel gl = FineLevel::parse(Z.ground), el = FineLevel::parse(Z.excited);
  const auto steps = static_cast<std::size_t>(Z.steps);
  ZeemanMap gm = zeeman_map(d, gl, Z.b_min_t, Z.b_max_t, steps);
  ZeemanMap em = zeeman_map(d, el, Z.b_min_t, Z.b_max_t, steps);
  ZeemanSummary s;
  const auto& H = em.hamiltonian;
  const int fmax = H.f_max();
  s.delta65_hz = std::abs(hyperfine_energy_hz(H.a_hz, H.b_hz, H.I, H.level.j, fmax) -
                          hyperfine_energy_hz(H.a_hz, H.b_hz, H.I, H.level.j, fmax - 1));
  s.stretched = stretched_shift(Z.field_t, Z.g_excited, Z.g_ground, fmax, gm.hamiltonian.f_max());
  for (const auto& p : Z.pairs) s.magic_b.push_back({p, find_magic_b(gm, em, p, Z.b_min_t, Z.b_max_t)});
  if (ground_out) *ground_out = std::move(gm);
  if (excited_out) *excited_out = std::move(em);
  return s;
}

LatticeSummary lattice_summary(const AtomicDataset& d, const RunConfig& c) {
  LatticeSummary l;
  l.config = c.lattice.config;
  l.config.mass_kg = mass_of(d.species);
  const FineLevel gl = FineLevel::parse(c.polarizability.ground);
  l.config.polarizability_a3 =
      c.lattice.polarizability_a3
          ? *c.lattice.polarizability_a3
          : dynamic_polarizability(d, gl, l.config.wavelength_um * 1e3, pol_options(c)).alpha0.angstrom3();
  const ClockParams cp = clock_params(c);
  l.config.saturated_linewidth_hz = linewidth(cp.tau_a, cp.saturation);
  l.metrics = lattice_design(l.config);

  const FineLevel el = FineLevel::parse(c.polarizability.excited);
  const auto H = HyperfineHamiltonian::from(d, el);
  const int fmax = H.f_max();
  const double split = std::abs(hyperfine_energy_hz(H.a_hz, H.b_hz, H.I, H.level.j, fmax) -
                                hyperfine_energy_hz(H.a_hz, H.b_hz, H.I, H.level.j, fmax - 1));
  l.delta65_rad_s = 2.0 * kPi * split;
  const auto* life = d.lifetime_for(el);
  l.gamma_rad_s = 1.0 / (life ? life->tau_s : cp.tau_a);
  l.depumping = depumping(c.lattice.depumping_saturation, l.delta65_rad_s, l.gamma_rad_s, c.lattice.depumping_branching);
  return l;
}

SystematicsResult systematics_result(const AtomicDataset& d, const RunConfig& c, const CommandOptions& opt) {
  const auto& S = c.systematics;
  SystematicsResult r;
  r.target = TimingTarget::parse(opt.target ? *opt.target : S.target);
  const auto policy = parse_allocation(opt.allocation ? *opt.allocation : S.allocation);
  const auto g = ground_state(c), e = excited_state(c);
  const auto po = pol_options(c);
  const auto& P = c.polarizability;
  const ClockParams cp = clock_params(c);

  auto& in = r.inputs;
  in.nu_c = cp.nu_c;
  auto pick = [&](std::optional<double>& slot, const std::optional<double>& cfg, auto&& compute) {
    if (cfg) {
      slot = *cfg;
      r.input_origin.push_back("config");
    } else {
      slot = compute();
      r.input_origin.push_back("dataset");
    }
  };
  pick(in.probe_delta_alpha_a3, S.probe_delta_alpha_a3,
       [&] { return differential_polarizability(d, g, e, P.probe_nm, po); });
  in.probe_saturation_intensity_w_m2 = S.probe_saturation_intensity_w_m2;
  r.input_origin.push_back("config");

  std::optional<double> model_slope;
  auto model = [&]() -> double {
    if (!model_slope) {
      const auto m = find_magic_wavelengths(d, g, e, {P.magic_min_nm, P.magic_max_nm, P.magic_step_nm}, po);
      if (m.empty()) fail(ErrorKind::MissingModelInput, "no magic wavelength in window to derive the lattice slope");
      model_slope = m.front().slope_a3_per_mhz;
    }
    return *model_slope;
  };
  pick(in.magic_slope_a3_per_mhz, S.magic_slope_a3_per_mhz, model);
  pick(in.lattice_alpha0_a3, S.lattice_alpha0_a3,
       [&] { return dynamic_polarizability(d, g.level, P.lattice_nm, po).alpha0.angstrom3(); });
  in.atom_temperature_k = S.atom_temperature_k;
  r.input_origin.push_back("config");
  in.dc_field_beta_hz_per_v_m = S.dc_field_beta_hz_per_v_m;
  r.input_origin.push_back("config");
  in.bbr_sensitivity_hz_per_k = bbr_shift(P.bbr_ground_300k_hz, P.bbr_excited_300k_hz, P.temperature_k).sensitivity_hz_per_k;
  r.input_origin.push_back("config");

  try {
    model();
  } catch (const Error&) {
  }
  r.model_magic_slope_a3_per_mhz = model_slope;
  r.rows = requirements(sensitivity_coefficients(in), cp.nu_c, r.target, policy);
  r.fractional_target = fractional_target(r.target);
  return r;
}

std::vector<Artifact> run_command(const std::string& command, const RunConfig& c, const CommandOptions& opt) {
  bool known = false;
  for (const auto& n : command_names()) known = known || n == command;
  if (!known) fail(ErrorKind::UsageError, "unknown command '" + command + "'");
  c.validate();
  if (opt.target) {
    try {
      TimingTarget::parse(*opt.target);
    } catch (const Error& e) {
      fail(ErrorKind::ConfigError, std::string("--target: ") + e.what());
    }
  }
  if (opt.allocation) {
    try {
      parse_allocation(*opt.allocation);
    } catch (const Error& e) {
      fail(ErrorKind::ConfigError, std::string("--allocation: ") + e.what());
    }
  }

  if (command == "stability budget") {
    const auto b = total_budget(clock_params(c));
    return filter({{"stability.json", "json", budget_json(b)}, {"stability.txt", "text", budget_text(b)}}, c);
  }
  if (command == "simulate") {
    const auto o = run_sim(c, opt);
    std::vector<Artifact> a{{"simulation_adev.csv", "csv", campaign_csv(o.campaign)},
                            {"simulation.json", "json", dump(sim_json(o))},
                            {"simulation.txt", "text", sim_text(o)}};
    if (o.trace) a.push_back({"simulation_trace.csv", "csv", trace_csv(*o.trace)});
    return filter(std::move(a), c);
  }

  const AtomicDataset d = load_dataset(c.dataset);

  if (command == "polarizability scan") {
    const auto& P = c.polarizability;
    const auto a = polarizability_anchors(d, c);
    return filter({{"polarizability_scan.csv", "csv", scan_window(d, c, P.scan_min_nm, P.scan_max_nm, P.scan_step_nm)},
                   {"polarizability_wide.csv", "csv", scan_window(d, c, P.wide_min_nm, P.wide_max_nm, P.wide_step_nm)},
                   {"polarizability_resolved.csv", "csv", resolved_scan_csv(d, c)},
                   {"polarizability_probe.csv", "csv",
                    scan_window(d, c, P.probe_scan_min_nm, P.probe_scan_max_nm, P.probe_scan_step_nm)},
                   {"polarizability.json", "json", dump(anchors_json(a, c))},
                   {"polarizability.txt", "text", anchors_text(a, c)}},
                  c);
  }
  if (command == "magic find") {
    const auto& P = c.polarizability;
    const auto m = find_magic_wavelengths(d, ground_state(c), excited_state(c),
                                          {P.magic_min_nm, P.magic_max_nm, P.magic_step_nm}, pol_options(c));
    ojson arr = ojson::array();
    std::string txt;
    for (const auto& p : m) {
      arr.push_back(magic_json(p));
      txt += fmt::format("{:.6f} nm  slope {:.4e} A^3/MHz\n", p.wavelength_nm, p.slope_a3_per_mhz);
    }
    if (m.empty()) txt = "no magic wavelength in window\n";
    return filter({{"magic.csv", "csv", magic_csv(m)},
                   {"magic.json", "json", dump(ojson{{"magic", arr}})},
                   {"magic.txt", "text", txt}},
                  c);
  }
  if (command == "zeeman map") {
    ZeemanMap gm, em;
    const auto z = zeeman_summary(d, c, &gm, &em);
    return filter({{"zeeman_ground.csv", "csv", zeeman_csv(gm)},
                   {"zeeman_excited.csv", "csv", zeeman_csv(em)},
                   {"zeeman.json", "json", dump(zeeman_json(z, c))},
                   {"zeeman.txt", "text", zeeman_text(z, c)}},
                  c);
  }
  if (command == "lattice design") {
    const auto l = lattice_summary(d, c);
    const auto sb =
        axial_sidebands(l.config, c.lattice.spectrum_span_hz, static_cast<std::size_t>(c.lattice.spectrum_points));
    return filter({{"lattice_spectrum.csv", "csv", spectrum_csv(sb.spectrum)},
                   {"lattice.json", "json", dump(lattice_json(l))},
                   {"lattice.txt", "text", lattice_text(l)}},
                  c);
  }
  if (command == "systematics table") {
    const auto r = systematics_result(d, c, opt);
    ojson j = ojson::parse(systematics_json(r.rows, r.target, clock_params(c).nu_c));
    j["model"] = systematics_extra(r);
    return filter({{"systematics.csv", "csv", systematics_csv(r.rows)},
                   {"systematics.json", "json", dump(j)},
                   {"systematics.txt", "text", systematics_text(r)}},
                  c);
  }
  // report.md is emitted whatever the format selection.
  return report(d, c, opt);
}

std::vector<std::string> write_artifacts(const std::vector<Artifact>& a, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrorKind::ConfigError, "cannot create output directory '" + dir + "': " + ec.message());
  std::vector<std::string> paths;
  for (const auto& x : a) {
    const auto p = std::filesystem::path(dir) / x.name;
    std::ofstream out(p, std::ios::binary);
    if (!out) fail(ErrorKind::ConfigError, "cannot write '" + p.string() + "'");
    out << x.content;
    paths.push_back(p.string());
  }
  return paths;
}

}  // namespace csclock
