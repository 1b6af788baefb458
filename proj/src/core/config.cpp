#include "core/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include "core/constants.hpp"
#include "core/error.hpp"
#include "core/systematics.hpp"

namespace csclock {

namespace {

using Setter = std::function<void(const YAML::Node&)>;
using Table = std::map<std::string, Setter>;

[[noreturn]] void config_fail(const std::string& msg) { fail(ErrorKind::ConfigError, msg); }

void apply(const YAML::Node& node, const std::string& where, const Table& table) {
  if (!node || node.IsNull()) return;
  if (!node.IsMap()) config_fail("'" + where + "' must be a mapping");
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    auto it = table.find(key);
    const std::string full = where.empty() ? key : where + "." + key;
    if (it == table.end()) config_fail("unknown key '" + full + "'");
    try {
      it->second(kv.second);
    } catch (const YAML::Exception& e) {
      config_fail("invalid value for '" + full + "': " + e.msg);
    } catch (const Error& e) {
      config_fail("invalid value for '" + full + "': " + e.what());
    }
  }
}

Setter d(double& t) {
  return [&t](const YAML::Node& n) { t = n.as<double>(); };
}
Setter od(std::optional<double>& t) {
  return [&t](const YAML::Node& n) {
    if (n.IsNull()) t.reset();
    else t = n.as<double>();
  };
}
Setter i(int& t) {
  return [&t](const YAML::Node& n) { t = n.as<int>(); };
}
Setter b(bool& t) {
  return [&t](const YAML::Node& n) { t = n.as<bool>(); };
}
Setter s(std::string& t) {
  return [&t](const YAML::Node& n) { t = n.as<std::string>(); };
}

void set_override(YAML::Node& root, const std::string& assignment) {
  auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) config_fail("override must look like section.key=value: '" + assignment + "'");
  const std::string path = assignment.substr(0, eq);
  YAML::Node value;
  try {
    value = YAML::Load(assignment.substr(eq + 1));
  } catch (const YAML::Exception& e) {
    config_fail("cannot parse override value in '" + assignment + "': " + e.msg);
  }
  std::vector<std::string> parts;
  std::stringstream ss(path);
  for (std::string p; std::getline(ss, p, '.');) parts.push_back(p);
  if (parts.empty() || parts.size() > 2) config_fail("override key must be 'key' or 'section.key': '" + path + "'");
  if (parts.size() == 1) {
    root[parts[0]] = value;
    return;
  }
  YAML::Node sec = root[parts[0]];
  if (sec.IsNull() || !sec.IsDefined()) {
    YAML::Node m(YAML::NodeType::Map);
    root[parts[0]] = m;
  } else if (!sec.IsMap()) {
    config_fail("'" + parts[0] + "' is not a section");
  }
  root[parts[0]][parts[1]] = value;
}

}  // namespace

bool RunConfig::wants(std::string_view format) const {
  for (const auto& f : output.formats)
    if (f == format) return true;
  return false;
}

std::filesystem::path data_dir() {
  if (const char* env = std::getenv("CSCLOCK_DATA_DIR"); env && *env) return env;
#ifdef CSCLOCK_DATA_DIR
  return CSCLOCK_DATA_DIR;
#else
  return "data";
#endif
}

std::filesystem::path scenario_path(const std::string& name) {
  if (name.empty() || name.find('/') != std::string::npos || name.find("..") != std::string::npos)
    config_fail("invalid scenario name '" + name + "'");
  auto p = data_dir() / "scenarios" / (name + ".yaml");
  if (!std::filesystem::exists(p)) config_fail("unknown scenario '" + name + "'");
  return p;
}

std::filesystem::path resolve_data_path(const std::filesystem::path& p, const std::filesystem::path& base_dir) {
  if (p.empty()) return p;
  if (p.is_absolute()) return p;
  if (!base_dir.empty() && std::filesystem::exists(base_dir / p)) return base_dir / p;
  if (std::filesystem::exists(data_dir() / p)) return data_dir() / p;
  return base_dir.empty() ? p : base_dir / p;
}

RunConfig parse_run_config(const std::string& yaml_text, const std::filesystem::path& base_dir,
                           const std::vector<std::string>& overrides) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    config_fail("cannot parse config: " + e.msg);
  }
  if (root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
  if (!root.IsMap()) config_fail("config root must be a mapping");
  for (const auto& o : overrides) set_override(root, o);

  RunConfig c;
  c.base_dir = base_dir;
  auto& P = c.polarizability;
  auto& Z = c.zeeman;
  auto& L = c.lattice;
  auto& K = c.clock;
  auto& S = c.systematics;
  auto& M = c.simulation;
  auto& R = c.report;
  auto& O = c.output;
  std::string dataset;

  const Table pol{
      {"ground", s(P.ground)}, {"ground_f", i(P.ground_f)}, {"ground_m", i(P.ground_m)},
      {"excited", s(P.excited)}, {"excited_f", i(P.excited_f)}, {"excited_m", i(P.excited_m)},
      {"scan_min_nm", d(P.scan_min_nm)}, {"scan_max_nm", d(P.scan_max_nm)}, {"scan_step_nm", d(P.scan_step_nm)},
      {"wide_min_nm", d(P.wide_min_nm)}, {"wide_max_nm", d(P.wide_max_nm)}, {"wide_step_nm", d(P.wide_step_nm)},
      {"probe_scan_min_nm", d(P.probe_scan_min_nm)}, {"probe_scan_max_nm", d(P.probe_scan_max_nm)},
      {"probe_scan_step_nm", d(P.probe_scan_step_nm)},
      {"magic_min_nm", d(P.magic_min_nm)}, {"magic_max_nm", d(P.magic_max_nm)}, {"magic_step_nm", d(P.magic_step_nm)},
      {"lattice_nm", d(P.lattice_nm)}, {"probe_nm", d(P.probe_nm)},
      {"exclusion_half_width_nm", d(P.exclusion_half_width_nm)},
      {"bbr_ground_300k_hz", d(P.bbr_ground_300k_hz)}, {"bbr_excited_300k_hz", d(P.bbr_excited_300k_hz)},
      {"temperature_k", d(P.temperature_k)},
  };
  const Table zee{
      {"ground", s(Z.ground)}, {"excited", s(Z.excited)}, {"b_min_t", d(Z.b_min_t)}, {"b_max_t", d(Z.b_max_t)},
      {"steps", i(Z.steps)}, {"field_t", d(Z.field_t)}, {"g_excited", d(Z.g_excited)}, {"g_ground", d(Z.g_ground)},
      {"pairs", [&](const YAML::Node& n) {
         Z.pairs.clear();
         for (const auto& p : n) {
           auto v = p.as<std::vector<int>>();
           if (v.size() != 4) config_fail("zeeman.pairs entries need [ground_f, ground_m, excited_f, excited_m]");
           Z.pairs.push_back({v[0], v[1], v[2], v[3]});
         }
       }},
  };
  auto& LC = L.config;
  const Table lat{
      {"period_um", d(LC.period_um)}, {"wavelength_um", d(LC.wavelength_um)}, {"region_um", d(LC.region_um)},
      {"power_w", d(LC.power_w)}, {"axial_power_w", d(LC.axial_power_w)}, {"buildup", d(LC.buildup)},
      {"fill", d(LC.fill)}, {"probe_wavelength_nm", d(LC.probe_wavelength_nm)}, {"bright", b(LC.bright)},
      {"polarizability_a3", od(L.polarizability_a3)}, {"spectrum_span_hz", d(L.spectrum_span_hz)},
      {"spectrum_points", i(L.spectrum_points)}, {"depumping_saturation", d(L.depumping_saturation)},
      {"depumping_branching", d(L.depumping_branching)},
  };
  auto& CP = K.params;
  const Table clk{
      {"nu_c_hz", d(CP.nu_c)}, {"tau_a_s", d(CP.tau_a)}, {"atom_number", od(K.atom_number)},
      {"eta_col", d(CP.eta_col)}, {"eta_det", d(CP.eta_det)}, {"lo_psd_2fs", d(CP.lo_psd_2fs)},
      {"lo_psd_2fm", d(CP.lo_psd_2fm)}, {"f_s_hz", d(CP.f_s)}, {"f_m_hz", d(CP.f_m)}, {"saturation", d(CP.saturation)},
  };
  const Table sys{
      {"target", s(S.target)}, {"allocation", s(S.allocation)},
      {"probe_delta_alpha_a3", od(S.probe_delta_alpha_a3)},
      {"probe_saturation_intensity_w_m2", d(S.probe_saturation_intensity_w_m2)},
      {"magic_slope_a3_per_mhz", od(S.magic_slope_a3_per_mhz)}, {"lattice_alpha0_a3", od(S.lattice_alpha0_a3)},
      {"atom_temperature_k", d(S.atom_temperature_k)}, {"dc_field_beta_hz_per_v_m", d(S.dc_field_beta_hz_per_v_m)},
  };
  auto& SC = M.sim;
  const Table simt{
      {"f_s_hz", od(M.f_s_hz)}, {"f_m_hz", od(M.f_m_hz)},
      {"detection_rate_per_s", od(SC.detection_rate_per_s)}, {"linewidth_hz", od(SC.linewidth_hz)},
      {"servo_gain", d(SC.servo_gain)}, {"lo_psd", d(SC.lo_psd)}, {"lo_knee_hz", d(SC.lo_knee_hz)},
      {"lo_floor_psd", d(SC.lo_floor_psd)}, {"bias_b_t", d(SC.bias_b_t)},
      {"b_model", [&](const YAML::Node& n) {
         const auto v = n.as<std::string>();
         if (v == "white") SC.b_model = MagneticModel::White;
         else if (v == "random-walk") SC.b_model = MagneticModel::RandomWalk;
         else config_fail("simulation.b_model must be 'white' or 'random-walk'");
       }},
      {"b_amplitude", d(SC.b_amplitude)}, {"zeeman_hz_per_t", od(SC.zeeman_hz_per_t)},
      {"alternate", b(SC.alternate)}, {"shot_noise", b(SC.shot_noise)},
      {"initial_detuning_hz", d(SC.initial_detuning_hz)}, {"duty", d(SC.duty)}, {"duration_s", d(SC.duration_s)},
      {"time_step_s", d(SC.time_step_s)}, {"record_interval_s", d(SC.record_interval_s)},
      {"seed", [&](const YAML::Node& n) { SC.seed = n.as<std::uint64_t>(); }},
      {"seeds", i(M.seeds)}, {"taus", [&](const YAML::Node& n) { M.taus = n.as<std::vector<double>>(); }},
  };
  const Table rep{
      {"sections", [&](const YAML::Node& n) { R.sections = n.as<std::vector<std::string>>(); }},
      {"reference_scenario", [&](const YAML::Node& n) {
         if (n.IsNull()) R.reference_scenario.reset();
         else R.reference_scenario = n.as<std::string>();
       }},
  };
  const Table out{
      {"directory", [&](const YAML::Node& n) { O.directory = n.as<std::string>(); }},
      {"formats", [&](const YAML::Node& n) {
         O.formats = n.IsSequence() ? n.as<std::vector<std::string>>() : std::vector<std::string>{n.as<std::string>()};
       }},
  };
  const Table top{
      {"scenario", s(c.scenario)},
      {"description", s(c.description)},
      {"dataset", s(dataset)},
      {"polarizability", [&](const YAML::Node& n) { apply(n, "polarizability", pol); }},
      {"zeeman", [&](const YAML::Node& n) { apply(n, "zeeman", zee); }},
      {"lattice", [&](const YAML::Node& n) { apply(n, "lattice", lat); }},
      {"clock", [&](const YAML::Node& n) { apply(n, "clock", clk); }},
      {"systematics", [&](const YAML::Node& n) { apply(n, "systematics", sys); }},
      {"simulation", [&](const YAML::Node& n) { apply(n, "simulation", simt); }},
      {"report", [&](const YAML::Node& n) { apply(n, "report", rep); }},
      {"output", [&](const YAML::Node& n) { apply(n, "output", out); }},
  };
  apply(root, "", top);
  if (dataset.empty()) config_fail("missing key 'dataset'");
  c.dataset = resolve_data_path(dataset, base_dir);
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) config_fail("cannot open config '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str(), path.parent_path(), overrides);
}

RunConfig load_scenario(const std::string& name, const std::vector<std::string>& overrides) {
  return load_run_config(scenario_path(name), overrides);
}

SimConfig RunConfig::sim_config() const {
  SimConfig s = simulation.sim;
  s.clock = clock.params;
  if (clock.atom_number) s.clock.atom_number = *clock.atom_number;
  if (simulation.f_s_hz) s.clock.f_s = *simulation.f_s_hz;
  if (simulation.f_m_hz) s.clock.f_m = *simulation.f_m_hz;
  return s;
}

void RunConfig::validate() const {
  auto check = [](bool ok, const std::string& msg) {
    if (!ok) config_fail(msg);
  };
  auto guard = [](const char* what, auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      config_fail(std::string(what) + ": " + e.what());
    }
  };
  check(std::filesystem::exists(dataset), "dataset '" + dataset.string() + "' does not exist");
  for (const auto& f : output.formats)
    check(f == "csv" || f == "json" || f == "text", "output.formats: unknown format '" + f + "'");
  check(!output.formats.empty(), "output.formats must not be empty");

  const auto& P = polarizability;
  guard("polarizability", [&] {
    FineLevel::parse(P.ground);
    FineLevel::parse(P.excited);
    FineLevel::parse(zeeman.ground);
    FineLevel::parse(zeeman.excited);
  });
  check(P.scan_step_nm > 0 && P.scan_max_nm > P.scan_min_nm && P.scan_min_nm > 0, "polarizability scan window is empty");
  check(P.wide_step_nm > 0 && P.wide_max_nm > P.wide_min_nm && P.wide_min_nm > 0, "polarizability wide window is empty");
  check(P.probe_scan_step_nm > 0 && P.probe_scan_max_nm > P.probe_scan_min_nm && P.probe_scan_min_nm > 0,
        "polarizability probe window is empty");
  check(P.magic_step_nm > 0 && P.magic_max_nm > P.magic_min_nm && P.magic_min_nm > 0, "magic window is empty");
  check(P.lattice_nm > 0 && P.probe_nm > 0, "wavelengths must be positive");
  check(P.exclusion_half_width_nm >= 0, "exclusion half-width must be >= 0");
  check(P.temperature_k >= 0, "polarizability.temperature_k must be >= 0");
  check(std::abs(P.ground_m) <= P.ground_f && std::abs(P.excited_m) <= P.excited_f, "|m| must not exceed f");

  check(zeeman.steps >= 4, "zeeman.steps must be >= 4");
  check(zeeman.b_max_t > zeeman.b_min_t, "zeeman B window is empty");
  check(zeeman.field_t >= 0, "zeeman.field_t must be >= 0");
  for (const auto& p : zeeman.pairs)
    check(std::abs(p.ground_m) <= p.ground_f && std::abs(p.excited_m) <= p.excited_f, "zeeman.pairs: |m| exceeds f");

  guard("lattice", [&] {
    LatticeConfig lc = lattice.config;
    lc.mass_kg = kPhys.cs_mass;
    lc.check();
  });
  check(lattice.config.buildup > 0, "lattice.buildup must be positive");
  check(lattice.spectrum_points >= 2 && lattice.spectrum_span_hz > 0, "lattice spectrum needs span > 0 and >= 2 points");
  check(lattice.depumping_saturation > 0 && lattice.depumping_branching >= 0, "depumping parameters out of range");

  guard("clock", [&] {
    ClockParams p = clock.params;
    if (clock.atom_number) p.atom_number = *clock.atom_number;
    p.check();
  });
  guard("systematics", [&] {
    TimingTarget::parse(systematics.target);
    parse_allocation(systematics.allocation);
  });
  check(systematics.probe_saturation_intensity_w_m2 > 0, "systematics.probe_saturation_intensity_w_m2 must be positive");
  check(systematics.atom_temperature_k >= 0, "systematics.atom_temperature_k must be >= 0");

  guard("simulation", [&] { sim_config().check(); });
  check(simulation.seeds >= 1, "simulation.seeds must be >= 1");
  for (double t : simulation.taus) check(t > 0, "simulation.taus must be positive");
  {
    const SimConfig s = sim_config();
    const auto cycles = std::llround(s.duration_s * s.clock.f_s);
    const auto per_record = std::max(1LL, std::llround(s.record_interval_s * s.clock.f_s));
    const auto records = cycles / per_record;
    const double rec = static_cast<double>(per_record) / s.clock.f_s;
    for (double t : simulation.taus) {
      const auto m = std::max(1LL, std::llround(t / rec));
      check(2 * m <= records, fmt::format("simulation.taus: tau = {} s needs a trace of at least {} s", t, 2.0 * m * rec));
    }
  }

  for (const auto& s : report.sections)
    check(s == "polarizability" || s == "zeeman" || s == "lattice" || s == "stability" || s == "systematics" ||
              s == "simulation" || s == "comparison",
          "report.sections: unknown section '" + s + "'");
  if (report.reference_scenario) guard("report", [&] { scenario_path(*report.reference_scenario); });
}

}  // namespace csclock
