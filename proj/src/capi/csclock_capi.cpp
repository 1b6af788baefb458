#include "csclock/csclock.h"

#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "core/allan.hpp"
#include "core/angular.hpp"
#include "core/commands.hpp"
#include "core/config.hpp"
#include "core/dataset.hpp"
#include "core/error.hpp"
#include "core/lattice.hpp"
#include "core/polarizability.hpp"
#include "core/stability.hpp"
#include "core/systematics.hpp"
#include "core/units.hpp"
#include "core/zeeman.hpp"

struct csclock_dataset {
  csclock::AtomicDataset d;
};

struct csclock_session {
  std::string yaml;
  std::string base_dir;
  std::vector<std::string> overrides;
  csclock::RunConfig cfg;
  std::string output_dir;
};

struct csclock_artifacts {
  std::vector<csclock::Artifact> items;
};

namespace {

thread_local std::string g_error;
thread_local std::string g_kind;

csclock_status status_for(csclock::ErrorKind k) {
  using K = csclock::ErrorKind;
  switch (k) {
    case K::MissingFile: return CSCLOCK_IO;
    case K::ParseError:
    case K::DuplicateTransition:
    case K::MissingLifetime:
    case K::EmptyDataset: return CSCLOCK_PARSE;
    case K::ConfigError: return CSCLOCK_CONFIG;
    case K::UsageError: return CSCLOCK_USAGE;
    case K::UnknownUnit:
    case K::UnknownLevel:
    case K::InvalidQuantumNumbers:
    case K::InvalidF:
    case K::InvalidM:
    case K::InvalidArgument: return CSCLOCK_INVALID_ARGUMENT;
    default: return CSCLOCK_COMPUTE;
  }
}

csclock_status record(csclock_status s, std::string kind, std::string msg) {
  g_kind = std::move(kind);
  g_error = std::move(msg);
  return s;
}

template <class F>
csclock_status guard(F&& f) {
  try {
    f();
    return CSCLOCK_OK;
  } catch (const csclock::Error& e) {
    return record(status_for(e.kind()), csclock::to_string(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return record(CSCLOCK_INTERNAL, "Internal", "out of memory");
  } catch (const std::exception& e) {
    return record(CSCLOCK_INTERNAL, "Internal", e.what());
  } catch (...) {
    return record(CSCLOCK_INTERNAL, "Internal", "unknown exception");
  }
}

void need(const void* p, const char* what) {
  if (!p) csclock::fail(csclock::ErrorKind::InvalidArgument, std::string(what) + " must not be null");
}

std::optional<double> wl(double v) {
  if (v <= 0.0) return std::nullopt;
  return v;
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void reparse(csclock_session& s) {
  s.cfg = csclock::parse_run_config(s.yaml, s.base_dir, s.overrides);
  s.output_dir = s.cfg.output.directory.string();
}

csclock_status make_session(std::string yaml, std::string base, csclock_session** out) {
  return guard([&] {
    need(out, "out");
    auto s = std::make_unique<csclock_session>();
    s->yaml = std::move(yaml);
    s->base_dir = std::move(base);
    reparse(*s);
    *out = s.release();
  });
}

std::string read_file(const std::filesystem::path& p, csclock::ErrorKind kind) {
  std::ifstream in(p, std::ios::binary);
  if (!in) csclock::fail(kind, "cannot open '" + p.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

extern "C" {

const char* csclock_last_error(void) { return g_error.c_str(); }
const char* csclock_last_error_kind(void) { return g_kind.c_str(); }

const char* csclock_status_name(csclock_status s) {
  switch (s) {
    case CSCLOCK_OK: return "ok";
    case CSCLOCK_INVALID_ARGUMENT: return "invalid-argument";
    case CSCLOCK_IO: return "io";
    case CSCLOCK_PARSE: return "parse";
    case CSCLOCK_CONFIG: return "config";
    case CSCLOCK_COMPUTE: return "compute";
    case CSCLOCK_USAGE: return "usage";
    case CSCLOCK_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* csclock_version(void) { return "0.1.0"; }

void csclock_string_free(char* s) { std::free(s); }

csclock_status csclock_dataset_load(const char* path, csclock_dataset** out) {
  return guard([&] {
    need(path, "path");
    need(out, "out");
    *out = new csclock_dataset{csclock::load_dataset(path)};
  });
}

csclock_status csclock_dataset_parse(const char* text, csclock_dataset** out) {
  return guard([&] {
    need(text, "text");
    need(out, "out");
    std::string_view t(text);
    auto first = t.find_first_not_of(" \t\r\n");
    auto d = (first != std::string_view::npos && t[first] == '{') ? csclock::parse_dataset_json(t)
                                                                  : csclock::parse_dataset_text(t);
    auto rep = csclock::validate_dataset(d);
    auto errs = rep.errors();
    if (!errs.empty()) {
      const auto& e = errs.front();
      if (e.code == "MissingLifetime") csclock::fail(csclock::ErrorKind::MissingLifetime, e.message);
      if (e.code == "EmptyDataset") csclock::fail(csclock::ErrorKind::EmptyDataset, e.message);
      if (e.code == "DuplicateTransition") csclock::fail(csclock::ErrorKind::DuplicateTransition, e.message);
      csclock::fail(csclock::ErrorKind::ParseError, e.message);
    }
    *out = new csclock_dataset{std::move(d)};
  });
}

void csclock_dataset_free(csclock_dataset* d) { delete d; }

csclock_status csclock_dataset_validate_text(const char* text, char** report_json) {
  return guard([&] {
    need(text, "text");
    need(report_json, "report_json");
    std::string_view t(text);
    auto first = t.find_first_not_of(" \t\r\n");
    auto d = (first != std::string_view::npos && t[first] == '{') ? csclock::parse_dataset_json(t)
                                                                  : csclock::parse_dataset_text(t);
    const auto rep = csclock::validate_dataset(d);
    std::string s = std::string("{\"usable\":") + (rep.usable() ? "true" : "false") + ",\"issues\":[";
    bool firsti = true;
    for (const auto& i : rep.issues) {
      const char* sev = i.severity == csclock::Severity::Error     ? "error"
                        : i.severity == csclock::Severity::Warning ? "warning"
                                                                   : "note";
      std::string msg;
      for (char c : i.message) {
        if (c == '"' || c == '\\') msg += '\\';
        msg += c;
      }
      s += (firsti ? "" : ",") + std::string("{\"severity\":\"") + sev + "\",\"code\":\"" + i.code +
           "\",\"message\":\"" + msg + "\"}";
      firsti = false;
    }
    s += "]}";
    *report_json = dup(s);
  });
}

size_t csclock_dataset_transition_count(const csclock_dataset* d) { return d ? d->d.transitions.size() : 0; }

csclock_status csclock_dynamic_polarizability(const csclock_dataset* d, const char* level, double wavelength_nm,
                                              double* alpha0_a3, double* alpha2_a3) {
  return guard([&] {
    need(d, "dataset");
    need(level, "level");
    auto r = csclock::dynamic_polarizability(d->d, csclock::FineLevel::parse(level), wl(wavelength_nm));
    if (alpha0_a3) *alpha0_a3 = r.alpha0.angstrom3();
    if (alpha2_a3) *alpha2_a3 = r.alpha2.angstrom3();
  });
}

csclock_status csclock_hyperfine_polarizability(const csclock_dataset* d, const char* level, double wavelength_nm,
                                                int f, int m, double* alpha_a3) {
  return guard([&] {
    need(d, "dataset");
    need(level, "level");
    need(alpha_a3, "alpha_a3");
    auto r = csclock::dynamic_polarizability(d->d, csclock::FineLevel::parse(level), wl(wavelength_nm));
    *alpha_a3 = csclock::hyperfine_polarizability(r, d->d.nuclear_spin, f, m).alpha.angstrom3();
  });
}

csclock_status csclock_differential_polarizability(const csclock_dataset* d, const char* ground, int gf, int gm,
                                                   const char* excited, int ef, int em, double wavelength_nm,
                                                   double* delta_a3) {
  return guard([&] {
    need(d, "dataset");
    need(ground, "ground");
    need(excited, "excited");
    need(delta_a3, "delta_a3");
    *delta_a3 = csclock::differential_polarizability(d->d, {csclock::FineLevel::parse(ground), gf, gm},
                                                     {csclock::FineLevel::parse(excited), ef, em}, wavelength_nm);
  });
}

csclock_status csclock_find_magic(const csclock_dataset* d, const char* ground, int gf, int gm, const char* excited,
                                  int ef, int em, double min_nm, double max_nm, double step_nm, double* wavelength_nm,
                                  double* slope, size_t capacity, size_t* count) {
  return guard([&] {
    need(d, "dataset");
    need(ground, "ground");
    need(excited, "excited");
    need(count, "count");
    auto pts = csclock::find_magic_wavelengths(d->d, {csclock::FineLevel::parse(ground), gf, gm},
                                               {csclock::FineLevel::parse(excited), ef, em},
                                               {min_nm, max_nm, step_nm});
    *count = pts.size();
    for (size_t i = 0; i < pts.size() && i < capacity; ++i) {
      if (wavelength_nm) wavelength_nm[i] = pts[i].wavelength_nm;
      if (slope) slope[i] = pts[i].slope_a3_per_mhz;
    }
  });
}

csclock_status csclock_zeeman_energy(const csclock_dataset* d, const char* level, int f, int m, double b_tesla,
                                     double* energy_hz) {
  return guard([&] {
    need(d, "dataset");
    need(level, "level");
    need(energy_hz, "energy_hz");
    auto h = csclock::HyperfineHamiltonian::from(d->d, csclock::FineLevel::parse(level));
    *energy_hz = h.energy(f, m, b_tesla);
  });
}

csclock_status csclock_hyperfine_energy(double a_hz, double b_hz, int twice_i, int twice_j, int f, double* energy_hz) {
  return guard([&] {
    need(energy_hz, "energy_hz");
    if (twice_i < 0 || twice_j < 0) csclock::fail(csclock::ErrorKind::InvalidQuantumNumbers, "negative angular momentum");
    *energy_hz = csclock::hyperfine_energy_hz(a_hz, b_hz, csclock::HalfInt::from_twice(twice_i),
                                              csclock::HalfInt::from_twice(twice_j), f);
  });
}

csclock_status csclock_wigner3j(int tj1, int tj2, int tj3, int tm1, int tm2, int tm3, double* out) {
  return guard([&] {
    need(out, "out");
    using csclock::HalfInt;
    *out = csclock::wigner3j(HalfInt::from_twice(tj1), HalfInt::from_twice(tj2), HalfInt::from_twice(tj3),
                             HalfInt::from_twice(tm1), HalfInt::from_twice(tm2), HalfInt::from_twice(tm3))
               .approx();
  });
}

csclock_status csclock_wigner6j(int tj1, int tj2, int tj3, int tj4, int tj5, int tj6, double* out) {
  return guard([&] {
    need(out, "out");
    using csclock::HalfInt;
    *out = csclock::wigner6j(HalfInt::from_twice(tj1), HalfInt::from_twice(tj2), HalfInt::from_twice(tj3),
                             HalfInt::from_twice(tj4), HalfInt::from_twice(tj5), HalfInt::from_twice(tj6))
               .approx();
  });
}

csclock_status csclock_convert_polarizability(double value, const char* from, const char* to, double* out) {
  return guard([&] {
    need(from, "from");
    need(to, "to");
    need(out, "out");
    *out = csclock::convert_polarizability(value, std::string_view(from), std::string_view(to));
  });
}

csclock_status csclock_stretched_shift(double b_tesla, double* plus_hz, double* minus_hz) {
  return guard([&] {
    auto s = csclock::stretched_shift(b_tesla);
    if (plus_hz) *plus_hz = s.plus_hz;
    if (minus_hz) *minus_hz = s.minus_hz;
  });
}

csclock_status csclock_talbot_length(double wavelength_um, double period_um, double* out_um) {
  return guard([&] {
    need(out_um, "out_um");
    *out_um = csclock::talbot_length_um(wavelength_um, period_um);
  });
}

csclock_status csclock_bbr_shift(double g, double e, double t, double* shift_hz, double* sens) {
  return guard([&] {
    auto b = csclock::bbr_shift(g, e, t);
    if (shift_hz) *shift_hz = b.shift_hz;
    if (sens) *sens = b.sensitivity_hz_per_k;
  });
}

csclock_status csclock_fractional_target(const char* target, double* out) {
  return guard([&] {
    need(target, "target");
    need(out, "out");
    *out = csclock::fractional_target(csclock::TimingTarget::parse(target));
  });
}

void csclock_clock_params_default(csclock_clock_params* p) {
  if (!p) return;
  const csclock::ClockParams c;
  *p = {c.nu_c, c.tau_a, c.atom_number, c.eta_col, c.eta_det, c.lo_psd_2fs, c.lo_psd_2fm, c.f_s, c.f_m, c.saturation};
}

csclock_status csclock_stability_budget_compute(const csclock_clock_params* p, csclock_stability_budget* out) {
  return guard([&] {
    need(p, "params");
    need(out, "out");
    csclock::ClockParams c;
    c.nu_c = p->nu_c;
    c.tau_a = p->tau_a;
    c.atom_number = p->atom_number;
    c.eta_col = p->eta_col;
    c.eta_det = p->eta_det;
    c.lo_psd_2fs = p->lo_psd_2fs;
    c.lo_psd_2fm = p->lo_psd_2fm;
    c.f_s = p->f_s;
    c.f_m = p->f_m;
    c.saturation = p->saturation;
    const auto b = csclock::total_budget(c);
    *out = {b.delta_nu,  b.ndot,           b.photocurrent_a,  b.snr,           b.sigma_qpn,
            b.sigma_im_lo, b.sigma_im_lo_2fs, b.sigma_im_lo_2fm, b.sigma_im_shot, b.sigma_total};
  });
}

csclock_status csclock_allan_deviation(const double* y, size_t n, double tau0, const double* taus, size_t ntaus,
                                       double* tau_out, double* sigma_out, size_t* count) {
  return guard([&] {
    need(y, "y");
    need(taus, "taus");
    need(count, "count");
    const auto s = csclock::allan_deviation(std::vector<double>(y, y + n), tau0, std::vector<double>(taus, taus + ntaus));
    *count = s.tau.size();
    for (size_t i = 0; i < s.tau.size() && i < ntaus; ++i) {
      if (tau_out) tau_out[i] = s.tau[i];
      if (sigma_out) sigma_out[i] = s.sigma[i];
    }
  });
}

csclock_status csclock_session_from_file(const char* path, csclock_session** out) {
  std::string yaml, base;
  auto st = guard([&] {
    need(path, "path");
    std::filesystem::path p(path);
    yaml = read_file(p, csclock::ErrorKind::ConfigError);
    base = p.parent_path().string();
  });
  if (st != CSCLOCK_OK) return st;
  return make_session(std::move(yaml), std::move(base), out);
}

csclock_status csclock_session_from_scenario(const char* name, csclock_session** out) {
  std::string yaml, base;
  auto st = guard([&] {
    need(name, "name");
    const auto p = csclock::scenario_path(name);
    yaml = read_file(p, csclock::ErrorKind::ConfigError);
    base = p.parent_path().string();
  });
  if (st != CSCLOCK_OK) return st;
  return make_session(std::move(yaml), std::move(base), out);
}

csclock_status csclock_session_from_string(const char* yaml, const char* base_dir, csclock_session** out) {
  if (!yaml) return record(CSCLOCK_INVALID_ARGUMENT, "InvalidArgument", "yaml must not be null");
  return make_session(yaml, base_dir ? base_dir : "", out);
}

void csclock_session_free(csclock_session* s) { delete s; }

csclock_status csclock_session_set(csclock_session* s, const char* assignment) {
  return guard([&] {
    need(s, "session");
    need(assignment, "assignment");
    s->overrides.emplace_back(assignment);
    try {
      reparse(*s);
    } catch (...) {
      s->overrides.pop_back();
      reparse(*s);
      throw;
    }
  });
}

csclock_status csclock_session_validate(const csclock_session* s) {
  return guard([&] {
    need(s, "session");
    s->cfg.validate();
  });
}

const char* csclock_session_output_dir(const csclock_session* s) { return s ? s->output_dir.c_str() : ""; }

size_t csclock_command_count(void) { return csclock::command_names().size(); }

const char* csclock_command_name(size_t i) {
  const auto& n = csclock::command_names();
  return i < n.size() ? n[i].c_str() : nullptr;
}

csclock_status csclock_session_run(const csclock_session* s, const char* command, const csclock_run_options* opts,
                                   csclock_artifacts** out) {
  return guard([&] {
    need(s, "session");
    need(command, "command");
    need(out, "out");
    csclock::CommandOptions o;
    if (opts) {
      if (opts->target) o.target = opts->target;
      if (opts->allocation) o.allocation = opts->allocation;
      if (opts->has_seed) o.seed = opts->seed;
      o.threads = opts->threads;
    }
    auto a = std::make_unique<csclock_artifacts>();
    a->items = csclock::run_command(command, s->cfg, o);
    *out = a.release();
  });
}

size_t csclock_artifacts_count(const csclock_artifacts* a) { return a ? a->items.size() : 0; }

const char* csclock_artifacts_name(const csclock_artifacts* a, size_t i) {
  return a && i < a->items.size() ? a->items[i].name.c_str() : nullptr;
}

const char* csclock_artifacts_format(const csclock_artifacts* a, size_t i) {
  return a && i < a->items.size() ? a->items[i].format.c_str() : nullptr;
}

const char* csclock_artifacts_content(const csclock_artifacts* a, size_t i, size_t* length) {
  if (!a || i >= a->items.size()) return nullptr;
  if (length) *length = a->items[i].content.size();
  return a->items[i].content.c_str();
}

csclock_status csclock_artifacts_write(const csclock_artifacts* a, const char* directory) {
  return guard([&] {
    need(a, "artifacts");
    need(directory, "directory");
    csclock::write_artifacts(a->items, directory);
  });
}

void csclock_artifacts_free(csclock_artifacts* a) { delete a; }

}  // extern "C"
