#include "core/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "core/error.hpp"
#include "json.hpp"

namespace csclock {

namespace {

constexpr double kDelta65AnchorHz = 127e6;
constexpr double kDelta65ToleranceHz = 3e6;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line, std::size_t expected) {
  std::vector<std::string_view> out;
  while (out.size() + 1 < expected) {
    auto comma = line.find(',');
    if (comma == std::string_view::npos) break;
    out.push_back(trim(line.substr(0, comma)));
    line.remove_prefix(comma + 1);
  }
  out.push_back(trim(line));
  return out;
}

[[noreturn]] void parse_fail(std::size_t line, const std::string& what) {
  fail(ErrorKind::ParseError, "line " + std::to_string(line) + ": " + what);
}

double parse_double(std::string_view s, std::size_t line, std::string_view what) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || !std::isfinite(v))
    parse_fail(line, "invalid " + std::string(what) + " '" + std::string(s) + "'");
  return v;
}

FineLevel parse_level(std::string_view s, std::size_t line) {
  try {
    return FineLevel::parse(s);
  } catch (const Error& e) {
    parse_fail(line, e.what());
  }
}

struct Builder {
  AtomicDataset d;
  bool have_species = false;
  bool have_core = false;
  std::set<std::pair<FineLevel, FineLevel>> pairs;

  void constant(std::string_view key, std::string_view value, std::string_view source, std::size_t line) {
    if (key == "species") {
      try {
        d.species = parse_species(value);
      } catch (const Error& e) {
        parse_fail(line, e.what());
      }
      have_species = true;
    } else if (key == "nuclear_spin") {
      try {
        d.nuclear_spin = HalfInt::parse(value);
      } catch (const Error& e) {
        parse_fail(line, e.what());
      }
    } else if (key == "core_polarizability_a0") {
      d.core_polarizability = Polarizability::bohr3(parse_double(value, line, "core polarizability"));
      d.core_source = std::string(source);
      have_core = true;
    } else {
      parse_fail(line, "unknown constant '" + std::string(key) + "'");
    }
  }

  void hyperfine(std::string_view level, double a_mhz, double b_mhz, std::string_view source, std::size_t line) {
    auto lv = parse_level(level, line);
    if (d.hyperfine.count(lv)) parse_fail(line, "duplicate hyperfine entry for " + lv.label());
    d.hyperfine[lv] = HyperfineConstants{a_mhz * 1e6, b_mhz * 1e6, std::string(source)};
  }

  void lifetime(std::string_view level, double tau, std::string_view source, std::size_t line) {
    auto lv = parse_level(level, line);
    if (d.lifetimes.count(lv)) parse_fail(line, "duplicate lifetime entry for " + lv.label());
    d.lifetimes[lv] = Lifetime{tau, std::string(source)};
  }

  void transition(std::string_view lower, std::string_view upper, double wl_nm, double dme,
                  std::string_view source, std::size_t line) {
    TransitionRecord t;
    t.lower = parse_level(lower, line);
    t.upper = parse_level(upper, line);
    t.wavelength_m = wl_nm * 1e-9;
    t.reduced_dipole_au = dme;
    t.source = std::string(source);
    if (!pairs.insert({t.lower, t.upper}).second)
      fail(ErrorKind::DuplicateTransition,
           "duplicate transition " + t.lower.label() + " -> " + t.upper.label() + " at line " + std::to_string(line));
    d.transitions.push_back(std::move(t));
  }

  AtomicDataset finish(std::size_t line) {
    if (!have_species) parse_fail(line, "missing constant 'species'");
    if (!have_core) parse_fail(line, "missing constant 'core_polarizability_a0'");
    return std::move(d);
  }
};

void throw_first_error(const ValidationReport& r) {
  for (const auto& i : r.issues) {
    if (i.severity != Severity::Error) continue;
    if (i.code == "MissingLifetime") fail(ErrorKind::MissingLifetime, i.message);
    if (i.code == "DuplicateTransition") fail(ErrorKind::DuplicateTransition, i.message);
    if (i.code == "EmptyDataset") fail(ErrorKind::EmptyDataset, i.message);
    fail(ErrorKind::ParseError, i.message);
  }
}

}  // namespace

const HyperfineConstants* AtomicDataset::hyperfine_for(const FineLevel& lv) const {
  auto it = hyperfine.find(lv);
  return it == hyperfine.end() ? nullptr : &it->second;
}

const Lifetime* AtomicDataset::lifetime_for(const FineLevel& lv) const {
  auto it = lifetimes.find(lv);
  return it == lifetimes.end() ? nullptr : &it->second;
}

bool AtomicDataset::has_level(const FineLevel& lv) const {
  return std::any_of(transitions.begin(), transitions.end(),
                     [&](const TransitionRecord& t) { return t.lower == lv || t.upper == lv; });
}

FineLevel clock_ground_level(Species s) {
  return s == Species::Cs ? FineLevel{6, 0, HalfInt::from_twice(1)} : FineLevel{5, 0, HalfInt::from_twice(1)};
}

FineLevel clock_excited_level(Species s) {
  return s == Species::Cs ? FineLevel{5, 2, HalfInt::from_twice(5)} : FineLevel{4, 2, HalfInt::from_twice(5)};
}

std::vector<ValidationIssue> ValidationReport::errors() const {
  std::vector<ValidationIssue> out;
  for (const auto& i : issues)
    if (i.severity == Severity::Error) out.push_back(i);
  return out;
}

bool ValidationReport::has(std::string_view code) const {
  return std::any_of(issues.begin(), issues.end(), [&](const ValidationIssue& i) { return i.code == code; });
}

double hyperfine_energy_hz(double a_hz, double b_hz, HalfInt I, HalfInt j, int f) {
  if ((I.twice + j.twice) % 2 != 0 || 2 * f < std::abs(I.twice - j.twice) || 2 * f > I.twice + j.twice)
    fail(ErrorKind::InvalidF, "f=" + std::to_string(f) + " is outside |I-j|..I+j");
  const double i = I.value(), jj = j.value();
  const double K = f * (f + 1.0) - i * (i + 1.0) - jj * (jj + 1.0);
  double e = 0.5 * a_hz * K;
  if (I.twice >= 2 && j.twice >= 2) {
    e += b_hz * (1.5 * K * (K + 1.0) - 2.0 * i * (i + 1.0) * jj * (jj + 1.0)) /
         (4.0 * i * (2.0 * i - 1.0) * jj * (2.0 * jj - 1.0));
  }
  return e;
}

ValidationReport validate_dataset(const AtomicDataset& d) {
  ValidationReport r;
  auto add = [&](Severity s, std::string code, std::string msg) {
    r.issues.push_back({s, std::move(code), std::move(msg)});
  };

  if (d.transitions.empty()) add(Severity::Error, "EmptyDataset", "dataset has no transitions");
  if (d.core_polarizability.si() < 0.0)
    add(Severity::Error, "NegativeCorePolarizability", "core polarizability must be >= 0");
  if (d.nuclear_spin != nuclear_spin_of(d.species))
    add(Severity::Error, "NuclearSpinMismatch",
        "nuclear spin " + d.nuclear_spin.str() + " does not match " + std::string(species_name(d.species)));

  std::set<std::pair<FineLevel, FineLevel>> seen;
  std::map<FineLevel, std::vector<FineLevel>> up;
  for (const auto& t : d.transitions) {
    const std::string name = t.lower.label() + " -> " + t.upper.label();
    if (!(t.wavelength_m > 0.0)) add(Severity::Error, "NonPositiveWavelength", name + ": wavelength must be > 0");
    if (t.reduced_dipole_au < 0.0)
      add(Severity::Error, "NegativeMatrixElement", name + ": matrix element must be >= 0");
    if (!seen.insert({t.lower, t.upper}).second) add(Severity::Error, "DuplicateTransition", name);
    if (t.lower == t.upper) add(Severity::Error, "EnergyOrdering", name + ": lower equals upper");
    if (std::abs(t.lower.l - t.upper.l) != 1 || std::abs(t.lower.j.twice - t.upper.j.twice) > 2)
      add(Severity::Error, "NotElectricDipole", name + ": not an E1 transition");
    up[t.lower].push_back(t.upper);
  }

  // Energy ordering must be a DAG: no level may lie above itself.
  std::map<FineLevel, int> state;
  bool cycle = false;
  std::function<void(const FineLevel&)> visit = [&](const FineLevel& v) {
    state[v] = 1;
    for (const auto& w : up[v]) {
      if (state[w] == 1) cycle = true;
      else if (state[w] == 0) visit(w);
    }
    state[v] = 2;
  };
  for (const auto& [v, _] : up)
    if (state[v] == 0) visit(v);
  if (cycle) add(Severity::Error, "EnergyOrdering", "transition list implies a cyclic energy ordering");

  const FineLevel excited = clock_excited_level(d.species);
  const FineLevel ground = clock_ground_level(d.species);
  for (const auto& [lv, lt] : d.lifetimes)
    if (!(lt.tau_s > 0.0)) add(Severity::Error, "NonPositiveLifetime", lv.label() + ": lifetime must be > 0");
  if (!d.lifetime_for(excited))
    add(Severity::Error, "MissingLifetime", "no lifetime for clock level " + excited.label());

  for (const FineLevel& lv : {ground, excited}) {
    const auto* hf = d.hyperfine_for(lv);
    if (!hf) {
      add(Severity::Warning, "MissingHyperfineConstants", "no hyperfine constants for " + lv.label());
      continue;
    }
    if (hf->b_hz == 0.0 && lv.j.twice >= 2)
      add(Severity::Warning, "HyperfineBZero", lv.label() + ": quadrupole constant B absent or zero");
  }

  if (const auto* hf = d.hyperfine_for(excited)) {
    const HalfInt I = d.nuclear_spin;
    const int fmax = (excited.j.twice + I.twice) / 2;
    const double split = std::abs(hyperfine_energy_hz(hf->a_hz, hf->b_hz, I, excited.j, fmax) -
                                  hyperfine_energy_hz(hf->a_hz, hf->b_hz, I, excited.j, fmax - 1));
    std::ostringstream os;
    os.precision(6);
    os << excited.label() << " f=" << fmax << "/f=" << fmax - 1 << " splitting " << split / 1e6 << " MHz";
    if (d.species == Species::Cs) {
      if (std::abs(split - kDelta65AnchorHz) <= kDelta65ToleranceHz)
        add(Severity::Note, "HyperfineAnchorConsistent", os.str() + ", consistent with the 127 MHz anchor");
      else
        add(Severity::Warning, "HyperfineAnchorMismatch", os.str() + ", outside 127 +/- 3 MHz");
    } else {
      add(Severity::Note, "HyperfineSplitting", os.str());
    }
  }
  return r;
}

AtomicDataset parse_dataset_text(std::string_view text) {
  Builder b;
  std::string section;
  std::size_t lineno = 0;
  bool any_record = false;
  while (!text.empty()) {
    auto nl = text.find('\n');
    std::string_view raw = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++lineno;
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (line.front() == '[') {
      if (line.back() != ']') parse_fail(lineno, "malformed section header");
      section = std::string(line.substr(1, line.size() - 2));
      if (section != "constants" && section != "hyperfine" && section != "lifetimes" && section != "transitions")
        parse_fail(lineno, "unknown section '" + section + "'");
      continue;
    }
    if (section.empty()) parse_fail(lineno, "record outside any section");
    any_record = true;
    if (section == "constants") {
      auto f = split_fields(line, 3);
      if (f.size() < 2) parse_fail(lineno, "constants record needs key, value[, source]");
      b.constant(f[0], f[1], f.size() > 2 ? f[2] : "", lineno);
    } else if (section == "hyperfine") {
      auto f = split_fields(line, 4);
      if (f.size() < 3) parse_fail(lineno, "hyperfine record needs level, A_MHz, B_MHz[, source]");
      b.hyperfine(f[0], parse_double(f[1], lineno, "A"), parse_double(f[2], lineno, "B"),
                  f.size() > 3 ? f[3] : "", lineno);
    } else if (section == "lifetimes") {
      auto f = split_fields(line, 3);
      if (f.size() < 2) parse_fail(lineno, "lifetime record needs level, tau_s[, source]");
      b.lifetime(f[0], parse_double(f[1], lineno, "lifetime"), f.size() > 2 ? f[2] : "", lineno);
    } else {
      auto f = split_fields(line, 5);
      if (f.size() < 4) parse_fail(lineno, "transition record needs lower, upper, wavelength_nm, dipole_au[, source]");
      b.transition(f[0], f[1], parse_double(f[2], lineno, "wavelength"), parse_double(f[3], lineno, "matrix element"),
                   f.size() > 4 ? f[4] : "", lineno);
    }
  }
  if (!any_record) parse_fail(lineno, "no records");
  return b.finish(lineno);
}

AtomicDataset parse_dataset_json(std::string_view text) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::ParseError, std::string("JSON: ") + e.what());
  }
  Builder b;
  std::size_t idx = 0;
  auto str = [](const json& o, const char* k) -> std::string {
    if (!o.contains(k)) return {};
    const auto& v = o.at(k);
    return v.is_string() ? v.get<std::string>() : v.dump();
  };
  auto num = [&](const json& o, const char* k) -> double {
    if (!o.contains(k) || !o.at(k).is_number())
      fail(ErrorKind::ParseError, "JSON record " + std::to_string(idx) + ": missing number '" + k + "'");
    return o.at(k).get<double>();
  };
  try {
    if (!j.is_object()) fail(ErrorKind::ParseError, "JSON dataset must be an object");
    for (const auto& c : j.value("constants", json::array())) {
      ++idx;
      b.constant(str(c, "key"), str(c, "value"), str(c, "source"), idx);
    }
    for (const auto& h : j.value("hyperfine", json::array())) {
      ++idx;
      b.hyperfine(str(h, "level"), num(h, "A_MHz"), h.contains("B_MHz") ? num(h, "B_MHz") : 0.0, str(h, "source"), idx);
    }
    for (const auto& l : j.value("lifetimes", json::array())) {
      ++idx;
      b.lifetime(str(l, "level"), num(l, "tau_s"), str(l, "source"), idx);
    }
    for (const auto& t : j.value("transitions", json::array())) {
      ++idx;
      b.transition(str(t, "lower"), str(t, "upper"), num(t, "wavelength_nm"), num(t, "reduced_dipole_au"),
                   str(t, "source"), idx);
    }
  } catch (const json::exception& e) {
    fail(ErrorKind::ParseError, std::string("JSON: ") + e.what());
  }
  return b.finish(idx);
}

AtomicDataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::MissingFile, "cannot open dataset '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  auto first = text.find_first_not_of(" \t\r\n");
  AtomicDataset d = (first != std::string::npos && text[first] == '{') ? parse_dataset_json(text)
                                                                       : parse_dataset_text(text);
  throw_first_error(validate_dataset(d));
  return d;
}

}  // namespace csclock
