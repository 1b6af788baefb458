#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "csclock/csclock.h"

namespace {

enum Exit { kOk = 0, kUsage = 2, kConfig = 3, kCompute = 4 };

struct Common {
  std::string config;
  std::string scenario;
  std::string dataset;
  std::string out;
  std::vector<std::string> formats;
  std::vector<std::string> sets;
  std::optional<std::uint64_t> seed;
  std::string target;
  std::string allocation;
  unsigned threads = 0;
  bool print = false;
};

std::string json_escape(const std::string& s) {
  std::string o;
  for (char c : s) {
    switch (c) {
      case '"': o += "\\\""; break;
      case '\\': o += "\\\\"; break;
      case '\n': o += "\\n"; break;
      case '\t': o += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          o += buf;
        } else {
          o += c;
        }
    }
  }
  return o;
}

int report_error(const std::string& status, const std::string& kind, const std::string& message, int code) {
  std::cerr << "{\"error\":{\"status\":\"" << json_escape(status) << "\",\"kind\":\"" << json_escape(kind)
            << "\",\"message\":\"" << json_escape(message) << "\",\"exit_code\":" << code << "}}\n";
  return code;
}

int exit_for(csclock_status s) {
  switch (s) {
    case CSCLOCK_OK: return kOk;
    case CSCLOCK_USAGE: return kUsage;
    case CSCLOCK_IO:
    case CSCLOCK_PARSE:
    case CSCLOCK_CONFIG: return kConfig;
    default: return kCompute;
  }
}

int fail_with(csclock_status s) {
  return report_error(csclock_status_name(s), csclock_last_error_kind(), csclock_last_error(), exit_for(s));
}

std::string yaml_quote(const std::string& s) {
  std::string o = "'";
  for (char c : s) {
    if (c == '\'') o += '\'';
    o += c;
  }
  return o + "'";
}

int run(const std::string& command, const Common& c) {
  if (!c.config.empty() && !c.scenario.empty())
    return report_error("usage", "UsageError", "--config and --scenario are mutually exclusive", kUsage);

  csclock_session* session = nullptr;
  csclock_status st = c.config.empty()
                          ? csclock_session_from_scenario(c.scenario.empty() ? "cs-baseline" : c.scenario.c_str(),
                                                          &session)
                          : csclock_session_from_file(c.config.c_str(), &session);
  if (st != CSCLOCK_OK) return fail_with(st);
  std::unique_ptr<csclock_session, void (*)(csclock_session*)> guard(session, csclock_session_free);

  std::vector<std::string> sets = c.sets;
  if (!c.dataset.empty()) sets.push_back("dataset=" + yaml_quote(std::filesystem::absolute(c.dataset).string()));
  if (!c.formats.empty()) {
    std::string list = "output.formats=[";
    for (std::size_t i = 0; i < c.formats.size(); ++i) list += (i ? "," : "") + c.formats[i];
    sets.push_back(list + "]");
  }
  for (const auto& s : sets)
    if ((st = csclock_session_set(session, s.c_str())) != CSCLOCK_OK) return fail_with(st);

  csclock_run_options opts{};
  opts.target = c.target.empty() ? nullptr : c.target.c_str();
  opts.allocation = c.allocation.empty() ? nullptr : c.allocation.c_str();
  opts.has_seed = c.seed.has_value();
  opts.seed = c.seed.value_or(0);
  opts.threads = c.threads;

  csclock_artifacts* arts = nullptr;
  if ((st = csclock_session_run(session, command.c_str(), &opts, &arts)) != CSCLOCK_OK) return fail_with(st);
  std::unique_ptr<csclock_artifacts, void (*)(csclock_artifacts*)> aguard(arts, csclock_artifacts_free);

  const std::size_t n = csclock_artifacts_count(arts);
  if (c.print) {
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t len = 0;
      const char* body = csclock_artifacts_content(arts, i, &len);
      if (n > 1) std::cout << "==> " << csclock_artifacts_name(arts, i) << " <==\n";
      std::cout.write(body, static_cast<std::streamsize>(len));
    }
    if (c.out.empty()) return kOk;
  }
  const std::string dir = c.out.empty() ? csclock_session_output_dir(session) : c.out;
  if ((st = csclock_artifacts_write(arts, dir.c_str())) != CSCLOCK_OK) return fail_with(st);
  if (!c.print)
    for (std::size_t i = 0; i < n; ++i)
      std::cout << (std::filesystem::path(dir) / csclock_artifacts_name(arts, i)).string() << "\n";
  return kOk;
}

void add_common(CLI::App* app, Common& c, bool seed, bool target) {
  app->add_option("-c,--config", c.config, "Run configuration file (YAML)");
  app->add_option("-s,--scenario", c.scenario, "Bundled scenario name (default cs-baseline)");
  app->add_option("--dataset", c.dataset, "Atomic dataset file, overrides the config");
  app->add_option("-o,--out", c.out, "Output directory, overrides output.directory");
  app->add_option("-f,--format", c.formats, "Output formats: csv, json, text")
      ->delimiter(',')
      ->check(CLI::IsMember({"csv", "json", "text"}));
  app->add_option("--set", c.sets, "Override a config value: section.key=value");
  app->add_option("--threads", c.threads, "Worker threads (0: all cores)");
  app->add_flag("--print", c.print, "Print artifacts to stdout; files are written only with --out");
  if (seed) app->add_option("--seed", c.seed, "Master RNG seed for the simulator");
  if (target) {
    app->add_option("--target", c.target, "Timing target, e.g. 1ns@30d");
    app->add_option("--allocation", c.allocation, "full-per-row or equal-split");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optical clock design calculator: polarizabilities, Zeeman structure, lattice, stability, "
               "systematics and lock simulation."};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(csclock_version()));

  Common common;
  std::string chosen;
  struct Leaf {
    const char* group;
    const char* name;
    const char* help;
    bool seed;
    bool target;
  };
  const std::vector<Leaf> leaves{
      {"polarizability", "scan", "Polarizability scans and anchors", false, false},
      {"magic", "find", "Magic wavelengths in a window", false, false},
      {"zeeman", "map", "Breit-Rabi maps, stretched shift and magic fields", false, false},
      {"lattice", "design", "Lattice geometry, depth, sidebands and depumping", false, false},
      {"stability", "budget", "Short-term stability budget", false, false},
      {"systematics", "table", "Systematic error budget", false, true},
      {"simulate", nullptr, "Monte Carlo lock simulation and Allan deviation", true, false},
      {"report", nullptr, "Full scenario report", true, true},
  };
  std::map<std::string, CLI::App*> groups;
  for (const auto& l : leaves) {
    CLI::App* leaf;
    std::string cmd = l.group;
    if (l.name) {
      auto& g = groups[l.group];
      if (!g) {
        g = app.add_subcommand(l.group, std::string(l.help));
        g->require_subcommand(1);
      }
      leaf = g->add_subcommand(l.name, l.help);
      cmd += std::string(" ") + l.name;
    } else {
      leaf = app.add_subcommand(l.group, l.help);
    }
    add_common(leaf, common, l.seed, l.target);
    leaf->callback([&chosen, cmd] { chosen = cmd; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error("usage", "UsageError", e.what(), kUsage);
  }
  return run(chosen, common);
}
