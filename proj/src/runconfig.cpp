#include "sepspde/runconfig.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace sepspde {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

[[noreturn]] void fail(const std::string& name, int line, const std::string& what) {
  std::ostringstream msg;
  msg << name << ":" << line << ": " << what;
  throw ConfigError(msg.str());
}

template <typename T>
T parse_number(const std::string& name, int line, const std::string& value) {
  std::istringstream in(value);
  T out;
  in >> out;
  if (in.fail() || !(in >> std::ws).eof()) fail(name, line, "cannot parse value '" + value + "'");
  return out;
}

bool parse_bool(const std::string& name, int line, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  fail(name, line, "cannot parse boolean '" + value + "'");
}

}  // namespace

void RunConfig::resolve() {
  if (problem != "elliptic" && problem != "burgers" && problem != "wave")
    throw ConfigError("problem must be one of elliptic | burgers | wave (got '" + problem + "')");
  if (eps1 == 0.0) eps1 = (problem == "elliptic") ? 1e-6 : 1e-2;
  if (!(eps1 > 0.0)) throw ConfigError("eps1 must be > 0");
  if (!(eps2 > 0.0)) throw ConfigError("eps2 must be > 0");
  if (samples < 2) throw ConfigError("N must be >= 2");
  if (dimension < 0) throw ConfigError("M must be >= 0");
  if (dimension == 0 && problem != "elliptic") throw ConfigError("M must be >= 1 for " + problem);
  if (max_outer < 1 || max_inner < 1) throw ConfigError("iteration caps must be >= 1");
  if (threads < 1) throw ConfigError("threads must be >= 1");
  if (oracle_samples < 2) throw ConfigError("oracle_samples must be >= 2");
  if (kde_points < 2) throw ConfigError("kde_points must be >= 2");
  if (initial_profile != "zero" && initial_profile != "sine")
    throw ConfigError("initial_profile must be zero | sine");
  if (!mesh_nodes) mesh_nodes = (problem == "wave") ? 549 : 808;
  if (!probe_x) probe_x = (problem == "elliptic") ? 0.5 : (problem == "burgers" ? 1.0 : 0.0);
  if (!probe_y) probe_y = (problem == "elliptic") ? 0.5 : 0.0;
  if (!probe_t) probe_t = (problem == "wave") ? 1.0 : 0.5;
}

std::uint64_t RunConfig::resolved_oracle_seed() const {
  // independent default stream, never the solver's ensemble seed
  return oracle_seed ? *oracle_seed : seed ^ 0x9e3779b97f4a7c15ULL;
}

RunConfig parse_run_config(std::istream& in, const std::string& name) {
  RunConfig cfg;
  std::string line;
  int lineno = 0;
  bool saw_problem = false;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos) fail(name, lineno, "expected 'key: value'");
    const std::string key = trim(line.substr(0, colon));
    const std::string value = trim(line.substr(colon + 1));
    if (value.empty()) fail(name, lineno, "missing value for key '" + key + "'");

    if (key == "problem") {
      cfg.problem = value;
      saw_problem = true;
    } else if (key == "M") {
      cfg.dimension = parse_number<int>(name, lineno, value);
    } else if (key == "N") {
      cfg.samples = parse_number<int>(name, lineno, value);
    } else if (key == "seed") {
      cfg.seed = parse_number<std::uint64_t>(name, lineno, value);
    } else if (key == "eps1") {
      cfg.eps1 = parse_number<double>(name, lineno, value);
      if (!(cfg.eps1 > 0.0)) fail(name, lineno, "eps1 must be > 0");
    } else if (key == "eps2") {
      cfg.eps2 = parse_number<double>(name, lineno, value);
      if (!(cfg.eps2 > 0.0)) fail(name, lineno, "eps2 must be > 0");
    } else if (key == "max_outer") {
      cfg.max_outer = parse_number<int>(name, lineno, value);
    } else if (key == "max_inner") {
      cfg.max_inner = parse_number<int>(name, lineno, value);
    } else if (key == "mesh_nodes") {
      cfg.mesh_nodes = parse_number<int>(name, lineno, value);
    } else if (key == "time_points") {
      cfg.time_points = parse_number<int>(name, lineno, value);
    } else if (key == "nt") {
      cfg.nt = parse_number<int>(name, lineno, value);
    } else if (key == "nx") {
      cfg.nx = parse_number<int>(name, lineno, value);
    } else if (key == "probe_x") {
      cfg.probe_x = parse_number<double>(name, lineno, value);
    } else if (key == "probe_y") {
      cfg.probe_y = parse_number<double>(name, lineno, value);
    } else if (key == "probe_t") {
      cfg.probe_t = parse_number<double>(name, lineno, value);
    } else if (key == "initial_profile") {
      cfg.initial_profile = value;
    } else if (key == "initial_amplitude") {
      cfg.initial_amplitude = parse_number<double>(name, lineno, value);
    } else if (key == "oracle") {
      cfg.oracle = parse_bool(name, lineno, value);
    } else if (key == "oracle_samples") {
      cfg.oracle_samples = parse_number<int>(name, lineno, value);
    } else if (key == "oracle_seed") {
      cfg.oracle_seed = parse_number<std::uint64_t>(name, lineno, value);
    } else if (key == "threads") {
      cfg.threads = parse_number<int>(name, lineno, value);
    } else if (key == "kde_points") {
      cfg.kde_points = parse_number<int>(name, lineno, value);
    } else {
      fail(name, lineno, "unknown key '" + key + "'");
    }
  }
  if (!saw_problem) throw ConfigError(name + ": missing required key 'problem'");
  try {
    cfg.resolve();
  } catch (const ConfigError& e) {
    throw ConfigError(name + ": " + e.what());
  }
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_run_config(in, path);
}

}  // namespace sepspde
