#include "elgrat/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "elgrat/errors.hpp"

namespace elgrat {

namespace {

std::string trim(const std::string& s) {
  size_t first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  size_t last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

struct Entry {
  std::string value;
  int line = 0;
  bool used = false;
};

// key -> value table with consumption tracking, so leftovers become
// unknown-key diagnostics.
struct Table {
  std::string path;
  std::map<std::string, Entry> entries;

  [[noreturn]] void fail(const std::string& message, int line) const {
    throw config_error(path + ":" + std::to_string(line) + ": " + message);
  }

  const Entry* find(const std::string& key) {
    auto it = entries.find(key);
    if (it == entries.end()) return nullptr;
    it->second.used = true;
    return &it->second;
  }

  const Entry& require(const std::string& key) {
    const Entry* e = find(key);
    if (!e) throw config_error(path + ": missing required key '" + key + "'");
    return *e;
  }

  double parse_double(const std::string& key, const Entry& e) const {
    try {
      size_t pos = 0;
      double v = std::stod(e.value, &pos);
      if (pos != e.value.size()) throw std::invalid_argument("");
      return v;
    } catch (const std::exception&) {
      fail("key '" + key + "': expected a number, got '" + e.value + "'", e.line);
    }
  }

  double get_double(const std::string& key) { return parse_double(key, require(key)); }

  double get_double(const std::string& key, double fallback) {
    const Entry* e = find(key);
    return e ? parse_double(key, *e) : fallback;
  }

  int get_int(const std::string& key, int fallback) {
    const Entry* e = find(key);
    if (!e) return fallback;
    try {
      size_t pos = 0;
      int v = std::stoi(e->value, &pos);
      if (pos != e->value.size()) throw std::invalid_argument("");
      return v;
    } catch (const std::exception&) {
      fail("key '" + key + "': expected an integer, got '" + e->value + "'", e->line);
    }
  }

  bool get_bool(const std::string& key, bool fallback) {
    const Entry* e = find(key);
    if (!e) return fallback;
    if (e->value == "true") return true;
    if (e->value == "false") return false;
    fail("key '" + key + "': expected true or false, got '" + e->value + "'", e->line);
  }

  std::string get_string(const std::string& key, const std::string& fallback) {
    const Entry* e = find(key);
    return e ? e->value : fallback;
  }
};

Table read_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file '" + path + "'");
  Table table;
  table.path = path;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos) table.fail("expected 'key = value'", number);
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) table.fail("empty key", number);
    if (value.empty()) table.fail("key '" + key + "' has an empty value", number);
    auto [it, inserted] = table.entries.emplace(key, Entry{value, number, false});
    if (!inserted)
      table.fail("duplicate key '" + key + "' (first at line " + std::to_string(it->second.line) + ")",
                 number);
  }
  return table;
}

SurfaceProfile parse_profile(Table& table, double period) {
  const Entry* e = table.find("geometry.profile");
  if (!e) return flat_profile(period);
  SurfaceProfile profile;
  std::stringstream segments(e->value);
  std::string pair;
  while (std::getline(segments, pair, ';')) {
    pair = trim(pair);
    if (pair.empty()) continue;
    std::istringstream coords(pair);
    double x = 0.0, y = 0.0;
    std::string excess;
    if (!(coords >> x >> y) || (coords >> excess))
      table.fail("geometry.profile: expected 'x y' breakpoints separated by ';', got '" + pair + "'",
                 e->line);
    profile.points.emplace_back(x, y);
  }
  if (profile.points.size() < 2)
    table.fail("geometry.profile: need at least two breakpoints", e->line);
  if (profile.points.back().x() != period)
    table.fail("geometry.profile: last breakpoint x must equal geometry.period", e->line);
  return profile;
}

}  // namespace

RunConfig load_config(const std::string& path) {
  Table table = read_table(path);
  RunConfig config;

  std::string mode = table.get_string("mode", "adapt");
  if (mode == "solve")
    config.mode = RunMode::Solve;
  else if (mode == "adapt")
    config.mode = RunMode::Adapt;
  else if (mode == "study")
    config.mode = RunMode::Study;
  else
    throw config_error(path + ": mode must be solve, adapt, or study, got '" + mode + "'");

  double lambda = table.get_double("medium.lambda");
  double mu = table.get_double("medium.mu");
  double omega = table.get_double("medium.omega");
  try {
    config.problem.medium = make_medium(lambda, mu, omega);
  } catch (const std::exception& err) {
    throw config_error(path + ": " + err.what());
  }

  std::string kind = table.get_string("incidence.kind", "");
  if (kind == "p" || kind == "compressional")
    config.problem.wave.kind = WaveKind::Compressional;
  else if (kind == "s" || kind == "shear")
    config.problem.wave.kind = WaveKind::Shear;
  else if (kind.empty())
    throw config_error(path + ": missing required key 'incidence.kind'");
  else
    throw config_error(path + ": incidence.kind must be p or s, got '" + kind + "'");
  config.problem.wave.theta = table.get_double("incidence.theta");
  if (!(std::abs(config.problem.wave.theta) < M_PI / 2.0))
    throw config_error(path + ": incidence.theta out of (-pi/2, pi/2)");

  double period = table.get_double("geometry.period");
  if (!(period > 0.0)) throw config_error(path + ": geometry.period must be positive");
  config.problem.b = table.get_double("geometry.b");
  config.problem.profile = parse_profile(table, period);
  try {
    validate_profile(config.problem.profile, config.problem.b);
  } catch (const std::exception& err) {
    throw config_error(path + ": geometry.profile: " + err.what());
  }

  config.adapt.tolerance = table.get_double("adapt.tolerance", config.adapt.tolerance);
  if (!(config.adapt.tolerance > 0.0)) throw config_error(path + ": adapt.tolerance must be positive");
  config.adapt.tau = table.get_double("adapt.tau", config.adapt.tau);
  if (!(config.adapt.tau > 0.0 && config.adapt.tau < 1.0))
    throw config_error(path + ": adapt.tau out of (0,1)");
  config.adapt.dtn_tol = table.get_double("adapt.dtn_tol", config.adapt.dtn_tol);
  if (!(config.adapt.dtn_tol > 0.0)) throw config_error(path + ": adapt.dtn_tol must be positive");
  config.adapt.max_iterations = table.get_int("adapt.max_iterations", config.adapt.max_iterations);
  if (config.adapt.max_iterations < 1)
    throw config_error(path + ": adapt.max_iterations must be at least 1");
  config.adapt.max_dof = table.get_int("adapt.max_dof", config.adapt.max_dof);
  if (config.adapt.max_dof < 1) throw config_error(path + ": adapt.max_dof must be at least 1");
  config.adapt.h0 = table.get_double("adapt.h0", config.adapt.h0);
  if (!(config.adapt.h0 > 0.0)) throw config_error(path + ": adapt.h0 must be positive");
  config.adapt.retighten = table.get_bool("adapt.retighten", config.adapt.retighten);

  config.study_levels = table.get_int("study.levels", config.study_levels);
  if (config.study_levels < 1) throw config_error(path + ": study.levels must be at least 1");

  config.output.directory = table.get_string("output.directory", config.output.directory);
  config.output.vtk = table.get_bool("output.vtk", config.output.vtk);
  config.output.csv = table.get_bool("output.csv", config.output.csv);
  config.output.matrix = table.get_bool("output.matrix", config.output.matrix);

  for (const auto& [key, entry] : table.entries)
    if (!entry.used) table.fail("unknown key '" + key + "'", entry.line);

  return config;
}

}  // namespace elgrat
