#include "config.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "redopt/problems.hpp"

namespace redopt::cli {

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "problem",    "r",          "symmetry",      "broken_action", "inertia",
      "actuated",   "t0",         "t1",            "h",             "x0",
      "lambda0",    "x1",         "mode",          "out",           "samples",
      "tol_symmetry", "tol_invariance", "tol_curvature",
      "newton_tol", "newton_max_iter", "fd_step"};
  return keys;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

Config Config::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  Config cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": expected `key = value`, got: " + line);
    cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

void Config::set(const std::string& key, const std::string& value) {
  if (!known_keys().count(key)) throw ConfigError("unknown config key: " + key);
  values_[key] = value;
}

bool Config::has(const std::string& key) const { return values_.count(key) > 0; }

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key, double fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  try {
    size_t used = 0;
    double v = std::stod(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key `" + key + "`: expected a number, got: " + it->second);
  }
}

int Config::get_int(const std::string& key, int fallback) const {
  const double v = get_double(key, fallback);
  if (v != static_cast<int>(v))
    throw ConfigError("config key `" + key + "`: expected an integer");
  return static_cast<int>(v);
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  const std::string& v = it->second;
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("config key `" + key + "`: expected true/false, got: " + v);
}

Vec Config::get_vector(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("missing required config key: " + key);
  std::vector<double> parts;
  std::stringstream ss(it->second);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok = trim(tok);
    try {
      size_t used = 0;
      parts.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw ConfigError("config key `" + key + "`: expected numbers, got: " + tok);
    }
  }
  Vec out(static_cast<Eigen::Index>(parts.size()));
  for (size_t i = 0; i < parts.size(); ++i) out[i] = parts[i];
  return out;
}

Vec Config::get_vector(const std::string& key, const Vec& fallback) const {
  return has(key) ? get_vector(key) : fallback;
}

ProblemDefinition problem_from_config(const Config& cfg) {
  const std::string name = cfg.get_string("problem", "");
  if (name.empty()) throw ConfigError("missing required config key: problem");
  const bool broken = cfg.get_bool("broken_action", false);

  if (name == "snakeboard") {
    const double r = cfg.get_double("r", 1.0);
    const std::string sym = cfg.get_string("symmetry", "r2xso2");
    if (sym == "r2") return build_snakeboard(r, SnakeboardSymmetry::R2, broken);
    if (sym == "r2xso2") return build_snakeboard(r, SnakeboardSymmetry::R2xSO2, broken);
    throw ConfigError("config key `symmetry`: expected r2 or r2xso2, got: " + sym);
  }
  if (name == "rigid-body") {
    Vec default_inertia(3);
    default_inertia << 1, 2, 3;
    Vec inertia = cfg.get_vector("inertia", default_inertia);
    if (inertia.size() != 3) throw ConfigError("config key `inertia`: expected three values");
    std::vector<int> actuated;
    Vec axes = cfg.get_vector("actuated", Vec());
    if (axes.size() == 0) {
      actuated = {1, 2, 3};
    } else {
      for (Eigen::Index i = 0; i < axes.size(); ++i) {
        if (axes[i] != static_cast<int>(axes[i]))
          throw ConfigError("config key `actuated`: expected axis indices");
        actuated.push_back(static_cast<int>(axes[i]));
      }
    }
    return build_rigid_body(inertia[0], inertia[1], inertia[2], actuated);
  }
  if (name == "heisenberg") return build_heisenberg();
  throw ConfigError("config key `problem`: unknown problem: " + name);
}

void atomic_write(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write: " + tmp.string());
    out << content;
  }
  fs::rename(tmp, target);
}

}  // namespace redopt::cli
