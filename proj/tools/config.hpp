#pragma once

#include <map>
#include <string>
#include <vector>

#include "redopt/problem.hpp"

namespace redopt::cli {

/// Flat key-value run configuration.  Files hold one `key = value` pair per
/// line with `#` comments; values are scalars, booleans, names, or
/// comma-separated number lists.  Unknown keys and unparsable values raise
/// ConfigError naming the key.
class Config {
public:
  static Config from_file(const std::string& path);
  Config() = default;

  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const;

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  Vec get_vector(const std::string& key) const;  // requires presence
  Vec get_vector(const std::string& key, const Vec& fallback) const;

private:
  std::map<std::string, std::string> values_;
};

ProblemDefinition problem_from_config(const Config& cfg);

/// Write-then-rename so partially written artifacts are never observed.
void atomic_write(const std::string& path, const std::string& content);

}  // namespace redopt::cli
