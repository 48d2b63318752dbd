#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "socdw/errors.hpp"

namespace socdw {

/// Full-precision scientific notation (17 significant digits) so downstream
/// comparisons are not rounded.
std::string format_full(double v);

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
  void row(const std::vector<double>& values);
  void raw_row(const std::vector<std::string>& cells);

 private:
  std::ofstream out_;
  size_t columns_;
};

/// Flat key = value configuration with dotted section keys
/// (grid.n_points, trap.gamma, ...). Lines starting with # are comments.
class KeyValueConfig {
 public:
  KeyValueConfig() = default;
  static KeyValueConfig load(const std::filesystem::path& path);
  static KeyValueConfig parse(const std::string& text);

  bool has(const std::string& key) const;
  std::optional<std::string> get(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;

  void set(const std::string& key, const std::string& value);
  void set(const std::string& key, double value);
  void set(const std::string& key, int value);

  /// Sorted key = value text; loading it back reproduces the map exactly.
  std::string serialize() const;
  void save(const std::filesystem::path& path) const;

  const std::map<std::string, std::string>& entries() const { return entries_; }

 private:
  std::map<std::string, std::string> entries_;
};

}  // namespace socdw
