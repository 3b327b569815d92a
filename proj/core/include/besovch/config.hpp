#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "besovch/error.hpp"

namespace besovch {

/// Error tied to one configuration key; the message always names the key.
class ConfigError : public InvalidArgument {
 public:
  ConfigError(std::string key, const std::string& what)
      : InvalidArgument("config key '" + key + "': " + what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// Flat `key = value` settings. Blank lines and lines starting with '#' are ignored.
class Config {
 public:
  static Config parse(std::string_view text);
  static Config load(const std::filesystem::path& path);

  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  std::optional<std::string> get(const std::string& key) const;
  void set(const std::string& key, std::string value) { entries_[key] = std::move(value); }

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  long long get_int(const std::string& key, long long fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<int> get_int_list(const std::string& key, const std::vector<int>& fallback) const;
  std::vector<double> get_double_list(const std::string& key, const std::vector<double>& fallback) const;

  /// Throws ConfigError for the first key (in sorted order) outside `allowed`.
  void require_known(const std::set<std::string>& allowed) const;

  const std::map<std::string, std::string>& entries() const noexcept { return entries_; }

 private:
  std::map<std::string, std::string> entries_;
};

/// Comma-separated lists; `what` names the source in error messages.
std::vector<int> parse_int_list(std::string_view text, const std::string& what);
std::vector<double> parse_double_list(std::string_view text, const std::string& what);
double parse_double(std::string_view text, const std::string& what);

}  // namespace besovch
