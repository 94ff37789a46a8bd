#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mixsde {

/// Invalid configuration; line is 1-based, 0 when no line applies.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& message);
  int line() const { return line_; }
  const std::string& message() const { return message_; }

 private:
  int line_;
  std::string message_;
};

/// Flat key -> scalar-or-list configuration parsed from YAML.
class Config {
 public:
  struct Entry {
    std::vector<std::string> items;  // one item for scalars
    bool list = false;
    int line = 0;
  };

  static Config parse(const std::string& text);
  static Config parse_file(const std::string& path);

  bool has(const std::string& key) const { return entries_.count(key) > 0; }
  int line_of(const std::string& key) const;
  std::vector<std::string> keys() const;
  const std::map<std::string, Entry>& entries() const { return entries_; }

  std::string get_string(const std::string& key) const;
  double get_double(const std::string& key) const;
  std::uint64_t get_u64(const std::string& key) const;
  std::size_t get_size(const std::string& key) const;
  bool get_bool(const std::string& key) const;
  std::vector<double> get_doubles(const std::string& key) const;  // scalar or list
  std::vector<std::size_t> get_sizes(const std::string& key) const;

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  std::size_t get_size(const std::string& key, std::size_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;

  void set(const std::string& key, const std::string& scalar);

  /// Throws ConfigError for the first key not in `allowed`; a trailing '*'
  /// in an allowed entry matches any suffix.
  void require_known(const std::vector<std::string>& allowed) const;

  /// "key=value" lines, sorted, without the excluded keys.
  std::string canonical(const std::vector<std::string>& excluded = {}) const;

  /// YAML block mapping at the given indentation.
  std::string to_yaml(int indent = 0) const;

 private:
  const Entry& entry(const std::string& key) const;
  [[noreturn]] void fail(const std::string& key, const std::string& what) const;

  std::map<std::string, Entry> entries_;
};

std::uint64_t fnv1a64(const std::string& text);
std::string hex64(std::uint64_t v);

}  // namespace mixsde
