#include "mixsde/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace mixsde {

ConfigError::ConfigError(int line, const std::string& message)
    : std::runtime_error("config:" + std::to_string(line) + ": " + message), line_(line), message_(message) {}

namespace {

int node_line(const YAML::Node& node) { return node.Mark().line + 1; }

bool needs_quotes(const std::string& s) {
  if (s.empty()) return true;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == '+' || c == '_' || c == '/'))
      return true;
  return false;
}

std::string yaml_scalar(const std::string& s) {
  if (!needs_quotes(s)) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

Config Config::parse(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(e.mark.line + 1, e.msg);
  }
  Config cfg;
  if (root.IsNull()) return cfg;
  if (!root.IsMap()) throw ConfigError(node_line(root), "top level must be a mapping");
  for (const auto& kv : root) {
    const int line = node_line(kv.first);
    if (!kv.first.IsScalar()) throw ConfigError(line, "keys must be scalars");
    const std::string key = kv.first.Scalar();
    if (cfg.entries_.count(key)) throw ConfigError(line, "duplicate key '" + key + "'");
    Entry e;
    e.line = line;
    const YAML::Node& v = kv.second;
    if (v.IsScalar()) {
      e.items.push_back(v.Scalar());
    } else if (v.IsSequence()) {
      e.list = true;
      for (const auto& item : v) {
        if (!item.IsScalar()) throw ConfigError(node_line(item), "'" + key + "': list items must be scalars");
        e.items.push_back(item.Scalar());
      }
    } else if (v.IsNull()) {
      throw ConfigError(line, "'" + key + "' has no value");
    } else {
      throw ConfigError(line, "'" + key + "': nested mappings are not supported; use dotted keys");
    }
    cfg.entries_.emplace(key, std::move(e));
  }
  return cfg;
}

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(0, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

int Config::line_of(const std::string& key) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? 0 : it->second.line;
}

std::vector<std::string> Config::keys() const {
  std::vector<std::string> out;
  for (const auto& kv : entries_) out.push_back(kv.first);
  return out;
}

const Config::Entry& Config::entry(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) throw ConfigError(0, "missing required key '" + key + "'");
  return it->second;
}

void Config::fail(const std::string& key, const std::string& what) const {
  throw ConfigError(line_of(key), "'" + key + "': " + what);
}

std::string Config::get_string(const std::string& key) const {
  const Entry& e = entry(key);
  if (e.list) fail(key, "expected a scalar");
  return e.items[0];
}

namespace {

std::optional<double> to_double(const std::string& s) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::optional<std::uint64_t> to_u64(const std::string& s) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace

double Config::get_double(const std::string& key) const {
  auto v = to_double(get_string(key));
  if (!v) fail(key, "expected a finite number");
  return *v;
}

std::uint64_t Config::get_u64(const std::string& key) const {
  auto v = to_u64(get_string(key));
  if (!v) fail(key, "expected an unsigned 64-bit integer");
  return *v;
}

std::size_t Config::get_size(const std::string& key) const { return static_cast<std::size_t>(get_u64(key)); }

bool Config::get_bool(const std::string& key) const {
  const std::string s = get_string(key);
  if (s == "true" || s == "yes" || s == "1") return true;
  if (s == "false" || s == "no" || s == "0") return false;
  fail(key, "expected true or false");
}

std::vector<double> Config::get_doubles(const std::string& key) const {
  const Entry& e = entry(key);
  std::vector<double> out;
  for (const auto& item : e.items) {
    auto v = to_double(item);
    if (!v) fail(key, "expected finite numbers");
    out.push_back(*v);
  }
  if (out.empty()) fail(key, "empty list");
  return out;
}

std::vector<std::size_t> Config::get_sizes(const std::string& key) const {
  const Entry& e = entry(key);
  std::vector<std::size_t> out;
  for (const auto& item : e.items) {
    auto v = to_u64(item);
    if (!v) fail(key, "expected non-negative integers");
    out.push_back(static_cast<std::size_t>(*v));
  }
  if (out.empty()) fail(key, "empty list");
  return out;
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  return has(key) ? get_string(key) : fallback;
}
double Config::get_double(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}
std::size_t Config::get_size(const std::string& key, std::size_t fallback) const {
  return has(key) ? get_size(key) : fallback;
}
bool Config::get_bool(const std::string& key, bool fallback) const { return has(key) ? get_bool(key) : fallback; }

void Config::set(const std::string& key, const std::string& scalar) {
  Entry& e = entries_[key];
  e.items = {scalar};
  e.list = false;
}

void Config::require_known(const std::vector<std::string>& allowed) const {
  for (const auto& [key, e] : entries_) {
    bool ok = false;
    for (const auto& a : allowed) {
      if (!a.empty() && a.back() == '*') {
        const std::string prefix = a.substr(0, a.size() - 1);
        ok = key.size() > prefix.size() && key.compare(0, prefix.size(), prefix) == 0;
      } else {
        ok = key == a;
      }
      if (ok) break;
    }
    if (!ok) throw ConfigError(e.line, "unknown key '" + key + "'");
  }
}

std::string Config::canonical(const std::vector<std::string>& excluded) const {
  std::string out;
  for (const auto& [key, e] : entries_) {
    bool skip = false;
    for (const auto& x : excluded) skip = skip || x == key;
    if (skip) continue;
    out += key + "=";
    if (e.list) out += "[";
    for (std::size_t i = 0; i < e.items.size(); ++i) out += (i ? "," : "") + e.items[i];
    if (e.list) out += "]";
    out += "\n";
  }
  return out;
}

std::string Config::to_yaml(int indent) const {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  std::string out;
  for (const auto& [key, e] : entries_) {
    out += pad + yaml_scalar(key) + ": ";
    if (e.list) {
      out += "[";
      for (std::size_t i = 0; i < e.items.size(); ++i) out += (i ? ", " : "") + yaml_scalar(e.items[i]);
      out += "]";
    } else {
      out += yaml_scalar(e.items[0]);
    }
    out += "\n";
  }
  return out;
}

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  auto [p, ec] = std::to_chars(buf, buf + 16, v, 16);
  (void)ec;
  std::string s(buf, p);
  return std::string(16 - s.size(), '0') + s;
}

}  // namespace mixsde
