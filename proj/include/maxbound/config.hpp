#pragma once

// Plain key=value run configuration. Later sources override earlier ones;
// the effective map is echoed into every output artifact.

#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace maxbound {

class RunConfig {
 public:
  /// Lines are `key = value`; blank lines and lines starting with '#' are
  /// ignored.
  static RunConfig parse(const std::string& text) {
    RunConfig cfg;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
      ++lineno;
      std::string s = trim(line);
      if (s.empty() || s[0] == '#') continue;
      auto eq = s.find('=');
      if (eq == std::string::npos)
        throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key=value");
      std::string key = trim(s.substr(0, eq));
      std::string value = trim(s.substr(eq + 1));
      if (key.empty()) throw std::invalid_argument("config line " + std::to_string(lineno) + ": empty key");
      cfg.values_[key] = value;
    }
    return cfg;
  }

  static RunConfig load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
  }

  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  void set_default(const std::string& key, const std::string& value) { values_.emplace(key, value); }
  void merge(const RunConfig& overrides) {
    for (const auto& [k, v] : overrides.values_) values_[k] = v;
  }
  bool has(const std::string& key) const { return values_.count(key) != 0; }

  std::string get(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw std::invalid_argument("missing config value: " + key);
    return it->second;
  }
  long long get_int(const std::string& key) const {
    std::string v = get(key);
    std::size_t used = 0;
    long long out = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument("config " + key + ": not an integer: " + v);
    return out;
  }
  std::uint64_t get_u64(const std::string& key) const {
    std::string v = get(key);
    std::size_t used = 0;
    unsigned long long out = std::stoull(v, &used);
    if (used != v.size()) throw std::invalid_argument("config " + key + ": not an integer: " + v);
    return out;
  }
  double get_double(const std::string& key) const {
    std::string v = get(key);
    std::size_t used = 0;
    double out = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument("config " + key + ": not a number: " + v);
    return out;
  }
  /// Comma-separated list of numbers; empty string gives an empty list.
  std::vector<double> get_list(const std::string& key) const {
    std::vector<double> out;
    std::stringstream ss(get(key));
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (item.empty()) continue;
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument("config " + key + ": not a number: " + item);
    }
    return out;
  }

  const std::map<std::string, std::string>& values() const { return values_; }

  /// Canonical text: sorted `key=value` lines.
  std::string canonical() const {
    std::string out;
    for (const auto& [k, v] : values_) out += k + "=" + v + "\n";
    return out;
  }

  /// FNV-1a 64 of the canonical text, as 16 hex digits.
  std::string hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : canonical()) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i, h >>= 4) s[static_cast<std::size_t>(i)] = digits[h & 0xf];
    return s;
  }

 private:
  static std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
  }

  std::map<std::string, std::string> values_;
};

}  // namespace maxbound
