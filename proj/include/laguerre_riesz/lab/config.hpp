#pragma once

#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "../special_fn.hpp"

namespace laguerre_riesz::lab {

// Line-oriented `key = value` settings. Lines starting with '#' are comments.
// Lists are comma separated. Later assignments win.
class Config {
 public:
  Config() = default;
  Config(std::initializer_list<std::pair<const std::string, std::string>> init) : values_(init) {}

  static Config parse(std::istream& is, const std::string& origin = "<stream>") {
    Config c;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
      ++lineno;
      const auto text = trim(line.substr(0, line.find('#')));
      if (text.empty()) continue;
      const auto eq = text.find('=');
      if (eq == std::string::npos) {
        throw std::runtime_error(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
      }
      c.set(trim(text.substr(0, eq)), trim(text.substr(eq + 1)));
    }
    return c;
  }

  static Config load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open '" + path + "'");
    return parse(in, path);
  }

  void set(const std::string& key, const std::string& value) {
    if (key.empty()) throw std::invalid_argument("config: empty key");
    values_[key] = value;
  }

  // Accepts "key=value" as given on the command line.
  void apply_assignment(const std::string& kv) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("config: --set expects key=value, got '" + kv + "'");
    set(trim(kv.substr(0, eq)), trim(kv.substr(eq + 1)));
  }

  // Values from `other` override ours.
  void merge(const Config& other) {
    for (const auto& [k, v] : other.values_) values_[k] = v;
  }

  bool has(const std::string& key) const { return values_.count(key) != 0; }

  const std::string& raw(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw std::out_of_range("config: missing key '" + key + "'");
    return it->second;
  }

  std::string get_string(const std::string& key, const std::string& fallback) const {
    return has(key) ? raw(key) : fallback;
  }

  double get_double(const std::string& key, double fallback) const {
    return has(key) ? to_double(key, raw(key)) : fallback;
  }

  long get_int(const std::string& key, long fallback) const {
    if (!has(key)) return fallback;
    const double v = to_double(key, raw(key));
    if (v != static_cast<double>(static_cast<long>(v))) {
      throw std::invalid_argument("config: '" + key + "' must be an integer");
    }
    return static_cast<long>(v);
  }

  std::vector<double> get_list(const std::string& key, const std::vector<double>& fallback) const {
    if (!has(key)) return fallback;
    std::vector<double> out;
    std::stringstream ss(raw(key));
    for (std::string item; std::getline(ss, item, ',');) {
      item = trim(item);
      if (!item.empty()) out.push_back(to_double(key, item));
    }
    if (out.empty()) throw std::invalid_argument("config: '" + key + "' is an empty list");
    return out;
  }

  std::vector<int> get_int_list(const std::string& key, const std::vector<int>& fallback) const {
    if (!has(key)) return fallback;
    std::vector<int> out;
    for (double v : get_list(key, {})) {
      if (v != static_cast<double>(static_cast<int>(v))) {
        throw std::invalid_argument("config: '" + key + "' must hold integers");
      }
      out.push_back(static_cast<int>(v));
    }
    return out;
  }

  AlphaVector get_alpha(const std::string& key, const AlphaVector& fallback) const {
    return has(key) ? AlphaVector(get_list(key, {})) : fallback;
  }

  const std::map<std::string, std::string>& entries() const noexcept { return values_; }

  void write(std::ostream& os) const {
    for (const auto& [k, v] : values_) os << k << " = " << v << '\n';
  }

 private:
  static std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
  }

  static double to_double(const std::string& key, const std::string& text) {
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || *end != '\0') {
      throw std::invalid_argument("config: '" + key + "' is not a number: '" + text + "'");
    }
    return v;
  }

  std::map<std::string, std::string> values_;
};

}  // namespace laguerre_riesz::lab
