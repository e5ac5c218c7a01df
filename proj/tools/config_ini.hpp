// Copyright 2026 The upe authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace upecli {

// Flat key-value configuration with [section] headers, `key = value` lines
// and # comments. Keys are addressed as "section.key"; command-line --set
// overrides win over file contents.
class IniConfig {
 public:
  static IniConfig parse_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open config file " + path);
    IniConfig cfg;
    std::string line, section;
    std::size_t lineno = 0;
    while (std::getline(f, line)) {
      ++lineno;
      const std::string t = strip_comment(line);
      if (t.empty()) continue;
      if (t.front() == '[') {
        const auto close = t.find(']');
        if (close == std::string::npos) {
          throw std::runtime_error("line " + std::to_string(lineno) +
                                   ": unterminated section header");
        }
        section = trim(t.substr(1, close - 1));
        continue;
      }
      const auto eq = t.find('=');
      if (eq == std::string::npos) {
        throw std::runtime_error("line " + std::to_string(lineno) +
                                 ": expected key = value");
      }
      const std::string key = trim(t.substr(0, eq));
      const std::string value = trim(t.substr(eq + 1));
      if (key.empty()) {
        throw std::runtime_error("line " + std::to_string(lineno) +
                                 ": empty key");
      }
      cfg.values_[section.empty() ? key : section + "." + key] = value;
    }
    return cfg;
  }

  void set(const std::string& key, const std::string& value) {
    values_[key] = value;
  }

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  std::string get_string(const std::string& key,
                         const std::string& fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
  }

  double get_double(const std::string& key, double fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    return parse_double(it->second, key);
  }

  long long get_int(const std::string& key, long long fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    char* end = nullptr;
    const long long v = std::strtoll(it->second.c_str(), &end, 10);
    if (end == it->second.c_str() || *end != '\0') {
      throw std::runtime_error("config key " + key + ": not an integer");
    }
    return v;
  }

  // Comma list "0.1, 0.25" or range "lo:hi:step".
  std::vector<double> get_double_list(const std::string& key,
                                      std::vector<double> fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    return parse_double_list(it->second, key);
  }

  std::vector<std::string> get_string_list(
      const std::string& key, std::vector<std::string> fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    std::vector<std::string> out;
    std::stringstream ss(it->second);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      const std::string v = trim(tok);
      if (!v.empty()) out.push_back(v);
    }
    return out;
  }

  static std::vector<double> parse_double_list(const std::string& text,
                                               const std::string& key) {
    std::vector<double> out;
    if (text.find(':') != std::string::npos) {
      std::stringstream ss(text);
      std::string a, b, c;
      if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') ||
          !std::getline(ss, c)) {
        throw std::runtime_error("config key " + key + ": bad range syntax");
      }
      const double lo = parse_double(trim(a), key);
      const double hi = parse_double(trim(b), key);
      const double step = parse_double(trim(c), key);
      if (!(step > 0.0) || hi < lo) {
        throw std::runtime_error("config key " + key + ": bad range bounds");
      }
      const int count = static_cast<int>((hi - lo) / step + 1.5);
      for (int i = 0; i < count; ++i) {
        double v = lo + i * step;
        if (std::abs(v) < 0.5 * step) v = 0.0;  // land exactly on zero
        out.push_back(v);
      }
      return out;
    }
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      const std::string v = trim(tok);
      if (!v.empty()) out.push_back(parse_double(v, key));
    }
    return out;
  }

 private:
  static std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
  }

  static std::string strip_comment(const std::string& s) {
    const auto pos = s.find('#');
    return trim(pos == std::string::npos ? s : s.substr(0, pos));
  }

  static double parse_double(const std::string& s, const std::string& key) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0') {
      throw std::runtime_error("config key " + key + ": not a number: '" + s +
                               "'");
    }
    return v;
  }

  std::map<std::string, std::string> values_;
};

}  // namespace upecli
