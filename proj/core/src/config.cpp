#include "ipfcsim/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "ipfcsim/errors.hpp"

namespace ipfcsim {

namespace {

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

}  // namespace

double parse_double(const std::string& token, const std::string& context) {
  try {
    size_t used = 0;
    double v = std::stod(token, &used);
    if (used != token.size()) throw std::invalid_argument(token);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("expected a number for " + context + ", got '" + token + "'");
  }
}

Config Config::parse(const std::string& text, const std::string& origin) {
  Config cfg;
  cfg.text_ = text;
  cfg.origin_ = origin;
  std::istringstream is(text);
  std::string line;
  std::string current;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError(origin + ":" + std::to_string(lineno) + ": malformed section header");
      }
      current = trim(line.substr(1, line.size() - 2));
      if (current.empty()) {
        throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty section name");
      }
      cfg.sections_[current];  // section may legitimately stay empty
      continue;
    }
    if (current.empty()) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": entry before any [section]");
    }
    auto& sec = cfg.sections_[current];
    if (auto eq = line.find('='); eq != std::string::npos) {
      std::string key = trim(line.substr(0, eq));
      std::string value = trim(line.substr(eq + 1));
      if (key.empty()) {
        throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
      }
      sec.values[key] = value;
    } else {
      sec.rows.push_back(split_ws(line));
    }
  }
  return cfg;
}

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

bool Config::has_section(const std::string& name) const { return sections_.count(name) != 0; }

const Config::Section& Config::section(const std::string& name) const {
  auto it = sections_.find(name);
  if (it == sections_.end()) {
    throw ConfigError(origin_ + ": missing required section [" + name + "]");
  }
  return it->second;
}

const Config::Section* Config::find_section(const std::string& name) const {
  auto it = sections_.find(name);
  return it == sections_.end() ? nullptr : &it->second;
}

std::string Config::get_string(const std::string& sec, const std::string& key) const {
  const auto& s = section(sec);
  auto it = s.values.find(key);
  if (it == s.values.end()) {
    throw ConfigError(origin_ + ": missing key '" + key + "' in section [" + sec + "]");
  }
  return it->second;
}

std::string Config::get_string(const std::string& sec, const std::string& key,
                               const std::string& fallback) const {
  const auto* s = find_section(sec);
  if (!s) return fallback;
  auto it = s->values.find(key);
  return it == s->values.end() ? fallback : it->second;
}

double Config::get_double(const std::string& sec, const std::string& key) const {
  return parse_double(get_string(sec, key), "[" + sec + "] " + key);
}

double Config::get_double(const std::string& sec, const std::string& key, double fallback) const {
  const auto* s = find_section(sec);
  if (!s) return fallback;
  auto it = s->values.find(key);
  if (it == s->values.end()) return fallback;
  return parse_double(it->second, "[" + sec + "] " + key);
}

bool Config::get_bool(const std::string& sec, const std::string& key, bool fallback) const {
  std::string v = get_string(sec, key, fallback ? "true" : "false");
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(origin_ + ": expected a boolean for [" + sec + "] " + key + ", got '" + v + "'");
}

}  // namespace ipfcsim
