#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ipfcsim {

// Plain-text section/key-value format shared by grid and scenario files.
//
//   [section]
//   key = value          # key-value entry
//   a b c                # whitespace-separated record row
//
// '#' starts a comment.  Section names may repeat; entries accumulate.
class Config {
 public:
  struct Section {
    std::map<std::string, std::string> values;
    std::vector<std::vector<std::string>> rows;
  };

  static Config parse(const std::string& text, const std::string& origin = "<string>");
  static Config parse_file(const std::string& path);

  bool has_section(const std::string& name) const;
  const Section& section(const std::string& name) const;  // throws ConfigError
  const Section* find_section(const std::string& name) const;

  std::string get_string(const std::string& sec, const std::string& key) const;
  std::string get_string(const std::string& sec, const std::string& key,
                         const std::string& fallback) const;
  double get_double(const std::string& sec, const std::string& key) const;
  double get_double(const std::string& sec, const std::string& key, double fallback) const;
  bool get_bool(const std::string& sec, const std::string& key, bool fallback) const;

  const std::string& text() const { return text_; }
  const std::string& origin() const { return origin_; }

 private:
  std::map<std::string, Section> sections_;
  std::string text_;
  std::string origin_;
};

double parse_double(const std::string& token, const std::string& context);

}  // namespace ipfcsim
