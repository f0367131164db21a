#pragma once

// Flat "section.key = value" run configuration. Blank lines and lines whose
// first non-blank character is '#' are ignored.

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fwcli {

// Any problem with the configuration text; maps to exit status 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class RunConfig {
 public:
  static RunConfig parse(const std::string& text, const std::string& origin = "config");
  static RunConfig load(const std::string& path);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::map<std::string, std::string>& entries() const { return values_; }

  std::string text(const std::string& key) const;
  std::string text_or(const std::string& key, const std::string& fallback) const;
  double number(const std::string& key) const;
  double number_or(const std::string& key, double fallback) const;
  long integer(const std::string& key) const;
  long integer_or(const std::string& key, long fallback) const;
  std::vector<std::string> list(const std::string& key) const;  // comma separated

  // Sorted one-level JSON object of the raw entries.
  std::string to_json() const;

 private:
  std::map<std::string, std::string> values_;
  std::string origin_;
};

const std::vector<std::string>& known_keys();

double parse_number(const std::string& key, const std::string& value);
long parse_integer(const std::string& key, const std::string& value);

}  // namespace fwcli
