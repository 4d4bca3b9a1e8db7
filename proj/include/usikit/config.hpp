#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace usikit {

// Small TOML subset: [section] headers, key = value with strings, integers,
// floats, booleans and flat arrays of those, '#' comments. Keys may be bare or
// quoted.
class ConfigFile {
 public:
  using Value = std::variant<std::string, std::int64_t, double, bool, std::vector<std::string>, std::vector<double>>;
  // section -> key -> value; top-level keys live in section "".
  using Table = std::map<std::string, std::map<std::string, Value>>;

  static ConfigFile parse(const std::string& text, const std::string& origin = "<config>");
  static ConfigFile load(const std::filesystem::path& path);

  const Table& table() const { return table_; }
  const std::map<std::string, Value>* section(const std::string& name) const;

  std::optional<std::string> get_string(const std::string& section, const std::string& key) const;
  std::optional<std::int64_t> get_int(const std::string& section, const std::string& key) const;
  std::optional<std::vector<std::string>> get_strings(const std::string& section, const std::string& key) const;
  std::optional<std::vector<double>> get_numbers(const std::string& section, const std::string& key) const;

 private:
  Table table_;
  std::string origin_;
};

}  // namespace usikit
