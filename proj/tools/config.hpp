#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace photonfluid::cli {

enum class ValueType { number, integer, boolean, text, number_list };

struct Parameter {
  std::string key;  // "section.name"
  ValueType type;
  std::string fallback;
  std::string help;
};

/// Every parameter the tool understands, with its default.
const std::vector<Parameter>& schema();

/// Resolved configuration: defaults, then the INI file, then dotted overrides.
/// Values are stored in canonical form so equal settings digest equally.
class Config {
 public:
  Config();

  void merge_file(const std::filesystem::path& path);
  void set(const std::string& key, const std::string& value);
  void apply_override(const std::string& assignment);  // "section.key=value"

  double number(const std::string& key) const;
  long integer(const std::string& key) const;
  bool flag(const std::string& key) const;
  const std::string& text(const std::string& key) const;
  std::vector<double> numbers(const std::string& key) const;

  /// SHA-256 over "key=value" lines of the given sections.
  std::string digest(const std::vector<std::string>& sections) const;
  nlohmann::json to_json(const std::vector<std::string>& sections) const;
  std::string to_ini(const std::vector<std::string>& sections) const;

 private:
  const Parameter& lookup(const std::string& key) const;
  std::map<std::string, std::string> values_;
};

}  // namespace photonfluid::cli
