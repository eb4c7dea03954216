#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace longweave {

// Minimal INI reader: [section] headers, key = value pairs, # and ;
// comments. Values keep inner whitespace; edges trimmed.
class IniFile {
 public:
  static IniFile parse_file(const std::filesystem::path& path);
  static IniFile parse_string(const std::string& content, const std::string& origin = "<string>");

  bool has_section(const std::string& section) const;
  std::vector<std::string> sections_with_prefix(const std::string& prefix) const;

  std::optional<std::string> get(const std::string& section, const std::string& key) const;
  std::string get_or(const std::string& section, const std::string& key,
                     const std::string& fallback) const;
  std::string require(const std::string& section, const std::string& key) const;

  long long require_int(const std::string& section, const std::string& key) const;
  long long get_int_or(const std::string& section, const std::string& key, long long fallback) const;
  double get_double_or(const std::string& section, const std::string& key, double fallback) const;
  bool get_bool_or(const std::string& section, const std::string& key, bool fallback) const;

  // comma-separated value -> trimmed items
  std::vector<std::string> get_list_or(const std::string& section, const std::string& key,
                                       const std::vector<std::string>& fallback) const;

  const std::map<std::string, std::map<std::string, std::string>>& data() const { return data_; }

 private:
  std::string origin_;
  std::map<std::string, std::map<std::string, std::string>> data_;
};

} // namespace longweave
