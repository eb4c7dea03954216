#include "longweave/ini.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "longweave/text.hpp"

namespace longweave {

IniFile IniFile::parse_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path.string());
  std::ostringstream oss;
  oss << in.rdbuf();
  return parse_string(oss.str(), path.string());
}

IniFile IniFile::parse_string(const std::string& content, const std::string& origin) {
  IniFile ini;
  ini.origin_ = origin;
  std::string section;
  std::size_t line_no = 0;
  for (const std::string& raw : split_lines(content)) {
    ++line_no;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::runtime_error(origin + ":" + std::to_string(line_no) + ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      ini.data_[section]; // section may stay empty
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(origin + ":" + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw std::runtime_error(origin + ":" + std::to_string(line_no) + ": empty key");
    ini.data_[section][key] = value;
  }
  return ini;
}

bool IniFile::has_section(const std::string& section) const {
  return data_.count(section) > 0;
}

std::vector<std::string> IniFile::sections_with_prefix(const std::string& prefix) const {
  std::vector<std::string> out;
  for (const auto& [name, _] : data_) {
    if (name.rfind(prefix, 0) == 0) out.push_back(name);
  }
  return out;
}

std::optional<std::string> IniFile::get(const std::string& section, const std::string& key) const {
  auto sit = data_.find(section);
  if (sit == data_.end()) return std::nullopt;
  auto kit = sit->second.find(key);
  if (kit == sit->second.end()) return std::nullopt;
  return kit->second;
}

std::string IniFile::get_or(const std::string& section, const std::string& key,
                            const std::string& fallback) const {
  auto v = get(section, key);
  return v ? *v : fallback;
}

std::string IniFile::require(const std::string& section, const std::string& key) const {
  auto v = get(section, key);
  if (!v)
    throw std::runtime_error(origin_ + ": missing required key [" + section + "] " + key);
  return *v;
}

long long IniFile::require_int(const std::string& section, const std::string& key) const {
  const std::string v = require(section, key);
  try {
    return std::stoll(v);
  } catch (...) {
    throw std::runtime_error(origin_ + ": [" + section + "] " + key + " is not an integer: " + v);
  }
}

long long IniFile::get_int_or(const std::string& section, const std::string& key,
                              long long fallback) const {
  auto v = get(section, key);
  if (!v) return fallback;
  try {
    return std::stoll(*v);
  } catch (...) {
    throw std::runtime_error(origin_ + ": [" + section + "] " + key + " is not an integer: " + *v);
  }
}

double IniFile::get_double_or(const std::string& section, const std::string& key,
                              double fallback) const {
  auto v = get(section, key);
  if (!v) return fallback;
  try {
    return std::stod(*v);
  } catch (...) {
    throw std::runtime_error(origin_ + ": [" + section + "] " + key + " is not a number: " + *v);
  }
}

bool IniFile::get_bool_or(const std::string& section, const std::string& key, bool fallback) const {
  auto v = get(section, key);
  if (!v) return fallback;
  const std::string s = to_lower(*v);
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw std::runtime_error(origin_ + ": [" + section + "] " + key + " is not a boolean: " + *v);
}

std::vector<std::string> IniFile::get_list_or(const std::string& section, const std::string& key,
                                              const std::vector<std::string>& fallback) const {
  auto v = get(section, key);
  if (!v) return fallback;
  std::vector<std::string> out;
  std::string cur;
  for (char c : *v) {
    if (c == ',') {
      std::string item = trim(cur);
      if (!item.empty()) out.push_back(item);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  std::string item = trim(cur);
  if (!item.empty()) out.push_back(item);
  return out;
}

} // namespace longweave
