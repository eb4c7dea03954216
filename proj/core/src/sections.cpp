#include "longweave/sections.hpp"

#include <cctype>

#include "longweave/text.hpp"

namespace longweave {

bool is_heading_line(std::string_view line) {
  const std::string t = trim(line);
  return !t.empty() && t[0] == '#';
}

std::string normalize_heading(std::string_view line) {
  std::string t = trim(line);
  std::size_t i = 0;
  while (i < t.size() && t[i] == '#') ++i;
  t = t.substr(i);
  std::string cleaned;
  cleaned.reserve(t.size());
  for (char c : t)
    if (c != '*' && c != '_' && c != '`') cleaned.push_back(c);
  cleaned = normalize_ws(cleaned);
  while (!cleaned.empty()) {
    const char back = cleaned.back();
    if (back == ':' || back == '?' || back == '!' || back == '.')
      cleaned.pop_back();
    else
      break;
  }
  return to_lower(trim(cleaned));
}

std::optional<std::string> find_section(const std::string& text, const std::string& heading) {
  const std::string target = normalize_heading(heading);
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (!is_heading_line(lines[i]) || normalize_heading(lines[i]) != target) continue;
    std::string content;
    for (std::size_t j = i + 1; j < lines.size() && !is_heading_line(lines[j]); ++j) {
      if (!content.empty()) content.push_back('\n');
      content += lines[j];
    }
    return trim(content);
  }
  return std::nullopt;
}

std::string require_section(const std::string& text, const std::string& heading) {
  auto content = find_section(text, heading);
  if (!content) throw ParseError("response is missing section heading: " + heading);
  return *content;
}

bool parse_yes_no(const std::string& section_content, const std::string& heading_for_error) {
  std::size_t i = 0;
  const std::string& s = section_content;
  auto is_decoration = [](char c) {
    return c == '*' || c == '_' || c == '>' || c == '-' || c == '#' || c == '`' ||
           std::isspace(static_cast<unsigned char>(c)) != 0;
  };
  while (i < s.size() && is_decoration(s[i])) ++i;
  std::string word;
  while (i < s.size() && std::isalpha(static_cast<unsigned char>(s[i])))
    word.push_back(s[i++]);
  const std::string lowered = to_lower(word);
  if (lowered == "yes") return true;
  if (lowered == "no") return false;
  throw ParseError("verdict under '" + heading_for_error + "' is neither Yes nor No: \"" +
                   trim(s.substr(0, 40)) + "\"");
}

} // namespace longweave
