#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace longweave {

// Raised when an LLM response does not follow the markdown answer format its
// prompt demanded (missing heading, malformed verdict, broken numbering).
struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

// Heading comparison is tolerant of the cosmetics LLMs vary — leading '#'
// runs, bold markers, casing, whitespace, trailing ':'/'?'/'.'/'!' — while
// the heading words themselves must match exactly.
std::string normalize_heading(std::string_view line);
bool is_heading_line(std::string_view line);

// Content of the section introduced by `heading` (any heading level), up to
// the next heading line. Trimmed. nullopt when the heading is absent.
std::optional<std::string> find_section(const std::string& text, const std::string& heading);
// Same, but a missing heading is a ParseError naming it.
std::string require_section(const std::string& text, const std::string& heading);

// Parse a Yes/No verdict section: leading markdown decoration and whitespace
// are skipped, then the first word must read Yes or No (case-insensitive).
bool parse_yes_no(const std::string& section_content, const std::string& heading_for_error);

} // namespace longweave
