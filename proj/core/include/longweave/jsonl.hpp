#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

namespace longweave {

using Json = nlohmann::ordered_json;

// Parse error with a file:line locator.
struct JsonlError : std::runtime_error {
  JsonlError(const std::string& file, std::size_t line, const std::string& what_)
      : std::runtime_error(file + ":" + std::to_string(line) + ": " + what_),
        line_no(line) {}
  std::size_t line_no;
};

std::string read_file(const std::filesystem::path& path);

// Write via temp file + rename so readers never observe partial content.
void atomic_write_file(const std::filesystem::path& path, const std::string& content);

// One parsed object per nonempty line; blank lines skipped.
std::vector<Json> read_jsonl(const std::filesystem::path& path);

// fn(record, 1-based line number)
void for_each_jsonl(const std::filesystem::path& path,
                    const std::function<void(const Json&, std::size_t)>& fn);

void write_jsonl_atomic(const std::filesystem::path& path, const std::vector<Json>& records);

void append_jsonl(const std::filesystem::path& path, const Json& record);

std::size_t count_lines(const std::filesystem::path& path);

} // namespace longweave
