#include "longweave/jsonl.hpp"

#include <fstream>
#include <sstream>

#ifdef __unix__
#include <unistd.h>
#endif

namespace longweave {

namespace fs = std::filesystem;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path.string());
  std::ostringstream oss;
  oss << in.rdbuf();
  return oss.str();
}

void atomic_write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
#ifdef __unix__
  const fs::path tmp = path.string() + ".tmp." + std::to_string(::getpid());
#else
  const fs::path tmp = path.string() + ".tmp";
#endif
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for write: " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::vector<Json> read_jsonl(const fs::path& path) {
  std::vector<Json> out;
  for_each_jsonl(path, [&](const Json& j, std::size_t) { out.push_back(j); });
  return out;
}

void for_each_jsonl(const fs::path& path,
                    const std::function<void(const Json&, std::size_t)>& fn) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path.string());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Json j = Json::parse(line, nullptr, false);
    if (j.is_discarded())
      throw JsonlError(path.string(), line_no, "invalid JSON record");
    fn(j, line_no);
  }
}

void write_jsonl_atomic(const fs::path& path, const std::vector<Json>& records) {
  std::string buf;
  for (const auto& r : records) {
    buf += r.dump();
    buf.push_back('\n');
  }
  atomic_write_file(path, buf);
}

void append_jsonl(const fs::path& path, const Json& record) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw std::runtime_error("cannot open for append: " + path.string());
  out << record.dump() << "\n";
}

std::size_t count_lines(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path.string());
  std::size_t n = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") != std::string::npos) ++n;
  }
  return n;
}

} // namespace longweave
