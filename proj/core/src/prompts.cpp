#include "longweave/prompts.hpp"

#include <cctype>
#include <set>
#include <stdexcept>

#include "longweave/jsonl.hpp"

namespace longweave {

PromptLibrary PromptLibrary::load_dir(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir))
    throw std::runtime_error("prompt directory not found: " + dir.string());
  PromptLibrary lib;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".txt") continue;
    lib.templates_[entry.path().stem().string()] = read_file(entry.path());
  }
  if (lib.templates_.empty())
    throw std::runtime_error("prompt directory has no .txt templates: " + dir.string());
  return lib;
}

const std::string& PromptLibrary::raw(const std::string& name) const {
  auto it = templates_.find(name);
  if (it == templates_.end()) throw std::runtime_error("unknown prompt template: " + name);
  return it->second;
}

std::string PromptLibrary::render(const std::string& name,
                                  const std::map<std::string, std::string>& vars) const {
  return substitute(raw(name), vars, name);
}

std::vector<std::string> PromptLibrary::names() const {
  std::vector<std::string> out;
  for (const auto& [name, _] : templates_) out.push_back(name);
  return out;
}

std::string PromptLibrary::substitute(const std::string& tmpl,
                                      const std::map<std::string, std::string>& vars,
                                      const std::string& origin) {
  std::string out;
  out.reserve(tmpl.size());
  std::set<std::string> used;
  std::size_t i = 0;
  while (i < tmpl.size()) {
    const char c = tmpl[i];
    if (c == '{') {
      if (i + 1 < tmpl.size() && tmpl[i + 1] == '{') {
        out.push_back('{');
        i += 2;
        continue;
      }
      std::size_t j = i + 1;
      while (j < tmpl.size() &&
             (std::isalnum(static_cast<unsigned char>(tmpl[j])) || tmpl[j] == '_'))
        ++j;
      if (j >= tmpl.size() || tmpl[j] != '}' || j == i + 1)
        throw std::runtime_error(origin + ": stray '{' at offset " + std::to_string(i) +
                                 " (use {{ for a literal brace)");
      const std::string name = tmpl.substr(i + 1, j - i - 1);
      auto it = vars.find(name);
      if (it == vars.end())
        throw std::runtime_error(origin + ": no value supplied for placeholder {" + name + "}");
      out += it->second;
      used.insert(name);
      i = j + 1;
      continue;
    }
    if (c == '}' && i + 1 < tmpl.size() && tmpl[i + 1] == '}') {
      out.push_back('}');
      i += 2;
      continue;
    }
    out.push_back(c);
    ++i;
  }
  for (const auto& [name, _] : vars) {
    if (!used.count(name))
      throw std::runtime_error(origin + ": value supplied for {" + name +
                               "} but the template has no such placeholder");
  }
  return out;
}

} // namespace longweave
