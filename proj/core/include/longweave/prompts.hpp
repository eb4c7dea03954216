#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace longweave {

// Loads *.txt prompt templates from a directory; each template is addressed
// by its filename stem (e.g. "decompose_v1"). Placeholders are written
// {name}; substitution is strict in both directions — a placeholder without
// a value and a value without a placeholder are both errors, so template and
// call site cannot silently drift apart. "{{" and "}}" escape literal braces.
class PromptLibrary {
 public:
  static PromptLibrary load_dir(const std::filesystem::path& dir);

  bool has(const std::string& name) const { return templates_.count(name) > 0; }
  const std::string& raw(const std::string& name) const;
  std::string render(const std::string& name,
                     const std::map<std::string, std::string>& vars) const;
  std::vector<std::string> names() const;

  static std::string substitute(const std::string& tmpl,
                                const std::map<std::string, std::string>& vars,
                                const std::string& origin = "<template>");

 private:
  std::map<std::string, std::string> templates_;
};

} // namespace longweave
