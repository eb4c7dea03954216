#pragma once

#include <optional>
#include <string>
#include <vector>

#include "longweave/decompose.hpp"
#include "longweave/llm.hpp"
#include "longweave/prompts.hpp"

namespace longweave {

// The background rewritten as independent ~200-word clue passages, each
// carrying one key information point and at least one anchor keyword.
struct ExpandedContext {
  std::string seed_id;
  std::vector<std::string> passages;
  std::string genre;
  bool key_info_complete = false;
  bool answer_affecting = true; // retained records require false
  bool all_related = false;
  int sample_index = 0;

  std::vector<std::size_t> word_counts() const;

  Json to_json() const;
  static ExpandedContext from_json(const Json& obj);
};

struct VerifyVerdicts {
  bool key_info_complete = false;
  bool answer_affecting = true;
  bool all_related = false;
  bool retainable() const { return key_info_complete && !answer_affecting && all_related; }
};

struct ExpandSampleRecord {
  int sample_index = 0;
  bool parsed = false;
  std::string error;
  std::size_t passage_count = 0;
  bool anchors_ok = false;
  bool verified = false; // a verification verdict was obtained
  VerifyVerdicts verdicts;
  Json to_json() const;
};

struct ExpandOutcome {
  std::optional<ExpandedContext> result;
  std::vector<ExpandSampleRecord> history;
  bool ok() const { return result.has_value(); }
};

// The default genre list used to style expansions when configuration names
// none; any list can be supplied via config.
const std::vector<std::string>& default_genres();

std::string build_expansion_prompt(const PromptLibrary& prompts, const DecomposedQuestion& d,
                                   const std::string& genre);

// Splits the "Expanded material" section on line-initial "1.", "2." ...
// markers; numbering must start at 1 and be consecutive. Markers stripped.
std::vector<std::string> parse_expansion(const std::string& response_text);

std::string build_verification_prompt(const PromptLibrary& prompts, const std::string& background,
                                      const std::string& inquiry,
                                      const std::vector<std::string>& passages);

VerifyVerdicts parse_verification(const std::string& response_text);

VerifyVerdicts verify_expansion(LlmClient& client, const PromptLibrary& prompts,
                                const std::string& model, const std::string& background,
                                const std::string& inquiry,
                                const std::vector<std::string>& passages, double temperature,
                                int sample_index, int max_tokens = 1024);

// Generation + verification per sample (at most 2·max_samples backend calls);
// the first sample whose passages all contain an anchor AND whose verdicts
// read Yes/No/Yes is retained. A passage set failing the anchor check fails
// the sample before verification is attempted.
ExpandOutcome expand(LlmClient& client, const PromptLibrary& prompts, const std::string& model,
                     const DecomposedQuestion& d, const std::string& genre, int max_samples = 5,
                     double temperature = 0.7, int max_tokens = 4096);

} // namespace longweave
