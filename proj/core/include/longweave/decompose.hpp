#pragma once

#include <optional>
#include <string>
#include <vector>

#include "longweave/corpus.hpp"
#include "longweave/llm.hpp"
#include "longweave/prompts.hpp"

namespace longweave {

// A seed question split into a background passage and a standalone inquiry,
// linked by anchor keywords.
struct DecomposedQuestion {
  std::string seed_id;
  std::string background; // facts only, options excluded
  std::string inquiry;    // question + options, anchored to the background
  std::vector<std::string> anchors;
  std::string analysis; // the model's own reasoning about the split
  bool meets_requirements = false;
  bool meaning_preserved = false;
  int sample_index = 0; // 1-based sample that was retained

  Json to_json() const;
  static DecomposedQuestion from_json(const Json& obj);
};

// Raw fields read off one response, before mechanical checks.
struct ParsedDecomposition {
  std::string analysis;
  std::string background;
  std::string inquiry;
  bool meets_requirements = false;
  bool meaning_preserved = false;
};

// One sampling attempt's fate, kept for reject files and pass-rate audits.
struct DecomposeSampleRecord {
  int sample_index = 0;
  bool parsed = false;
  std::string parse_error;
  bool meets_requirements = false;
  bool meaning_preserved = false;
  bool anchors_ok = false;
  bool options_ok = false;
  bool background_clean = false;
  Json to_json() const;
};

struct DecomposeOutcome {
  std::optional<DecomposedQuestion> result;
  std::vector<DecomposeSampleRecord> history;
  bool ok() const { return result.has_value(); }
};

std::string build_decomposition_prompt(const PromptLibrary& prompts, const SeedQuestion& q);

// Throws ParseError on a missing section or malformed verdict.
ParsedDecomposition parse_decomposition(const std::string& response_text);

// Mechanical invariants, checked without trusting the LLM's verdicts.
bool inquiry_preserves_options(const std::string& inquiry, const SeedQuestion& q);
bool background_free_of_options(const std::string& background, const SeedQuestion& q);

// Samples the decomposition prompt up to max_samples times (sequentially,
// distinct cache ordinals) and returns the first sample that passes both LLM
// verdicts and every mechanical check; otherwise a Failure carrying the full
// sample history. Transport errors propagate as BackendError.
DecomposeOutcome decompose(LlmClient& client, const PromptLibrary& prompts,
                           const std::string& model, const SeedQuestion& q, int max_samples = 5,
                           double temperature = 0.7, int max_tokens = 2048);

} // namespace longweave
