#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "longweave/jsonl.hpp"
#include "longweave/llm.hpp"
#include "longweave/prompts.hpp"
#include "longweave/rational.hpp"

namespace longweave {

enum class Category { reading_comprehension, logical_inference, math_word_problem };
std::string to_string(Category c);
Category category_from_string(const std::string& s);

// A short multiple-choice reasoning question: the unit the whole pipeline
// expands into long-context variants.
struct SeedQuestion {
  std::string id;
  Category category = Category::reading_comprehension;
  std::string stem;
  std::vector<std::pair<std::string, std::string>> options; // ordered label -> text
  std::string answer;    // one of the option labels
  std::string rationale; // ground-truth reasoning chain
  std::optional<int> step_count;
  std::string source;

  // Throws with a message naming the offending field.
  void validate() const;
  const std::string& option_text(const std::string& label) const;
  std::string options_block() const;  // "A. ...\nB. ..." one option per line
  std::string question_block() const; // stem + newline + options_block

  Json to_json() const;
  static SeedQuestion from_json(const Json& obj);
};

enum class SeedFormat { jsonl };

std::vector<SeedQuestion> import_seed_questions(const std::filesystem::path& path,
                                                SeedFormat format = SeedFormat::jsonl);
void export_seed_questions(const std::filesystem::path& path,
                           const std::vector<SeedQuestion>& questions);

struct StepHistogram {
  std::map<int, long long> buckets;
  Rational mean_steps{0, 1}; // meaningful only when !empty
  bool empty = true;
  long long total() const;
};

// Outcome of LLM step-count judging: `steps` unset means every attempt's
// final line failed to parse as a bare integer and the question should be
// quarantined, not dropped.
struct StepCountResult {
  std::optional<int> steps;
  int attempts = 0;
  std::vector<std::string> responses; // raw response text per attempt
};

// The judged count from a response: its last nonempty line must be a bare
// integer (allowing surrounding whitespace and '*'/'.' decoration).
std::optional<int> parse_step_count(const std::string& response_text);

std::string build_step_count_prompt(const PromptLibrary& prompts, const SeedQuestion& q);

// Attempt 1 runs greedy; later attempts resample at `retry_temperature` with
// distinct sample ordinals so reruns replay the same sequence.
StepCountResult count_reasoning_steps(LlmClient& client, const PromptLibrary& prompts,
                                      const std::string& model, const SeedQuestion& q,
                                      int max_attempts = 3, double retry_temperature = 0.7,
                                      int max_tokens = 512);

std::vector<SeedQuestion> filter_by_steps(const std::vector<SeedQuestion>& questions,
                                          int min_steps = 2);
StepHistogram step_histogram(const std::vector<SeedQuestion>& questions);

} // namespace longweave
