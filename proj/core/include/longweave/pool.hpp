#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "longweave/jsonl.hpp"
#include "longweave/llm.hpp"
#include "longweave/prompts.hpp"
#include "longweave/rng.hpp"
#include "longweave/tokenizer.hpp"

namespace longweave {

struct RawPassage {
  std::string source_ref; // "path:line"
  std::string text;
};

struct IngestResult {
  std::vector<RawPassage> passages;
  long long dropped_short = 0;
};

// Plain-text files are split on blank lines (source_ref points at each
// paragraph's first line); .jsonl files must carry a "text" field per line.
// Passages under min_words whitespace words are dropped and counted.
IngestResult ingest_corpus(const std::vector<std::filesystem::path>& paths, int min_words = 20);

struct DistractorPassage {
  std::string id; // sha256 of the rewritten text
  std::string source_ref;
  std::string text;
  long long token_count = 0;

  Json to_json() const;
  static DistractorPassage from_json(const Json& obj);
};

DistractorPassage rewrite_passage(LlmClient& client, const PromptLibrary& prompts,
                                  const std::string& model, const RawPassage& raw,
                                  const Tokenizer& tokenizer, int max_tokens = 1024);

// Set semantics by text digest: insertion order never matters, passages()
// is always sorted by id, so samples depend only on (contents, seed).
class DistractorPool {
 public:
  // false when the id (i.e. identical rewritten text) is already present
  bool insert(DistractorPassage p);
  std::size_t size() const { return by_id_.size(); }
  const std::vector<DistractorPassage>& passages() const;
  long long total_tokens(const std::set<std::string>& exclude = {}) const;

  static DistractorPool load_jsonl(const std::filesystem::path& path);
  void save_jsonl(const std::filesystem::path& path) const;

 private:
  std::map<std::string, DistractorPassage> by_id_;
  mutable std::vector<DistractorPassage> ordered_; // rebuilt lazily
  mutable bool dirty_ = true;
};

// Sampling walked a seeded shuffle and no passage subset reaching min_tokens
// fit inside the budget.
struct PoolShortfall : std::runtime_error {
  long long deficit;
  PoolShortfall(const std::string& msg, long long deficit_)
      : std::runtime_error(msg), deficit(deficit_) {}
};

// Walks the pool in seeded-shuffle order, taking every passage that still
// fits the budget; the result never exceeds token_budget and never repeats a
// passage. Throws PoolShortfall when the walk ends below min_tokens. A zero
// budget yields an empty sample.
std::vector<DistractorPassage> sample_distractors(const DistractorPool& pool,
                                                  long long token_budget, Rng& rng,
                                                  const std::set<std::string>& exclude = {},
                                                  long long min_tokens = 0);

} // namespace longweave
