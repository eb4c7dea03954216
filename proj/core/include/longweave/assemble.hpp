#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "longweave/corpus.hpp"
#include "longweave/decompose.hpp"
#include "longweave/expand.hpp"
#include "longweave/pool.hpp"
#include "longweave/prompts.hpp"
#include "longweave/rng.hpp"
#include "longweave/tokenizer.hpp"

namespace longweave {

enum class VariantKind { short_question, expanded, long_context };
enum class InquiryPosition { after_context, before_context };
enum class HopMode { multi_hop, single_hop };

std::string to_string(VariantKind k);
std::string to_string(InquiryPosition p);
std::string to_string(HopMode h);
VariantKind variant_kind_from_string(const std::string& s);
InquiryPosition inquiry_position_from_string(const std::string& s);
HopMode hop_mode_from_string(const std::string& s);

struct VariantSpec {
  VariantKind kind = VariantKind::short_question;
  long long target_tokens = 0; // long_context only
  InquiryPosition position = InquiryPosition::after_context;
  HopMode hop = HopMode::multi_hop;
  std::uint64_t rng_seed = 0;

  // "short" | "expanded" | "long-8192-after-multi"
  std::string label() const;
};

struct LayoutSlot {
  std::string role; // "clue" | "distractor"
  std::string ref;  // "clue:<index>" or distractor passage id
};

struct AssembledQuestion {
  std::string seed_id;
  VariantSpec spec;
  std::vector<LayoutSlot> layout;
  std::string prompt_text;
  long long token_count = 0;
  std::vector<int> clue_positions;

  std::string variant_id() const { return seed_id + "-" + spec.label(); }
};

struct AssembleError : std::runtime_error {
  explicit AssembleError(const std::string& msg) : std::runtime_error(msg) {}
};

std::size_t count_tokens(const std::string& text, const Tokenizer& tokenizer);

std::string render_short_prompt(const PromptLibrary& prompts, const std::string& question_block);
std::string render_context_prompt(const PromptLibrary& prompts, const std::string& context,
                                  const std::string& inquiry, InquiryPosition position);

// Builds one variant. kind=short renders the bare question; kind=expanded
// lays out the clue passages alone; kind=long_context samples distractors to
// fill target_tokens − clue tokens − template overhead, then places clues at
// seeded slots (scattered for multi_hop, one contiguous run for single_hop).
// Distractors containing any anchor keyword are excluded from the draw.
// Throws AssembleError when the target cannot fit clues+template, and
// PoolShortfall when the pool cannot reach the tolerance band.
AssembledQuestion assemble(const SeedQuestion& seed, const DecomposedQuestion& decomp,
                           const ExpandedContext& expanded, const DistractorPool& pool,
                           const VariantSpec& spec, const PromptLibrary& prompts,
                           const Tokenizer& tokenizer, double tolerance = 0.05);

// Every invariant re-checked from the finished artifact; empty result = valid.
std::vector<std::string> validate_assembled(const AssembledQuestion& aq,
                                            const ExpandedContext& expanded,
                                            const std::string& inquiry,
                                            const Tokenizer& tokenizer, double tolerance = 0.05);

struct QuestionBundle {
  SeedQuestion seed;
  DecomposedQuestion decomp;
  ExpandedContext expanded;
};

struct MatrixConfig {
  std::vector<long long> lengths;
  std::vector<InquiryPosition> positions;
  std::vector<HopMode> hops;
  std::uint64_t seed = 0;
  double tolerance = 0.05;
  bool inline_prompts = false;
};

struct MatrixResult {
  std::vector<Json> manifest; // one row per built variant
  std::vector<Json> errors;   // one row per failed variant, never aborting
};

// store_prompt(variant_id, prompt_text) -> path string recorded in the
// manifest; used only when !inline_prompts (inline mode embeds prompt_text).
using PromptSink = std::function<std::string(const std::string&, const std::string&)>;

std::uint64_t derive_variant_seed(std::uint64_t run_seed, const std::string& seed_id,
                                  const std::string& variant_label);

MatrixResult build_variant_matrix(const std::vector<QuestionBundle>& bundles,
                                  const DistractorPool& pool, const MatrixConfig& config,
                                  const PromptLibrary& prompts, const Tokenizer& tokenizer,
                                  const PromptSink& store_prompt);

} // namespace longweave
