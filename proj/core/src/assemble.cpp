#include "longweave/assemble.hpp"

#include <algorithm>
#include <cmath>

#include "longweave/anchors.hpp"
#include "longweave/digest.hpp"
#include "longweave/text.hpp"

namespace longweave {
namespace {

std::size_t count_occurrences(const std::string& haystack, const std::string& needle) {
  if (needle.empty()) return 0;
  std::size_t n = 0, pos = 0;
  while ((pos = haystack.find(needle, pos)) != std::string::npos) {
    ++n;
    pos += needle.size();
  }
  return n;
}

long long band_floor(long long target, double tolerance) {
  return static_cast<long long>(std::ceil(static_cast<double>(target) * (1.0 - tolerance)));
}

} // namespace

std::string to_string(VariantKind k) {
  switch (k) {
    case VariantKind::short_question: return "short";
    case VariantKind::expanded: return "expanded";
    case VariantKind::long_context: return "long";
  }
  throw std::runtime_error("unknown variant kind");
}

std::string to_string(InquiryPosition p) {
  return p == InquiryPosition::after_context ? "after" : "before";
}

std::string to_string(HopMode h) { return h == HopMode::multi_hop ? "multi" : "single"; }

VariantKind variant_kind_from_string(const std::string& s) {
  if (s == "short") return VariantKind::short_question;
  if (s == "expanded") return VariantKind::expanded;
  if (s == "long") return VariantKind::long_context;
  throw std::runtime_error("unknown variant kind: " + s);
}

InquiryPosition inquiry_position_from_string(const std::string& s) {
  if (s == "after" || s == "after_context") return InquiryPosition::after_context;
  if (s == "before" || s == "before_context") return InquiryPosition::before_context;
  throw std::runtime_error("unknown inquiry position: " + s + " (expected after or before)");
}

HopMode hop_mode_from_string(const std::string& s) {
  if (s == "multi" || s == "multi_hop") return HopMode::multi_hop;
  if (s == "single" || s == "single_hop") return HopMode::single_hop;
  throw std::runtime_error("unknown hop mode: " + s + " (expected multi or single)");
}

std::string VariantSpec::label() const {
  switch (kind) {
    case VariantKind::short_question: return "short";
    case VariantKind::expanded: return "expanded";
    case VariantKind::long_context:
      return "long-" + std::to_string(target_tokens) + "-" + to_string(position) + "-" +
             to_string(hop);
  }
  throw std::runtime_error("unknown variant kind");
}

std::size_t count_tokens(const std::string& text, const Tokenizer& tokenizer) {
  return tokenizer.count(text);
}

std::string render_short_prompt(const PromptLibrary& prompts, const std::string& question_block) {
  return prompts.render("eval_short_v1", {{"question", question_block}});
}

std::string render_context_prompt(const PromptLibrary& prompts, const std::string& context,
                                  const std::string& inquiry, InquiryPosition position) {
  const std::string tmpl =
      position == InquiryPosition::after_context ? "eval_context_v1" : "eval_context_qfirst_v1";
  return prompts.render(tmpl, {{"context", context}, {"final_question", inquiry}});
}

std::uint64_t derive_variant_seed(std::uint64_t run_seed, const std::string& seed_id,
                                  const std::string& variant_label) {
  std::uint64_t h = mix64(run_seed ^ sha256_prefix64(seed_id));
  h = mix64(h ^ sha256_prefix64(variant_label));
  return h;
}

AssembledQuestion assemble(const SeedQuestion& seed, const DecomposedQuestion& decomp,
                           const ExpandedContext& expanded, const DistractorPool& pool,
                           const VariantSpec& spec, const PromptLibrary& prompts,
                           const Tokenizer& tokenizer, double tolerance) {
  AssembledQuestion aq;
  aq.seed_id = seed.id;
  aq.spec = spec;

  if (spec.kind == VariantKind::short_question) {
    aq.prompt_text = render_short_prompt(prompts, seed.question_block());
    aq.token_count = static_cast<long long>(tokenizer.count(aq.prompt_text));
    return aq;
  }

  if (expanded.passages.empty())
    throw AssembleError("question '" + seed.id + "' has no clue passages to assemble");

  if (spec.kind == VariantKind::expanded) {
    std::string context;
    for (std::size_t i = 0; i < expanded.passages.size(); ++i) {
      if (i > 0) context += "\n\n";
      context += expanded.passages[i];
      aq.layout.push_back({"clue", "clue:" + std::to_string(i)});
      aq.clue_positions.push_back(static_cast<int>(i));
    }
    aq.prompt_text = render_context_prompt(prompts, context, decomp.inquiry, spec.position);
    aq.token_count = static_cast<long long>(tokenizer.count(aq.prompt_text));
    return aq;
  }

  // long_context
  const long long overhead = static_cast<long long>(
      tokenizer.count(render_context_prompt(prompts, "", decomp.inquiry, spec.position)));
  long long clue_tokens = 0;
  for (const auto& p : expanded.passages)
    clue_tokens += static_cast<long long>(tokenizer.count(p));

  const long long budget = spec.target_tokens - overhead - clue_tokens;
  if (budget < 0)
    throw AssembleError("target " + std::to_string(spec.target_tokens) +
                        " tokens is smaller than clues+template (" +
                        std::to_string(overhead + clue_tokens) + ") for question '" + seed.id +
                        "'");
  const long long min_distractor =
      std::max<long long>(0, band_floor(spec.target_tokens, tolerance) - overhead - clue_tokens);

  std::set<std::string> exclude;
  for (const auto& p : pool.passages())
    for (const auto& anchor : decomp.anchors)
      if (contains_anchor(p.text, anchor)) {
        exclude.insert(p.id);
        break;
      }

  Rng rng(spec.rng_seed);
  const auto distractors = sample_distractors(pool, budget, rng, exclude, min_distractor);

  const std::size_t c = expanded.passages.size();
  const std::size_t n = c + distractors.size();
  std::vector<std::size_t> clue_slots;
  if (spec.hop == HopMode::multi_hop) {
    clue_slots = rng.sample_indices(n, c);
  } else {
    const std::size_t start = static_cast<std::size_t>(rng.below(n - c + 1));
    for (std::size_t i = 0; i < c; ++i) clue_slots.push_back(start + i);
  }

  std::vector<bool> is_clue_slot(n, false);
  for (std::size_t i = 0; i < c; ++i) {
    is_clue_slot[clue_slots[i]] = true;
    aq.clue_positions.push_back(static_cast<int>(clue_slots[i]));
  }
  aq.layout.resize(n);
  std::string context;
  std::size_t clue_cursor = 0, distractor_cursor = 0;
  for (std::size_t slot = 0; slot < n; ++slot) {
    if (slot > 0) context += "\n\n";
    if (is_clue_slot[slot]) {
      aq.layout[slot] = {"clue", "clue:" + std::to_string(clue_cursor)};
      context += expanded.passages[clue_cursor++];
    } else {
      aq.layout[slot] = {"distractor", distractors[distractor_cursor].id};
      context += distractors[distractor_cursor++].text;
    }
  }

  aq.prompt_text = render_context_prompt(prompts, context, decomp.inquiry, spec.position);
  aq.token_count = static_cast<long long>(tokenizer.count(aq.prompt_text));

  if (aq.token_count > spec.target_tokens ||
      aq.token_count < band_floor(spec.target_tokens, tolerance))
    throw AssembleError("assembled token count " + std::to_string(aq.token_count) +
                        " fell outside [" +
                        std::to_string(band_floor(spec.target_tokens, tolerance)) + ", " +
                        std::to_string(spec.target_tokens) + "] for question '" + seed.id + "'");
  return aq;
}

std::vector<std::string> validate_assembled(const AssembledQuestion& aq,
                                            const ExpandedContext& expanded,
                                            const std::string& inquiry,
                                            const Tokenizer& tokenizer, double tolerance) {
  std::vector<std::string> violations;
  const auto& spec = aq.spec;

  if (static_cast<long long>(tokenizer.count(aq.prompt_text)) != aq.token_count)
    violations.push_back("recorded token_count does not match a recount of prompt_text");

  if (spec.kind == VariantKind::short_question) {
    if (!aq.layout.empty()) violations.push_back("short variant has a passage layout");
    return violations;
  }

  // exactly-once clue placement
  const std::size_t c = expanded.passages.size();
  std::vector<int> clue_seen(c, 0);
  for (std::size_t slot = 0; slot < aq.layout.size(); ++slot) {
    const auto& ls = aq.layout[slot];
    if (ls.role == "clue") {
      const std::size_t idx = std::stoul(ls.ref.substr(5));
      if (idx >= c) {
        violations.push_back("layout references clue " + ls.ref + " beyond passage count");
        continue;
      }
      ++clue_seen[idx];
      if (std::find(aq.clue_positions.begin(), aq.clue_positions.end(),
                    static_cast<int>(slot)) == aq.clue_positions.end())
        violations.push_back("clue slot " + std::to_string(slot) + " missing from clue_positions");
    }
  }
  for (std::size_t i = 0; i < c; ++i)
    if (clue_seen[i] != 1)
      violations.push_back("clue " + std::to_string(i) + " appears " +
                           std::to_string(clue_seen[i]) + " times in layout");
  if (aq.clue_positions.size() != c)
    violations.push_back("clue_positions size " + std::to_string(aq.clue_positions.size()) +
                         " != clue count " + std::to_string(c));

  // every clue text embedded exactly once
  const std::string norm_prompt = normalize_ws(aq.prompt_text);
  for (std::size_t i = 0; i < c; ++i) {
    const std::size_t occurrences =
        count_occurrences(norm_prompt, normalize_ws(expanded.passages[i]));
    if (occurrences != 1)
      violations.push_back("clue passage " + std::to_string(i) + " occurs " +
                           std::to_string(occurrences) + " times in prompt_text");
  }

  // inquiry exactly once, on the spec'd side of the passages
  const std::string norm_inquiry = normalize_ws(inquiry);
  if (count_occurrences(norm_prompt, norm_inquiry) != 1) {
    violations.push_back("inquiry does not occur exactly once in prompt_text");
  } else {
    const std::size_t inquiry_pos = norm_prompt.find(norm_inquiry);
    for (std::size_t i = 0; i < c; ++i) {
      const std::size_t p = norm_prompt.find(normalize_ws(expanded.passages[i]));
      if (p == std::string::npos) continue;
      if (spec.position == InquiryPosition::after_context && inquiry_pos < p)
        violations.push_back("inquiry precedes clue " + std::to_string(i) +
                             " despite after_context");
      if (spec.position == InquiryPosition::before_context && inquiry_pos > p)
        violations.push_back("inquiry follows clue " + std::to_string(i) +
                             " despite before_context");
    }
  }

  // ordering / contiguity
  std::vector<int> sorted_positions = aq.clue_positions;
  std::sort(sorted_positions.begin(), sorted_positions.end());
  if (std::adjacent_find(sorted_positions.begin(), sorted_positions.end()) !=
      sorted_positions.end())
    violations.push_back("duplicate clue positions");
  for (int pos : sorted_positions)
    if (pos < 0 || static_cast<std::size_t>(pos) >= aq.layout.size())
      violations.push_back("clue position " + std::to_string(pos) + " out of layout range");
  if (spec.kind == VariantKind::long_context && spec.hop == HopMode::single_hop &&
      !sorted_positions.empty()) {
    for (std::size_t i = 1; i < sorted_positions.size(); ++i)
      if (sorted_positions[i] != sorted_positions[i - 1] + 1) {
        violations.push_back("single_hop clue positions are not consecutive");
        break;
      }
  }

  if (spec.kind == VariantKind::long_context) {
    if (aq.token_count > spec.target_tokens)
      violations.push_back("token_count exceeds target");
    if (aq.token_count < band_floor(spec.target_tokens, tolerance))
      violations.push_back("token_count below tolerance band floor");
  }
  return violations;
}

MatrixResult build_variant_matrix(const std::vector<QuestionBundle>& bundles,
                                  const DistractorPool& pool, const MatrixConfig& config,
                                  const PromptLibrary& prompts, const Tokenizer& tokenizer,
                                  const PromptSink& store_prompt) {
  MatrixResult result;
  for (const auto& bundle : bundles) {
    std::vector<VariantSpec> specs;
    {
      VariantSpec s;
      s.kind = VariantKind::short_question;
      specs.push_back(s);
      s.kind = VariantKind::expanded;
      specs.push_back(s);
      for (long long length : config.lengths)
        for (InquiryPosition pos : config.positions)
          for (HopMode hop : config.hops) {
            VariantSpec ls;
            ls.kind = VariantKind::long_context;
            ls.target_tokens = length;
            ls.position = pos;
            ls.hop = hop;
            specs.push_back(ls);
          }
    }
    for (VariantSpec& spec : specs) {
      spec.rng_seed = derive_variant_seed(config.seed, bundle.seed.id, spec.label());
      const std::string variant_id = bundle.seed.id + "-" + spec.label();
      try {
        const AssembledQuestion aq = assemble(bundle.seed, bundle.decomp, bundle.expanded, pool,
                                              spec, prompts, tokenizer, config.tolerance);
        Json row;
        row["variant_id"] = variant_id;
        row["seed_id"] = bundle.seed.id;
        row["kind"] = to_string(spec.kind);
        if (spec.kind == VariantKind::long_context) {
          row["target_tokens"] = spec.target_tokens;
          row["position"] = to_string(spec.position);
          row["hop"] = to_string(spec.hop);
        }
        row["rng_seed"] = spec.rng_seed;
        row["token_count"] = aq.token_count;
        row["prompt_sha256"] = sha256_hex(aq.prompt_text);
        row["clue_positions"] = aq.clue_positions;
        Json layout = Json::array();
        for (const auto& slot : aq.layout) layout.push_back({{"role", slot.role}, {"ref", slot.ref}});
        row["layout"] = std::move(layout);
        if (config.inline_prompts)
          row["prompt_text"] = aq.prompt_text;
        else
          row["prompt_path"] = store_prompt(variant_id, aq.prompt_text);
        result.manifest.push_back(std::move(row));
      } catch (const std::exception& e) {
        Json err;
        err["variant_id"] = variant_id;
        err["seed_id"] = bundle.seed.id;
        err["error"] = e.what();
        result.errors.push_back(std::move(err));
      }
    }
  }
  return result;
}

} // namespace longweave
