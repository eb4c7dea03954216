#include "longweave/decompose.hpp"

#include "longweave/anchors.hpp"
#include "longweave/sections.hpp"
#include "longweave/text.hpp"

namespace longweave {
namespace {

constexpr const char* kBackgroundHeading = "Background Passage";
constexpr const char* kInquiryHeading = "Question About the Background Passage";
constexpr const char* kRequirementsVerdict =
    "Judge Whether the Question About the Background Passage Meets the Requirements";
constexpr const char* kMeaningVerdict =
    "Judge Whether the Broken Down Question Matches the Original Question in Meaning";

// Does `label` head an option line like "A. 40", "A) 40", or "A: 40"?
bool has_option_label_line(const std::string& text, const std::string& label) {
  for (const std::string& raw : split_lines(text)) {
    const std::string line = trim(raw);
    if (line.size() < label.size() + 1) continue;
    if (line.compare(0, label.size(), label) != 0) continue;
    const char next = line[label.size()];
    if (next == '.' || next == ')' || next == ':') return true;
  }
  return false;
}

// Whole-word-bounded, case-insensitive phrase search over normalized text.
bool contains_bounded_phrase(const std::string& haystack, const std::string& phrase) {
  const std::string h = to_lower(normalize_ws(haystack));
  const std::string n = to_lower(normalize_ws(phrase));
  if (n.empty()) return false;
  auto is_word = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; };
  std::size_t pos = 0;
  while ((pos = h.find(n, pos)) != std::string::npos) {
    const bool left_ok = pos == 0 || !is_word(h[pos - 1]) || !is_word(n.front());
    const std::size_t end = pos + n.size();
    const bool right_ok = end == h.size() || !is_word(h[end]) || !is_word(n.back());
    if (left_ok && right_ok) return true;
    ++pos;
  }
  return false;
}

} // namespace

Json DecomposedQuestion::to_json() const {
  Json obj;
  obj["seed_id"] = seed_id;
  obj["background"] = background;
  obj["inquiry"] = inquiry;
  obj["anchors"] = anchors;
  obj["analysis"] = analysis;
  obj["meets_requirements"] = meets_requirements;
  obj["meaning_preserved"] = meaning_preserved;
  obj["sample_index"] = sample_index;
  return obj;
}

DecomposedQuestion DecomposedQuestion::from_json(const Json& obj) {
  DecomposedQuestion d;
  d.seed_id = obj.at("seed_id").get<std::string>();
  d.background = obj.at("background").get<std::string>();
  d.inquiry = obj.at("inquiry").get<std::string>();
  d.anchors = obj.at("anchors").get<std::vector<std::string>>();
  d.analysis = obj.value("analysis", std::string());
  d.meets_requirements = obj.at("meets_requirements").get<bool>();
  d.meaning_preserved = obj.at("meaning_preserved").get<bool>();
  d.sample_index = obj.at("sample_index").get<int>();
  return d;
}

Json DecomposeSampleRecord::to_json() const {
  Json obj;
  obj["sample_index"] = sample_index;
  obj["parsed"] = parsed;
  if (!parse_error.empty()) obj["parse_error"] = parse_error;
  obj["meets_requirements"] = meets_requirements;
  obj["meaning_preserved"] = meaning_preserved;
  obj["anchors_ok"] = anchors_ok;
  obj["options_ok"] = options_ok;
  obj["background_clean"] = background_clean;
  return obj;
}

std::string build_decomposition_prompt(const PromptLibrary& prompts, const SeedQuestion& q) {
  return prompts.render("decompose_v1", {{"question", q.question_block()}});
}

ParsedDecomposition parse_decomposition(const std::string& response_text) {
  ParsedDecomposition out;
  out.analysis = find_section(response_text, "Analysis").value_or("");
  out.background = require_section(response_text, kBackgroundHeading);
  out.inquiry = require_section(response_text, kInquiryHeading);
  if (out.background.empty()) throw ParseError("Background Passage section is empty");
  if (out.inquiry.empty())
    throw ParseError("Question About the Background Passage section is empty");
  out.meets_requirements =
      parse_yes_no(require_section(response_text, kRequirementsVerdict), kRequirementsVerdict);
  out.meaning_preserved =
      parse_yes_no(require_section(response_text, kMeaningVerdict), kMeaningVerdict);
  return out;
}

bool inquiry_preserves_options(const std::string& inquiry, const SeedQuestion& q) {
  for (const auto& [label, text] : q.options) {
    if (!has_option_label_line(inquiry, label)) return false;
    if (!contains_normalized(inquiry, text)) return false;
  }
  return true;
}

bool background_free_of_options(const std::string& background, const SeedQuestion& q) {
  for (const auto& [label, text] : q.options) {
    if (has_option_label_line(background, label)) return false;
    if (contains_bounded_phrase(background, text)) return false;
  }
  return true;
}

DecomposeOutcome decompose(LlmClient& client, const PromptLibrary& prompts,
                           const std::string& model, const SeedQuestion& q, int max_samples,
                           double temperature, int max_tokens) {
  DecomposeOutcome out;
  const std::string prompt = build_decomposition_prompt(prompts, q);
  for (int s = 1; s <= max_samples; ++s) {
    LlmRequest req;
    req.model = model;
    req.user = prompt;
    req.temperature = temperature;
    req.max_tokens = max_tokens;
    req.seed_hint = static_cast<std::uint64_t>(s);
    const LlmResponse resp = client.complete(req);

    DecomposeSampleRecord rec;
    rec.sample_index = s;
    try {
      const ParsedDecomposition pd = parse_decomposition(resp.text);
      rec.parsed = true;
      rec.meets_requirements = pd.meets_requirements;
      rec.meaning_preserved = pd.meaning_preserved;
      const auto anchors = extract_anchors(pd.background, pd.inquiry);
      rec.anchors_ok = has_long_anchor(anchors);
      rec.options_ok = inquiry_preserves_options(pd.inquiry, q);
      rec.background_clean = background_free_of_options(pd.background, q);
      if (rec.meets_requirements && rec.meaning_preserved && rec.anchors_ok && rec.options_ok &&
          rec.background_clean) {
        DecomposedQuestion d;
        d.seed_id = q.id;
        d.background = pd.background;
        d.inquiry = pd.inquiry;
        d.anchors = anchors;
        d.analysis = pd.analysis;
        d.meets_requirements = true;
        d.meaning_preserved = true;
        d.sample_index = s;
        out.history.push_back(rec);
        out.result = std::move(d);
        return out;
      }
    } catch (const ParseError& e) {
      rec.parsed = false;
      rec.parse_error = e.what();
    }
    out.history.push_back(rec);
  }
  return out;
}

} // namespace longweave
