#include "longweave/expand.hpp"

#include <cctype>

#include "longweave/anchors.hpp"
#include "longweave/sections.hpp"
#include "longweave/text.hpp"

namespace longweave {
namespace {

constexpr const char* kExpandedHeading = "Expanded material";
constexpr const char* kKeyInfoVerdict =
    "Does the expanded material contain all the key information from the original material based "
    "on the analysis?";
constexpr const char* kAnswerAffectingVerdict =
    "Does the expanded material contain information that will affect the answer to the question "
    "based on the analysis?";
constexpr const char* kAllRelatedVerdict =
    "Are all the paragraphs in the expanded material are related to the main topic/character of "
    "the question based on the analysis?";

// "3. " at the start of a trimmed line -> (number, rest)
std::optional<std::pair<int, std::string>> split_index_marker(const std::string& line) {
  std::size_t i = 0;
  while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) ++i;
  if (i == 0 || i >= line.size() || line[i] != '.') return std::nullopt;
  if (i > 6) return std::nullopt; // not a plausible paragraph index
  const int number = std::stoi(line.substr(0, i));
  return std::make_pair(number, trim(line.substr(i + 1)));
}

std::string numbered_block(const std::vector<std::string>& passages) {
  std::string out;
  for (std::size_t i = 0; i < passages.size(); ++i) {
    if (i > 0) out += "\n";
    out += std::to_string(i + 1) + ". " + passages[i];
  }
  return out;
}

} // namespace

std::vector<std::size_t> ExpandedContext::word_counts() const {
  std::vector<std::size_t> out;
  out.reserve(passages.size());
  for (const auto& p : passages) out.push_back(word_count(p));
  return out;
}

Json ExpandedContext::to_json() const {
  Json obj;
  obj["seed_id"] = seed_id;
  obj["passages"] = passages;
  obj["genre"] = genre;
  obj["key_info_complete"] = key_info_complete;
  obj["answer_affecting"] = answer_affecting;
  obj["all_related"] = all_related;
  obj["sample_index"] = sample_index;
  return obj;
}

ExpandedContext ExpandedContext::from_json(const Json& obj) {
  ExpandedContext ex;
  ex.seed_id = obj.at("seed_id").get<std::string>();
  ex.passages = obj.at("passages").get<std::vector<std::string>>();
  ex.genre = obj.at("genre").get<std::string>();
  ex.key_info_complete = obj.at("key_info_complete").get<bool>();
  ex.answer_affecting = obj.at("answer_affecting").get<bool>();
  ex.all_related = obj.at("all_related").get<bool>();
  ex.sample_index = obj.at("sample_index").get<int>();
  return ex;
}

Json ExpandSampleRecord::to_json() const {
  Json obj;
  obj["sample_index"] = sample_index;
  obj["parsed"] = parsed;
  if (!error.empty()) obj["error"] = error;
  obj["passage_count"] = passage_count;
  obj["anchors_ok"] = anchors_ok;
  obj["verified"] = verified;
  if (verified) {
    obj["key_info_complete"] = verdicts.key_info_complete;
    obj["answer_affecting"] = verdicts.answer_affecting;
    obj["all_related"] = verdicts.all_related;
  }
  return obj;
}

const std::vector<std::string>& default_genres() {
  static const std::vector<std::string> genres = {
      "Explanation",    "Analysis",    "Research",      "Opinion",     "Technical",
      "News",           "Informative", "Report",        "Review",      "Argumentative",
      "Discussion",     "Advice",      "Expository",    "Exposition",  "Essay",
      "Instruction",    "Narrative",   "Case Report",   "Judgment",    "History",
      "Instructional",  "Sermon",      "Guide",         "Speculation", "Exhortation",
      "Study",          "Criticism",   "Tutorial",      "Debate",      "Educational",
      "Problem-Solving", "Academic",   "Biography",     "Medical",     "Self-Help",
      "Case",           "Letter",      "Persuasive",    "Reflection",  "Blog",
      "Satire",         "Fiction",     "Hypothesis",    "Troubleshooting", "Rant",
      "Motivational"};
  return genres;
}

std::string build_expansion_prompt(const PromptLibrary& prompts, const DecomposedQuestion& d,
                                   const std::string& genre) {
  return prompts.render("expand_v1", {{"context", d.background},
                                      {"final_question", d.inquiry},
                                      {"target_genre", genre}});
}

std::vector<std::string> parse_expansion(const std::string& response_text) {
  const std::string section = require_section(response_text, kExpandedHeading);
  std::vector<std::string> passages;
  std::string current;
  int expected = 1;
  bool started = false;
  for (const std::string& raw : split_lines(section)) {
    const std::string line = trim(raw);
    if (auto marked = split_index_marker(line)) {
      const auto& [number, rest] = *marked;
      if (number != expected)
        throw ParseError("expanded material numbering is not consecutive: expected " +
                         std::to_string(expected) + ", got " + std::to_string(number));
      if (started) passages.push_back(trim(current));
      current = rest;
      started = true;
      ++expected;
      continue;
    }
    if (!started) {
      if (line.empty()) continue;
      throw ParseError("expanded material does not start with a \"1.\" paragraph marker");
    }
    if (!line.empty()) {
      if (!current.empty()) current.push_back(' ');
      current += line;
    }
  }
  if (started) passages.push_back(trim(current));
  if (passages.empty()) throw ParseError("expanded material section has no numbered paragraphs");
  for (std::size_t i = 0; i < passages.size(); ++i)
    if (passages[i].empty())
      throw ParseError("expanded paragraph " + std::to_string(i + 1) + " is empty");
  return passages;
}

std::string build_verification_prompt(const PromptLibrary& prompts, const std::string& background,
                                      const std::string& inquiry,
                                      const std::vector<std::string>& passages) {
  return prompts.render("verify_expansion_v1", {{"context", background},
                                                {"final_question", inquiry},
                                                {"expanded_context", numbered_block(passages)}});
}

VerifyVerdicts parse_verification(const std::string& response_text) {
  VerifyVerdicts v;
  v.key_info_complete =
      parse_yes_no(require_section(response_text, kKeyInfoVerdict), kKeyInfoVerdict);
  v.answer_affecting = parse_yes_no(require_section(response_text, kAnswerAffectingVerdict),
                                    kAnswerAffectingVerdict);
  v.all_related = parse_yes_no(require_section(response_text, kAllRelatedVerdict),
                               kAllRelatedVerdict);
  return v;
}

VerifyVerdicts verify_expansion(LlmClient& client, const PromptLibrary& prompts,
                                const std::string& model, const std::string& background,
                                const std::string& inquiry,
                                const std::vector<std::string>& passages, double temperature,
                                int sample_index, int max_tokens) {
  LlmRequest req;
  req.model = model;
  req.user = build_verification_prompt(prompts, background, inquiry, passages);
  req.temperature = temperature;
  req.max_tokens = max_tokens;
  req.seed_hint = static_cast<std::uint64_t>(sample_index);
  const LlmResponse resp = client.complete(req);
  return parse_verification(resp.text);
}

ExpandOutcome expand(LlmClient& client, const PromptLibrary& prompts, const std::string& model,
                     const DecomposedQuestion& d, const std::string& genre, int max_samples,
                     double temperature, int max_tokens) {
  ExpandOutcome out;
  const std::string gen_prompt = build_expansion_prompt(prompts, d, genre);
  for (int s = 1; s <= max_samples; ++s) {
    LlmRequest req;
    req.model = model;
    req.user = gen_prompt;
    req.temperature = temperature;
    req.max_tokens = max_tokens;
    req.seed_hint = static_cast<std::uint64_t>(s);
    const LlmResponse resp = client.complete(req);

    ExpandSampleRecord rec;
    rec.sample_index = s;
    std::vector<std::string> passages;
    try {
      passages = parse_expansion(resp.text);
      rec.parsed = true;
      rec.passage_count = passages.size();
    } catch (const ParseError& e) {
      rec.error = e.what();
      out.history.push_back(rec);
      continue;
    }

    rec.anchors_ok = true;
    for (const std::string& p : passages) {
      bool any = false;
      for (const std::string& a : d.anchors) any = any || contains_anchor(p, a);
      if (!any) {
        rec.anchors_ok = false;
        break;
      }
    }
    if (!rec.anchors_ok) {
      rec.error = "a passage contains no anchor keyword";
      out.history.push_back(rec);
      continue;
    }

    try {
      rec.verdicts = verify_expansion(client, prompts, model, d.background, d.inquiry, passages,
                                      temperature, s);
      rec.verified = true;
    } catch (const ParseError& e) {
      rec.error = std::string("verification unparseable: ") + e.what();
      out.history.push_back(rec);
      continue;
    }

    if (rec.verdicts.retainable()) {
      ExpandedContext ex;
      ex.seed_id = d.seed_id;
      ex.passages = std::move(passages);
      ex.genre = genre;
      ex.key_info_complete = rec.verdicts.key_info_complete;
      ex.answer_affecting = rec.verdicts.answer_affecting;
      ex.all_related = rec.verdicts.all_related;
      ex.sample_index = s;
      out.history.push_back(rec);
      out.result = std::move(ex);
      return out;
    }
    out.history.push_back(rec);
  }
  return out;
}

} // namespace longweave
