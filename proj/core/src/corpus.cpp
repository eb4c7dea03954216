#include "longweave/corpus.hpp"

#include <set>

#include "longweave/text.hpp"

namespace longweave {

std::string to_string(Category c) {
  switch (c) {
    case Category::reading_comprehension: return "reading_comprehension";
    case Category::logical_inference: return "logical_inference";
    case Category::math_word_problem: return "math_word_problem";
  }
  throw std::runtime_error("unknown category value");
}

Category category_from_string(const std::string& s) {
  if (s == "reading_comprehension") return Category::reading_comprehension;
  if (s == "logical_inference") return Category::logical_inference;
  if (s == "math_word_problem") return Category::math_word_problem;
  throw std::runtime_error("unknown category: " + s);
}

void SeedQuestion::validate() const {
  if (id.empty()) throw std::runtime_error("seed question has empty id");
  const std::string where = "question '" + id + "'";
  if (stem.empty()) throw std::runtime_error(where + ": stem is empty");
  if (options.size() < 2 || options.size() > 5)
    throw std::runtime_error(where + ": options must have 2-5 entries, got " +
                             std::to_string(options.size()));
  for (std::size_t i = 0; i < options.size(); ++i) {
    const std::string expected(1, static_cast<char>('A' + i));
    if (options[i].first != expected)
      throw std::runtime_error(where + ": option labels must be consecutive letters from A; slot " +
                               std::to_string(i) + " is '" + options[i].first + "' not '" +
                               expected + "'");
    if (options[i].second.empty())
      throw std::runtime_error(where + ": option " + expected + " text is empty");
  }
  bool answer_found = false;
  for (const auto& [label, _] : options) answer_found = answer_found || label == answer;
  if (!answer_found)
    throw std::runtime_error(where + ": answer '" + answer + "' is not an option label (" +
                             std::to_string(options.size()) + " options A..)");
}

const std::string& SeedQuestion::option_text(const std::string& label) const {
  for (const auto& [l, text] : options)
    if (l == label) return text;
  throw std::runtime_error("question '" + id + "' has no option labeled '" + label + "'");
}

std::string SeedQuestion::options_block() const {
  std::string out;
  for (const auto& [label, text] : options) {
    if (!out.empty()) out.push_back('\n');
    out += label + ". " + text;
  }
  return out;
}

std::string SeedQuestion::question_block() const { return stem + "\n" + options_block(); }

Json SeedQuestion::to_json() const {
  Json obj;
  obj["id"] = id;
  obj["category"] = to_string(category);
  obj["stem"] = stem;
  Json opts = Json::object();
  for (const auto& [label, text] : options) opts[label] = text;
  obj["options"] = std::move(opts);
  obj["answer"] = answer;
  obj["rationale"] = rationale;
  if (step_count) obj["step_count"] = *step_count;
  obj["source"] = source;
  return obj;
}

SeedQuestion SeedQuestion::from_json(const Json& obj) {
  SeedQuestion q;
  try {
    q.id = obj.at("id").get<std::string>();
    q.category = category_from_string(obj.at("category").get<std::string>());
    q.stem = obj.at("stem").get<std::string>();
    const Json& opts = obj.at("options");
    if (!opts.is_object()) throw std::runtime_error("options must be an object");
    // nlohmann::ordered_json preserves the file's key order
    for (auto it = opts.begin(); it != opts.end(); ++it)
      q.options.emplace_back(it.key(), it.value().get<std::string>());
    q.answer = obj.at("answer").get<std::string>();
    q.rationale = obj.at("rationale").get<std::string>();
    if (obj.contains("step_count") && !obj.at("step_count").is_null())
      q.step_count = obj.at("step_count").get<int>();
    q.source = obj.at("source").get<std::string>();
  } catch (const Json::exception& e) {
    throw std::runtime_error(std::string("seed question record invalid: ") + e.what() +
                             (q.id.empty() ? "" : " (id '" + q.id + "')"));
  }
  q.validate();
  return q;
}

std::vector<SeedQuestion> import_seed_questions(const std::filesystem::path& path,
                                                SeedFormat format) {
  if (format != SeedFormat::jsonl)
    throw std::runtime_error("unsupported seed format for " + path.string());
  std::vector<SeedQuestion> out;
  std::set<std::string> seen;
  for_each_jsonl(path, [&](Json obj, std::size_t line_no) {
    SeedQuestion q;
    try {
      q = SeedQuestion::from_json(obj);
    } catch (const std::exception& e) {
      throw JsonlError(path.string(), line_no, e.what());
    }
    if (!seen.insert(q.id).second)
      throw JsonlError(path.string(), line_no, "duplicate question id '" + q.id + "'");
    out.push_back(std::move(q));
  });
  return out;
}

void export_seed_questions(const std::filesystem::path& path,
                           const std::vector<SeedQuestion>& questions) {
  std::vector<Json> rows;
  rows.reserve(questions.size());
  for (const auto& q : questions) rows.push_back(q.to_json());
  write_jsonl_atomic(path, rows);
}

long long StepHistogram::total() const {
  long long n = 0;
  for (const auto& [_, count] : buckets) n += count;
  return n;
}

std::optional<int> parse_step_count(const std::string& response_text) {
  const auto lines = split_lines(response_text);
  std::string last;
  for (auto it = lines.rbegin(); it != lines.rend(); ++it) {
    last = trim(*it);
    if (!last.empty()) break;
  }
  if (last.empty()) return std::nullopt;
  std::size_t b = 0, e = last.size();
  auto is_decoration = [](char c) { return c == '*' || c == '.' || c == ' ' || c == '\t'; };
  while (b < e && is_decoration(last[b])) ++b;
  while (e > b && is_decoration(last[e - 1])) --e;
  if (b == e) return std::nullopt;
  int value = 0;
  for (std::size_t i = b; i < e; ++i) {
    const char c = last[i];
    if (c < '0' || c > '9') return std::nullopt;
    if (value > 100000) return std::nullopt;
    value = value * 10 + (c - '0');
  }
  return value;
}

std::string build_step_count_prompt(const PromptLibrary& prompts, const SeedQuestion& q) {
  return prompts.render("step_count_v1",
                        {{"question", q.question_block()}, {"rationale", q.rationale}});
}

StepCountResult count_reasoning_steps(LlmClient& client, const PromptLibrary& prompts,
                                      const std::string& model, const SeedQuestion& q,
                                      int max_attempts, double retry_temperature,
                                      int max_tokens) {
  if (q.rationale.empty())
    throw std::runtime_error("question '" + q.id + "' has an empty rationale");
  StepCountResult result;
  const std::string prompt = build_step_count_prompt(prompts, q);
  for (int attempt = 1; attempt <= max_attempts; ++attempt) {
    LlmRequest req;
    req.model = model;
    req.user = prompt;
    req.max_tokens = max_tokens;
    if (attempt == 1) {
      req.temperature = 0.0;
    } else {
      req.temperature = retry_temperature;
      req.seed_hint = static_cast<std::uint64_t>(attempt);
    }
    const LlmResponse resp = client.complete(req);
    result.attempts = attempt;
    result.responses.push_back(resp.text);
    if (auto steps = parse_step_count(resp.text)) {
      result.steps = steps;
      return result;
    }
  }
  return result;
}

std::vector<SeedQuestion> filter_by_steps(const std::vector<SeedQuestion>& questions,
                                          int min_steps) {
  std::vector<SeedQuestion> out;
  for (const auto& q : questions) {
    if (!q.step_count)
      throw std::runtime_error("question '" + q.id + "' has no step_count; run step counting first");
    if (*q.step_count >= min_steps) out.push_back(q);
  }
  return out;
}

StepHistogram step_histogram(const std::vector<SeedQuestion>& questions) {
  StepHistogram h;
  long long sum = 0;
  for (const auto& q : questions) {
    if (!q.step_count)
      throw std::runtime_error("question '" + q.id + "' has no step_count; run step counting first");
    h.buckets[*q.step_count] += 1;
    sum += *q.step_count;
  }
  if (!questions.empty()) {
    h.empty = false;
    h.mean_steps = Rational(sum, static_cast<long long>(questions.size()));
  }
  return h;
}

} // namespace longweave
