#include "longweave/pool.hpp"

#include <algorithm>

#include "longweave/digest.hpp"
#include "longweave/text.hpp"

namespace longweave {
namespace {

void ingest_text_file(const std::filesystem::path& path, int min_words, IngestResult& out) {
  const std::string content = read_file(path);
  const auto lines = split_lines(content);
  std::string current;
  std::size_t start_line = 0;
  auto flush = [&](std::size_t) {
    const std::string text = trim(current);
    current.clear();
    if (text.empty()) return;
    if (word_count(text) < static_cast<std::size_t>(min_words)) {
      ++out.dropped_short;
      return;
    }
    out.passages.push_back({path.string() + ":" + std::to_string(start_line), text});
  };
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string line = trim(lines[i]);
    if (line.empty()) {
      flush(i);
    } else {
      if (current.empty()) start_line = i + 1; // 1-based
      if (!current.empty()) current.push_back(' ');
      current += line;
    }
  }
  flush(lines.size());
}

void ingest_jsonl_file(const std::filesystem::path& path, int min_words, IngestResult& out) {
  for_each_jsonl(path, [&](Json obj, std::size_t line_no) {
    if (!obj.contains("text"))
      throw JsonlError(path.string(), line_no, "corpus record has no \"text\" field");
    const std::string text = trim(obj.at("text").get<std::string>());
    if (text.empty() || word_count(text) < static_cast<std::size_t>(min_words)) {
      ++out.dropped_short;
      return;
    }
    out.passages.push_back({path.string() + ":" + std::to_string(line_no), text});
  });
}

} // namespace

IngestResult ingest_corpus(const std::vector<std::filesystem::path>& paths, int min_words) {
  IngestResult out;
  for (const auto& path : paths) {
    if (!std::filesystem::exists(path))
      throw std::runtime_error("corpus path does not exist: " + path.string());
    if (path.extension() == ".jsonl")
      ingest_jsonl_file(path, min_words, out);
    else
      ingest_text_file(path, min_words, out);
  }
  if (out.passages.empty())
    throw std::runtime_error("corpus ingestion produced no passages (dropped " +
                             std::to_string(out.dropped_short) + " under the minimum length)");
  return out;
}

Json DistractorPassage::to_json() const {
  Json obj;
  obj["id"] = id;
  obj["source_ref"] = source_ref;
  obj["text"] = text;
  obj["token_count"] = token_count;
  return obj;
}

DistractorPassage DistractorPassage::from_json(const Json& obj) {
  DistractorPassage p;
  p.id = obj.at("id").get<std::string>();
  p.source_ref = obj.at("source_ref").get<std::string>();
  p.text = obj.at("text").get<std::string>();
  p.token_count = obj.at("token_count").get<long long>();
  if (p.text.empty() || p.token_count <= 0)
    throw std::runtime_error("distractor passage " + p.id + " is empty or has no tokens");
  return p;
}

DistractorPassage rewrite_passage(LlmClient& client, const PromptLibrary& prompts,
                                  const std::string& model, const RawPassage& raw,
                                  const Tokenizer& tokenizer, int max_tokens) {
  if (trim(raw.text).empty())
    throw std::runtime_error("cannot rewrite empty passage from " + raw.source_ref);
  LlmRequest req;
  req.model = model;
  req.user = prompts.render("rewrite_v1", {{"passage", raw.text}});
  req.temperature = 0.0;
  req.max_tokens = max_tokens;
  const LlmResponse resp = client.complete(req);
  const std::string text = trim(resp.text);
  if (text.empty())
    throw std::runtime_error("backend returned an empty rewrite for " + raw.source_ref);
  DistractorPassage p;
  p.id = sha256_hex(text);
  p.source_ref = raw.source_ref;
  p.text = text;
  p.token_count = static_cast<long long>(tokenizer.count(text));
  return p;
}

bool DistractorPool::insert(DistractorPassage p) {
  const auto [_, inserted] = by_id_.emplace(p.id, std::move(p));
  if (inserted) dirty_ = true;
  return inserted;
}

const std::vector<DistractorPassage>& DistractorPool::passages() const {
  if (dirty_) {
    ordered_.clear();
    ordered_.reserve(by_id_.size());
    for (const auto& [_, p] : by_id_) ordered_.push_back(p); // std::map: id-sorted
    dirty_ = false;
  }
  return ordered_;
}

long long DistractorPool::total_tokens(const std::set<std::string>& exclude) const {
  long long total = 0;
  for (const auto& [id, p] : by_id_)
    if (!exclude.count(id)) total += p.token_count;
  return total;
}

DistractorPool DistractorPool::load_jsonl(const std::filesystem::path& path) {
  DistractorPool pool;
  for_each_jsonl(path, [&](Json obj, std::size_t line_no) {
    try {
      pool.insert(DistractorPassage::from_json(obj));
    } catch (const std::exception& e) {
      throw JsonlError(path.string(), line_no, e.what());
    }
  });
  return pool;
}

void DistractorPool::save_jsonl(const std::filesystem::path& path) const {
  std::vector<Json> rows;
  rows.reserve(by_id_.size());
  for (const auto& p : passages()) rows.push_back(p.to_json());
  write_jsonl_atomic(path, rows);
}

std::vector<DistractorPassage> sample_distractors(const DistractorPool& pool,
                                                  long long token_budget, Rng& rng,
                                                  const std::set<std::string>& exclude,
                                                  long long min_tokens) {
  std::vector<DistractorPassage> out;
  if (token_budget <= 0) {
    if (min_tokens > 0)
      throw PoolShortfall("zero token budget cannot reach the required " +
                              std::to_string(min_tokens) + " tokens",
                          min_tokens);
    return out;
  }
  const auto& all = pool.passages();
  std::vector<std::size_t> order;
  order.reserve(all.size());
  for (std::size_t i = 0; i < all.size(); ++i)
    if (!exclude.count(all[i].id)) order.push_back(i);
  rng.shuffle(order);

  long long cumulative = 0;
  for (std::size_t idx : order) {
    const auto& p = all[idx];
    if (cumulative + p.token_count > token_budget) continue;
    out.push_back(p);
    cumulative += p.token_count;
  }
  if (cumulative < min_tokens)
    throw PoolShortfall("distractor pool sample reached only " + std::to_string(cumulative) +
                            " of the required " + std::to_string(min_tokens) +
                            " tokens (budget " + std::to_string(token_budget) + ", deficit " +
                            std::to_string(min_tokens - cumulative) + ")",
                        min_tokens - cumulative);
  return out;
}

} // namespace longweave
