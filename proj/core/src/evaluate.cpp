#include "longweave/evaluate.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <set>
#include <sstream>
#include <thread>

#include "longweave/text.hpp"

namespace longweave {
namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += "\"";
  return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

std::string format_percent(const Rational& r) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", r.to_double() * 100.0);
  return buf;
}

std::string format_ratio(const Rational& r) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", r.to_double());
  return buf;
}

} // namespace

Json EvalRecord::to_json() const {
  Json obj;
  obj["model"] = model;
  obj["variant_ref"] = variant_ref;
  obj["completion"] = completion;
  if (extracted)
    obj["extracted"] = *extracted;
  else
    obj["extracted"] = nullptr;
  if (correct)
    obj["correct"] = *correct;
  else
    obj["correct"] = nullptr;
  obj["prompt_tokens"] = prompt_tokens;
  obj["completion_tokens"] = completion_tokens;
  obj["latency_ms"] = latency_ms;
  obj["from_cache"] = from_cache;
  if (!error.empty()) obj["error"] = error;
  return obj;
}

EvalRecord EvalRecord::from_json(const Json& obj) {
  EvalRecord r;
  r.model = obj.at("model").get<std::string>();
  r.variant_ref = obj.at("variant_ref").get<std::string>();
  r.completion = obj.at("completion").get<std::string>();
  if (obj.contains("extracted") && !obj.at("extracted").is_null())
    r.extracted = obj.at("extracted").get<std::string>();
  if (obj.contains("correct") && !obj.at("correct").is_null())
    r.correct = obj.at("correct").get<bool>();
  r.prompt_tokens = obj.value("prompt_tokens", 0LL);
  r.completion_tokens = obj.value("completion_tokens", 0LL);
  r.latency_ms = obj.value("latency_ms", 0LL);
  r.from_cache = obj.value("from_cache", false);
  r.error = obj.value("error", std::string());
  if (r.correct.has_value() != r.extracted.has_value())
    throw std::runtime_error("eval record for " + r.variant_ref +
                             " violates correct-iff-extracted");
  return r;
}

std::optional<char> extract_answer(const std::string& completion) {
  static const std::string phrase = "the answer is";
  const std::string lowered = to_lower(completion);
  const std::size_t pos = lowered.rfind(phrase);
  if (pos == std::string::npos) return std::nullopt;
  std::size_t i = pos + phrase.size();
  auto is_wrapper = [](char c) {
    return c == ' ' || c == '*' || c == '(' || c == '"' || c == '$';
  };
  while (i < completion.size() && is_wrapper(completion[i])) ++i;
  if (i < completion.size() && completion[i] >= 'A' && completion[i] <= 'E')
    return completion[i];
  return std::nullopt;
}

std::vector<EvalRecord> run_eval(LlmClient& client, const std::vector<EvalTask>& tasks,
                                 const std::string& model, int max_parallel, int max_tokens,
                                 const std::map<std::string, EvalRecord>* existing) {
  std::vector<EvalRecord> records(tasks.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      const EvalTask& task = tasks[i];
      if (existing) {
        auto it = existing->find(task.variant_id);
        if (it != existing->end()) {
          records[i] = it->second;
          continue;
        }
      }
      EvalRecord rec;
      rec.model = model;
      rec.variant_ref = task.variant_id;
      LlmRequest req;
      req.model = model;
      req.user = task.prompt_text;
      req.temperature = 0.0;
      req.max_tokens = max_tokens;
      try {
        const auto t0 = std::chrono::steady_clock::now();
        const LlmResponse resp = client.complete(req);
        rec.completion = resp.text;
        rec.prompt_tokens = resp.usage.prompt_tokens;
        rec.completion_tokens = resp.usage.completion_tokens;
        rec.from_cache = resp.from_cache;
        rec.latency_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - t0)
                             .count();
        if (auto label = extract_answer(rec.completion)) {
          rec.extracted = std::string(1, *label);
          rec.correct = (*rec.extracted == task.answer_label);
        }
      } catch (const std::exception& e) {
        rec.error = e.what();
      }
      records[i] = std::move(rec);
    }
  };

  const int threads_n = std::max(1, std::min<int>(max_parallel, static_cast<int>(tasks.size())));
  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(threads_n));
  for (int t = 0; t < threads_n; ++t) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  return records;
}

BenchmarkReport aggregate(const std::vector<EvalRecord>& records,
                          const std::vector<Json>& manifest_rows,
                          const std::vector<SeedQuestion>& seeds,
                          const std::vector<long long>& lengths) {
  std::map<std::string, const Json*> manifest_by_id;
  for (const Json& row : manifest_rows)
    manifest_by_id[row.at("variant_id").get<std::string>()] = &row;
  std::map<std::string, const SeedQuestion*> seed_by_id;
  for (const SeedQuestion& s : seeds) seed_by_id[s.id] = &s;

  BenchmarkReport report;
  report.lengths = lengths;
  for (const EvalRecord& rec : records) {
    auto mit = manifest_by_id.find(rec.variant_ref);
    if (mit == manifest_by_id.end())
      throw std::runtime_error("eval record references unknown variant '" + rec.variant_ref +
                               "'");
    const Json& row = *mit->second;
    const std::string seed_id = row.at("seed_id").get<std::string>();
    auto sit = seed_by_id.find(seed_id);
    if (sit == seed_by_id.end())
      throw std::runtime_error("manifest variant '" + rec.variant_ref +
                               "' references unknown seed '" + seed_id + "'");
    const std::string kind = row.at("kind").get<std::string>();
    CellKey key;
    key.model = rec.model;
    key.category = to_string(sit->second->category);
    if (kind == "long") {
      key.column = std::to_string(row.at("target_tokens").get<long long>());
      key.position = row.at("position").get<std::string>();
      key.hop = row.at("hop").get<std::string>();
    } else {
      key.column = kind;
      key.position = "-";
      key.hop = "-";
    }
    CellStats& cell = report.cells[key];
    cell.n += 1;
    if (rec.correct.has_value() && *rec.correct) cell.correct += 1;
    if (!rec.extracted.has_value()) cell.extraction_failures += 1;
    report.total_records += 1;
  }
  report.random_baseline = random_baseline(seeds);
  return report;
}

Rational random_baseline(const std::vector<SeedQuestion>& seeds) {
  if (seeds.empty()) throw std::runtime_error("random baseline needs at least one question");
  Rational sum(0, 1);
  for (const SeedQuestion& q : seeds) {
    if (q.options.size() < 2)
      throw std::runtime_error("question '" + q.id + "' has fewer than 2 options");
    sum = sum + Rational(1, static_cast<long long>(q.options.size()));
  }
  return sum * Rational(1, static_cast<long long>(seeds.size()));
}

std::string report_to_csv(const BenchmarkReport& report) {
  std::ostringstream out;
  out << "row_type,model,column,category,position,hop,n,correct,extraction_failures,accuracy,"
         "extraction_failure_rate\n";
  for (const auto& [key, cell] : report.cells) {
    out << "cell," << csv_field(key.model) << ',' << key.column << ',' << key.category << ','
        << key.position << ',' << key.hop << ',' << cell.n << ',' << cell.correct << ','
        << cell.extraction_failures << ',' << format_ratio(cell.accuracy()) << ','
        << format_ratio(cell.failure_rate()) << '\n';
  }

  // marginals: per (model, column) across categories
  std::map<std::pair<std::string, std::string>, CellStats> by_column;
  for (const auto& [key, cell] : report.cells) {
    auto& agg = by_column[{key.model, key.column}];
    agg.n += cell.n;
    agg.correct += cell.correct;
    agg.extraction_failures += cell.extraction_failures;
  }
  for (const auto& [mk, cell] : by_column) {
    out << "marginal," << csv_field(mk.first) << ',' << mk.second << ",all,-,-," << cell.n << ','
        << cell.correct << ',' << cell.extraction_failures << ',' << format_ratio(cell.accuracy())
        << ',' << format_ratio(cell.failure_rate()) << '\n';
  }
  out << "baseline,random,-,all,-,-,0,0,0," << format_ratio(report.random_baseline) << ",0\n";
  out << "baseline_exact,random,-,all,-,-," << report.random_baseline.den << ','
      << report.random_baseline.num << ",0," << format_ratio(report.random_baseline) << ",0\n";
  return out.str();
}

std::pair<std::map<CellKey, CellStats>, Rational> parse_report_csv(const std::string& csv) {
  std::map<CellKey, CellStats> cells;
  Rational baseline(0, 1);
  const auto lines = split_lines(csv);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    const auto fields = split_csv_line(lines[i]);
    if (fields.size() < 11) throw std::runtime_error("report CSV row has too few fields");
    const std::string& row_type = fields[0];
    if (row_type == "cell") {
      CellKey key{fields[1], fields[2], fields[3], fields[4], fields[5]};
      CellStats cell;
      cell.n = std::stoll(fields[6]);
      cell.correct = std::stoll(fields[7]);
      cell.extraction_failures = std::stoll(fields[8]);
      cells[key] = cell;
    } else if (row_type == "baseline_exact") {
      baseline = Rational(std::stoll(fields[7]), std::stoll(fields[6]));
    }
  }
  return {cells, baseline};
}

namespace {

// Sum stats across categories for a (model, column, position, hop) slice.
std::optional<CellStats> slice(const BenchmarkReport& report, const std::string& model,
                               const std::string& column, const std::string& position,
                               const std::string& hop) {
  CellStats agg;
  bool any = false;
  for (const auto& [key, cell] : report.cells) {
    if (key.model != model || key.column != column) continue;
    if (key.position != position || key.hop != hop) continue;
    agg.n += cell.n;
    agg.correct += cell.correct;
    agg.extraction_failures += cell.extraction_failures;
    any = true;
  }
  if (!any || agg.n == 0) return std::nullopt;
  return agg;
}

bool all_extraction_failed(const CellStats& cell) {
  return cell.n > 0 && cell.extraction_failures == cell.n;
}

std::string avg_cell(const std::vector<CellStats>& cells, bool exclude_failed_cells) {
  double sum = 0.0;
  int counted = 0;
  for (const CellStats& c : cells) {
    if (exclude_failed_cells && all_extraction_failed(c)) continue;
    sum += c.accuracy().to_double() * 100.0;
    ++counted;
  }
  if (counted == 0) return "—";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", sum / counted);
  return buf;
}

std::string pct_or_dash(const std::optional<CellStats>& cell) {
  if (!cell) return "—";
  return format_percent(cell->accuracy());
}

} // namespace

std::string report_to_markdown(const BenchmarkReport& report) {
  std::set<std::string> model_set;
  std::set<std::string> category_set;
  for (const auto& [key, _] : report.cells) {
    model_set.insert(key.model);
    category_set.insert(key.category);
  }
  const std::vector<std::string> models(model_set.begin(), model_set.end());

  std::ostringstream out;
  out << "# Benchmark report\n\n";

  // ---- main table: inquiry after context, clues scattered -----------------
  out << "## Accuracy by context length (inquiry last, multi-hop)\n\n";
  out << "Q-O is the original short question, Q-E the expanded context without "
         "distractors. Avg averages the length columns including all-extraction-failure "
         "cells as 0; Avg\\* excludes such cells.\n\n";
  out << "| Model | Q-O | Q-E |";
  for (long long len : report.lengths) out << ' ' << len << " |";
  out << " Avg | Avg\\* |\n";
  out << "|---|---|---|";
  for (std::size_t i = 0; i < report.lengths.size(); ++i) out << "---|";
  out << "---|---|\n";
  out << "| random (baseline) |";
  for (std::size_t i = 0; i < 2 + report.lengths.size() + 2; ++i)
    out << ' ' << format_percent(report.random_baseline) << " |";
  out << '\n';
  for (const std::string& model : models) {
    out << "| " << model << " | " << pct_or_dash(slice(report, model, "short", "-", "-")) << " | "
        << pct_or_dash(slice(report, model, "expanded", "-", "-")) << " |";
    std::vector<CellStats> length_cells;
    for (long long len : report.lengths) {
      auto cell = slice(report, model, std::to_string(len), "after", "multi");
      out << ' ' << pct_or_dash(cell) << " |";
      if (cell) length_cells.push_back(*cell);
    }
    out << ' ' << avg_cell(length_cells, false) << " | " << avg_cell(length_cells, true) << " |\n";
  }
  out << '\n';

  // ---- inquiry position ablation ------------------------------------------
  out << "## Inquiry position (multi-hop): I-L = inquiry last, I-F = inquiry first\n\n";
  out << "| Model |";
  for (long long len : report.lengths) out << ' ' << len << " I-L | " << len << " I-F |";
  out << "\n|---|";
  for (std::size_t i = 0; i < report.lengths.size(); ++i) out << "---|---|";
  out << '\n';
  for (const std::string& model : models) {
    out << "| " << model << " |";
    for (long long len : report.lengths) {
      out << ' ' << pct_or_dash(slice(report, model, std::to_string(len), "after", "multi"))
          << " | " << pct_or_dash(slice(report, model, std::to_string(len), "before", "multi"))
          << " |";
    }
    out << '\n';
  }
  out << '\n';

  // ---- hop mode comparison -------------------------------------------------
  out << "## Clue layout (inquiry last): scattered vs contiguous\n\n";
  out << "| Model |";
  for (long long len : report.lengths) out << ' ' << len << " multi | " << len << " single |";
  out << "\n|---|";
  for (std::size_t i = 0; i < report.lengths.size(); ++i) out << "---|---|";
  out << '\n';
  for (const std::string& model : models) {
    out << "| " << model << " |";
    for (long long len : report.lengths) {
      out << ' ' << pct_or_dash(slice(report, model, std::to_string(len), "after", "multi"))
          << " | " << pct_or_dash(slice(report, model, std::to_string(len), "after", "single"))
          << " |";
    }
    out << '\n';
  }
  out << '\n';

  // ---- per-category breakdown ----------------------------------------------
  out << "## Accuracy by category (all variants pooled)\n\n";
  out << "| Model |";
  for (const std::string& cat : category_set) out << ' ' << cat << " |";
  out << " extraction failures |\n|---|";
  for (std::size_t i = 0; i < category_set.size(); ++i) out << "---|";
  out << "---|\n";
  for (const std::string& model : models) {
    out << "| " << model << " |";
    long long failures = 0, total = 0;
    for (const std::string& cat : category_set) {
      CellStats agg;
      for (const auto& [key, cell] : report.cells) {
        if (key.model != model || key.category != cat) continue;
        agg.n += cell.n;
        agg.correct += cell.correct;
        agg.extraction_failures += cell.extraction_failures;
      }
      out << ' ' << (agg.n > 0 ? format_percent(agg.accuracy()) : "—") << " |";
    }
    for (const auto& [key, cell] : report.cells) {
      if (key.model != model) continue;
      failures += cell.extraction_failures;
      total += cell.n;
    }
    out << ' ' << failures << '/' << total << " |\n";
  }
  out << '\n';
  out << "Random baseline (mean of 1/|options|): " << report.random_baseline.str() << " = "
      << format_percent(report.random_baseline)
      << "%. Baseline values are dataset-specific: they depend on the option-count mix of the "
         "seed set.\n";
  return out.str();
}

} // namespace longweave
