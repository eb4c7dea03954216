#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "longweave/corpus.hpp"
#include "longweave/llm.hpp"
#include "longweave/rational.hpp"

namespace longweave {

struct EvalRecord {
  std::string model;
  std::string variant_ref; // variant_id from the dataset manifest
  std::string completion;  // the model's reasoning chain
  std::optional<std::string> extracted; // option label, unset = extraction failed
  std::optional<bool> correct;          // set iff extracted is set
  long long prompt_tokens = 0;
  long long completion_tokens = 0;
  long long latency_ms = 0;
  bool from_cache = false;
  std::string error; // transport failure note; completion empty in that case

  Json to_json() const;
  static EvalRecord from_json(const Json& obj);
};

// The LAST case-insensitive "the answer is" governs; after it, wrapper
// characters (space, '*', '(', '"', '$') are skipped and the next character
// must be a capital A-E.
std::optional<char> extract_answer(const std::string& completion);

struct EvalTask {
  std::string variant_id;
  std::string prompt_text;
  std::string answer_label; // ground truth from the seed question
};

// One record per task, in task order. Tasks already present in `existing`
// are carried over without a backend call (resume). Transport failures after
// retries become records with an error note and unset extraction — never
// dropped. Runs with bounded parallelism.
std::vector<EvalRecord> run_eval(LlmClient& client, const std::vector<EvalTask>& tasks,
                                 const std::string& model, int max_parallel = 4,
                                 int max_tokens = 1024,
                                 const std::map<std::string, EvalRecord>* existing = nullptr);

struct CellKey {
  std::string model;
  std::string column;   // "short" | "expanded" | decimal target length
  std::string category;
  std::string position; // "after" | "before" | "-" for non-long kinds
  std::string hop;      // "multi" | "single" | "-"
  auto operator<=>(const CellKey&) const = default;
};

struct CellStats {
  long long correct = 0;
  long long n = 0;
  long long extraction_failures = 0;
  Rational accuracy() const { return n > 0 ? Rational(correct, n) : Rational(0, 1); }
  Rational failure_rate() const {
    return n > 0 ? Rational(extraction_failures, n) : Rational(0, 1);
  }
};

struct BenchmarkReport {
  std::map<CellKey, CellStats> cells; // finest grain
  Rational random_baseline{0, 1};
  std::vector<long long> lengths; // configured length set, for Avg columns
  long long total_records = 0;
};

// Joins records to manifest rows (by variant_ref) and seeds (by seed_id);
// extraction failures count as incorrect and are tallied separately. Throws
// on a record with no manifest entry.
BenchmarkReport aggregate(const std::vector<EvalRecord>& records,
                          const std::vector<Json>& manifest_rows,
                          const std::vector<SeedQuestion>& seeds,
                          const std::vector<long long>& lengths);

// Mean over questions of 1/|options|, exact.
Rational random_baseline(const std::vector<SeedQuestion>& seeds);

std::string report_to_csv(const BenchmarkReport& report);

// Rebuilds (cells, baseline) from CSV emitted by report_to_csv; marginal
// rows are ignored. Used to prove the CSV round-trips.
std::pair<std::map<CellKey, CellStats>, Rational> parse_report_csv(const std::string& csv);

std::string report_to_markdown(const BenchmarkReport& report);

} // namespace longweave
