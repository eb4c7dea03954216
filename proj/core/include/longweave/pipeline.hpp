#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "longweave/assemble.hpp"
#include "longweave/corpus.hpp"
#include "longweave/evaluate.hpp"
#include "longweave/ini.hpp"
#include "longweave/llm.hpp"
#include "longweave/pool.hpp"
#include "longweave/prompts.hpp"
#include "longweave/tokenizer.hpp"

namespace longweave {

// The pipeline stages, in execution order. `ingest` imports and validates
// seed questions; `pool` ingests and rewrites the distractor corpus; the
// rest follow the synthesis -> assembly -> scoring chain.
enum class Stage { ingest, steps, decompose, expand, pool, assemble, eval, report };

std::string to_string(Stage s);
Stage stage_from_string(const std::string& s);
const std::vector<Stage>& all_stages();

// Everything a run needs, loaded from one INI file. Relative paths in the
// file resolve against the file's own directory; cache directories resolve
// against work_dir. API keys are read from the environment variable named in
// api_key_env at call time — key material never appears in the file.
struct PipelineConfig {
  std::filesystem::path config_dir;

  // [pipeline]
  std::filesystem::path work_dir;
  std::uint64_t seed = 0; // required: no wall-clock fallback, ever
  std::string tokenizer_spec = "whitespace";
  int min_steps = 2;
  double tolerance = 0.05;
  std::vector<long long> lengths;
  std::vector<InquiryPosition> positions;
  std::vector<HopMode> hops;
  std::vector<std::string> genres;
  int min_passage_words = 20;
  int max_samples = 5;
  double synth_temperature = 0.7;
  bool inline_prompts = false;
  std::filesystem::path prompts_dir;

  // [paths]
  std::filesystem::path seeds_path;
  std::vector<std::filesystem::path> corpus_paths;

  // [synthesis]
  std::string synth_backend;
  std::string synth_model;
  int synth_max_tokens = 2048;
  int expand_max_tokens = 4096;
  int step_max_tokens = 512;
  int step_attempts = 3;
  int rewrite_max_tokens = 1024;

  // [eval]
  std::string eval_backend;
  std::vector<std::string> eval_models;
  int eval_max_parallel = 4;
  int eval_max_tokens = 1024;

  // [backend.NAME]
  std::map<std::string, BackendConfig> backends;
  // raw cache_dir values per backend; "", "off" and "none" disable caching
  std::map<std::string, std::string> backend_cache_dirs;

  // [prices]
  PriceTable prices;

  static PipelineConfig load(const std::filesystem::path& ini_path);
  void validate() const; // load() calls this; throws on contradictions
};

// Flag-level overrides for the assemble stage.
struct AssembleOverrides {
  std::optional<std::vector<long long>> lengths;
  std::optional<std::vector<InquiryPosition>> positions;
  std::optional<std::vector<HopMode>> hops;
  std::optional<std::uint64_t> seed;
  std::optional<double> tolerance;
  std::optional<std::string> tokenizer_spec;
};

// Flag-level overrides for the eval stage.
struct EvalOverrides {
  std::optional<std::string> model; // evaluate just this model
  std::optional<std::string> backend;
  std::optional<int> max_parallel;
  bool resume = false; // reuse records already on disk for this model
};

struct StageSummary {
  Stage stage = Stage::ingest;
  double seconds = 0.0;
  Json counts; // stage-specific tallies, also appended to summaries.jsonl
};

// Exclusive claim on a work directory, so two runs cannot interleave stage
// writes. Creates work_dir/.lock with the owner pid; removed on destruction.
class WorkDirLock {
 public:
  explicit WorkDirLock(const std::filesystem::path& work_dir);
  ~WorkDirLock();
  WorkDirLock(const WorkDirLock&) = delete;
  WorkDirLock& operator=(const WorkDirLock&) = delete;

 private:
  std::filesystem::path path_;
};

// Drives the stages over a work directory. Every stage writes its outputs
// atomically (temp file + rename) and appends one row to summaries.jsonl;
// rerunning a stage replaces its outputs wholesale. Downstream stages read
// only stage files, never process state, so any stage can be rerun alone.
class Pipeline {
 public:
  explicit Pipeline(PipelineConfig config);

  StageSummary run_stage(Stage stage);
  std::vector<StageSummary> run_all();

  StageSummary run_assemble(const AssembleOverrides& overrides);
  StageSummary run_eval(const EvalOverrides& overrides);

  const PipelineConfig& config() const { return config_; }

  std::filesystem::path stages_dir() const { return config_.work_dir / "stages"; }
  std::filesystem::path seeds_valid_path() const { return stages_dir() / "seeds_valid.jsonl"; }
  std::filesystem::path seeds_steps_path() const { return stages_dir() / "seeds_steps.jsonl"; }
  std::filesystem::path steps_rejects_path() const { return stages_dir() / "steps_rejects.jsonl"; }
  std::filesystem::path decompositions_path() const {
    return stages_dir() / "decompositions.jsonl";
  }
  std::filesystem::path decompose_rejects_path() const {
    return stages_dir() / "decompose_rejects.jsonl";
  }
  std::filesystem::path expansions_path() const { return stages_dir() / "expansions.jsonl"; }
  std::filesystem::path expand_rejects_path() const {
    return stages_dir() / "expand_rejects.jsonl";
  }
  std::filesystem::path pool_path() const { return stages_dir() / "pool.jsonl"; }
  std::filesystem::path manifest_path() const { return stages_dir() / "manifest.jsonl"; }
  std::filesystem::path assemble_errors_path() const {
    return stages_dir() / "assemble_errors.jsonl";
  }
  std::filesystem::path eval_records_path(const std::string& model) const;
  std::filesystem::path summaries_path() const { return config_.work_dir / "summaries.jsonl"; }
  std::filesystem::path report_csv_path() const { return config_.work_dir / "report.csv"; }
  std::filesystem::path report_md_path() const { return config_.work_dir / "report.md"; }
  std::filesystem::path usage_path() const { return config_.work_dir / "usage.json"; }

  // The genre styling a given seed's expansion, derived from (run seed,
  // seed id) alone so reruns agree.
  std::string genre_for(const std::string& seed_id) const;

  LlmClient& client_for(const std::string& backend_name);

 private:
  StageSummary run_ingest();
  StageSummary run_steps();
  StageSummary run_decompose();
  StageSummary run_expand();
  StageSummary run_pool();
  StageSummary do_assemble(const AssembleOverrides& overrides);
  StageSummary do_eval(const EvalOverrides& overrides);
  StageSummary run_report();

  void ensure_locked();
  const PromptLibrary& prompts();
  void require_artifact(const std::filesystem::path& path, Stage producer) const;
  std::vector<SeedQuestion> read_seeds(const std::filesystem::path& path) const;
  std::string prompt_text_for_row(const Json& row) const;
  Json usage_snapshot() const; // backend -> model -> {calls, tokens}
  StageSummary finish_stage(Stage stage, double seconds, Json counts,
                            const Json& usage_before);

  PipelineConfig config_;
  std::unique_ptr<WorkDirLock> lock_;
  std::optional<PromptLibrary> prompts_;
  std::map<std::string, std::unique_ptr<LlmClient>> clients_;
};

} // namespace longweave
