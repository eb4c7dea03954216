#include "longweave/pipeline.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cstring>
#include <ctime>
#include <set>
#include <stdexcept>

#include "longweave/decompose.hpp"
#include "longweave/digest.hpp"
#include "longweave/expand.hpp"
#include "longweave/text.hpp"

namespace longweave {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Stage names

std::string to_string(Stage s) {
  switch (s) {
    case Stage::ingest: return "ingest";
    case Stage::steps: return "steps";
    case Stage::decompose: return "decompose";
    case Stage::expand: return "expand";
    case Stage::pool: return "pool";
    case Stage::assemble: return "assemble";
    case Stage::eval: return "eval";
    case Stage::report: return "report";
  }
  throw std::logic_error("unreachable stage value");
}

Stage stage_from_string(const std::string& s) {
  for (Stage st : all_stages()) {
    if (to_string(st) == s) return st;
  }
  throw std::runtime_error("unknown stage '" + s +
                           "' (expected one of: ingest, steps, decompose, expand, pool, "
                           "assemble, eval, report)");
}

const std::vector<Stage>& all_stages() {
  static const std::vector<Stage> order = {Stage::ingest,   Stage::steps, Stage::decompose,
                                           Stage::expand,   Stage::pool,  Stage::assemble,
                                           Stage::eval,     Stage::report};
  return order;
}

// ---------------------------------------------------------------------------
// Config

namespace {

fs::path resolve_against(const fs::path& base, const std::string& value) {
  fs::path p(value);
  return p.is_absolute() ? p : base / p;
}

long long parse_ll(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    long long v = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error(what + ": '" + s + "' is not an integer");
  }
}

double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error(what + ": '" + s + "' is not a number");
  }
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::array<char, 32> buf{};
  std::strftime(buf.data(), buf.size(), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf.data();
}

std::string sanitize_for_filename(const std::string& name) {
  std::string out;
  out.reserve(name.size());
  for (char c : name) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '.' || c == '_' || c == '-';
    out.push_back(ok ? c : '_');
  }
  return out;
}

} // namespace

PipelineConfig PipelineConfig::load(const fs::path& ini_path) {
  const IniFile ini = IniFile::parse_file(ini_path);
  PipelineConfig c;
  c.config_dir = fs::absolute(ini_path).parent_path();

  // [pipeline]
  c.work_dir = resolve_against(c.config_dir, ini.require("pipeline", "work_dir"));
  c.seed = static_cast<std::uint64_t>(ini.require_int("pipeline", "seed"));
  c.tokenizer_spec = ini.get_or("pipeline", "tokenizer", "whitespace");
  if (c.tokenizer_spec.rfind("bpe:", 0) == 0) {
    const fs::path merges = resolve_against(c.config_dir, c.tokenizer_spec.substr(4));
    c.tokenizer_spec = "bpe:" + merges.string();
  }
  c.min_steps = static_cast<int>(ini.get_int_or("pipeline", "min_steps", 2));
  c.tolerance = ini.get_double_or("pipeline", "tolerance", 0.05);
  for (const std::string& item : ini.get_list_or(
           "pipeline", "lengths", {"8192", "16384", "32768", "65536", "131072"})) {
    c.lengths.push_back(parse_ll(item, "pipeline.lengths"));
  }
  for (const std::string& item : ini.get_list_or("pipeline", "positions", {"after"})) {
    c.positions.push_back(inquiry_position_from_string(item));
  }
  for (const std::string& item : ini.get_list_or("pipeline", "hops", {"multi"})) {
    c.hops.push_back(hop_mode_from_string(item));
  }
  c.genres = ini.get_list_or("pipeline", "genres", {});
  if (c.genres.empty()) c.genres = default_genres();
  c.min_passage_words = static_cast<int>(ini.get_int_or("pipeline", "min_passage_words", 20));
  c.max_samples = static_cast<int>(ini.get_int_or("pipeline", "max_samples", 5));
  c.synth_temperature = ini.get_double_or("pipeline", "synth_temperature", 0.7);
  c.inline_prompts = ini.get_bool_or("pipeline", "inline_prompts", false);
  c.prompts_dir = resolve_against(c.config_dir, ini.get_or("pipeline", "prompts_dir", "prompts"));

  // [paths]
  c.seeds_path = resolve_against(c.config_dir, ini.require("paths", "seeds"));
  for (const std::string& item : ini.get_list_or("paths", "corpus", {})) {
    c.corpus_paths.push_back(resolve_against(c.config_dir, item));
  }

  // [synthesis]
  if (ini.has_section("synthesis")) {
    c.synth_backend = ini.require("synthesis", "backend");
    c.synth_model = ini.require("synthesis", "model");
    c.synth_max_tokens = static_cast<int>(ini.get_int_or("synthesis", "max_tokens", 2048));
    c.expand_max_tokens =
        static_cast<int>(ini.get_int_or("synthesis", "expand_max_tokens", 4096));
    c.step_max_tokens = static_cast<int>(ini.get_int_or("synthesis", "step_max_tokens", 512));
    c.step_attempts = static_cast<int>(ini.get_int_or("synthesis", "step_attempts", 3));
    c.rewrite_max_tokens =
        static_cast<int>(ini.get_int_or("synthesis", "rewrite_max_tokens", 1024));
  }

  // [eval]
  if (ini.has_section("eval")) {
    c.eval_backend = ini.require("eval", "backend");
    for (const std::string& m : ini.get_list_or("eval", "models", {})) c.eval_models.push_back(m);
    c.eval_max_parallel = static_cast<int>(ini.get_int_or("eval", "max_parallel", 4));
    c.eval_max_tokens = static_cast<int>(ini.get_int_or("eval", "max_tokens", 1024));
  }

  // [backend.NAME]
  for (const std::string& section : ini.sections_with_prefix("backend.")) {
    const std::string name = section.substr(std::string("backend.").size());
    if (name.empty()) throw std::runtime_error("backend section with empty name: [" + section + "]");
    BackendConfig b;
    b.name = name;
    b.type = ini.require(section, "type");
    if (b.type == "mock") {
      b.script_path = resolve_against(c.config_dir, ini.require(section, "script")).string();
    } else if (b.type == "http") {
      b.base_url = ini.require(section, "endpoint");
      b.api_path = ini.get_or(section, "api_path", b.api_path);
      b.api_key_env = ini.get_or(section, "api_key_env", "");
      b.timeout_s = static_cast<int>(ini.get_int_or(section, "timeout_s", b.timeout_s));
    } else {
      throw std::runtime_error("[" + section + "] type must be 'mock' or 'http', got '" +
                               b.type + "'");
    }
    b.retry.max_retries = static_cast<int>(ini.get_int_or(section, "max_retries", 3));
    b.retry.initial_delay_ms =
        static_cast<int>(ini.get_int_or(section, "backoff_initial_ms", 200));
    b.retry.multiplier = ini.get_double_or(section, "backoff_multiplier", 2.0);
    b.retry.max_delay_ms = static_cast<int>(ini.get_int_or(section, "backoff_max_ms", 10'000));
    const double rpm = ini.get_double_or(section, "rate_limit_rpm", 60'000.0);
    if (!(rpm > 0.0)) {
      throw std::runtime_error("[" + section + "] rate_limit_rpm must be positive, got " +
                               std::to_string(rpm));
    }
    b.requests_per_second = rpm / 60.0;
    c.backends[name] = b;
    c.backend_cache_dirs[name] = ini.get_or(section, "cache_dir", "cache/" + name);
  }

  // [prices] — model = prompt_usd_per_mtok,completion_usd_per_mtok
  if (ini.has_section("prices")) {
    for (const auto& [model, value] : ini.data().at("prices")) {
      const auto comma = value.find(',');
      if (comma == std::string::npos) {
        throw std::runtime_error("[prices] " + model +
                                 ": expected 'prompt,completion' USD per million tokens");
      }
      ModelPrice p;
      p.prompt_usd_per_mtok = parse_double(trim(value.substr(0, comma)), "[prices] " + model);
      p.completion_usd_per_mtok =
          parse_double(trim(value.substr(comma + 1)), "[prices] " + model);
      c.prices[model] = p;
    }
  }

  c.validate();
  return c;
}

void PipelineConfig::validate() const {
  if (!(tolerance > 0.0 && tolerance < 1.0)) {
    throw std::runtime_error("pipeline.tolerance must lie in (0, 1), got " +
                             std::to_string(tolerance));
  }
  if (lengths.empty()) throw std::runtime_error("pipeline.lengths must name at least one target");
  for (long long len : lengths) {
    if (len <= 0) {
      throw std::runtime_error("pipeline.lengths entries must be positive, got " +
                               std::to_string(len));
    }
  }
  std::set<long long> unique_lengths(lengths.begin(), lengths.end());
  if (unique_lengths.size() != lengths.size()) {
    throw std::runtime_error("pipeline.lengths contains a duplicate target");
  }
  if (positions.empty()) throw std::runtime_error("pipeline.positions must not be empty");
  if (hops.empty()) throw std::runtime_error("pipeline.hops must not be empty");
  if (genres.empty()) throw std::runtime_error("pipeline.genres must not be empty");
  if (min_steps < 0) throw std::runtime_error("pipeline.min_steps must be >= 0");
  if (max_samples < 1) throw std::runtime_error("pipeline.max_samples must be >= 1");
  if (min_passage_words < 1) throw std::runtime_error("pipeline.min_passage_words must be >= 1");
  if (!(synth_temperature >= 0.0)) {
    throw std::runtime_error("pipeline.synth_temperature must be >= 0");
  }
  if (!synth_backend.empty() && !backends.count(synth_backend)) {
    throw std::runtime_error("synthesis.backend '" + synth_backend + "' has no [backend." +
                             synth_backend + "] section");
  }
  if (!eval_backend.empty()) {
    if (!backends.count(eval_backend)) {
      throw std::runtime_error("eval.backend '" + eval_backend + "' has no [backend." +
                               eval_backend + "] section");
    }
    if (eval_models.empty()) {
      throw std::runtime_error("eval.models must name at least one model");
    }
    if (eval_max_parallel < 1) throw std::runtime_error("eval.max_parallel must be >= 1");
  }
  if (tokenizer_spec != "whitespace" && tokenizer_spec.rfind("bpe:", 0) != 0) {
    throw std::runtime_error("pipeline.tokenizer must be 'whitespace' or 'bpe:<merges-file>', "
                             "got '" + tokenizer_spec + "'");
  }
}

// ---------------------------------------------------------------------------
// Work-dir lock

WorkDirLock::WorkDirLock(const fs::path& work_dir) {
  fs::create_directories(work_dir);
  path_ = work_dir / ".lock";
  const int fd = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
  if (fd < 0) {
    if (errno == EEXIST) {
      std::string holder = "unknown pid";
      try {
        holder = "pid " + trim(read_file(path_));
      } catch (const std::exception&) {
      }
      throw std::runtime_error("work dir '" + work_dir.string() + "' is locked by " + holder +
                               "; remove " + path_.string() + " if that process is gone");
    }
    throw std::runtime_error("cannot create lock file " + path_.string() + ": " +
                             std::strerror(errno));
  }
  const std::string pid = std::to_string(::getpid()) + "\n";
  // Best-effort: the lock's existence is the claim; the pid is a courtesy.
  [[maybe_unused]] const ssize_t written = ::write(fd, pid.data(), pid.size());
  ::close(fd);
}

WorkDirLock::~WorkDirLock() {
  std::error_code ec;
  fs::remove(path_, ec);
}

// ---------------------------------------------------------------------------
// Pipeline

Pipeline::Pipeline(PipelineConfig config) : config_(std::move(config)) {}

void Pipeline::ensure_locked() {
  if (lock_) return;
  lock_ = std::make_unique<WorkDirLock>(config_.work_dir);
  fs::create_directories(stages_dir());
}

const PromptLibrary& Pipeline::prompts() {
  if (!prompts_) prompts_ = PromptLibrary::load_dir(config_.prompts_dir);
  return *prompts_;
}

LlmClient& Pipeline::client_for(const std::string& backend_name) {
  if (backend_name.empty()) {
    throw std::runtime_error("no backend configured for this stage (check [synthesis]/[eval])");
  }
  auto it = clients_.find(backend_name);
  if (it != clients_.end()) return *it->second;
  auto cfg_it = config_.backends.find(backend_name);
  if (cfg_it == config_.backends.end()) {
    throw std::runtime_error("unknown backend '" + backend_name + "'; add a [backend." +
                             backend_name + "] section");
  }
  const BackendConfig& bc = cfg_it->second;
  LlmClient::Options options;
  options.retry = bc.retry;
  options.requests_per_second = bc.requests_per_second;
  const std::string raw_cache = config_.backend_cache_dirs.at(backend_name);
  if (!raw_cache.empty() && raw_cache != "off" && raw_cache != "none") {
    fs::path cache(raw_cache);
    options.cache_dir = cache.is_absolute() ? cache : config_.work_dir / cache;
  }
  auto client = std::make_unique<LlmClient>(make_backend(bc), options);
  LlmClient& ref = *client;
  clients_[backend_name] = std::move(client);
  return ref;
}

void Pipeline::require_artifact(const fs::path& path, Stage producer) const {
  if (!fs::exists(path)) {
    throw std::runtime_error("missing " + path.string() + " — run the '" + to_string(producer) +
                             "' stage first");
  }
}

std::vector<SeedQuestion> Pipeline::read_seeds(const fs::path& path) const {
  return import_seed_questions(path);
}

std::string Pipeline::prompt_text_for_row(const Json& row) const {
  if (row.contains("prompt_text")) return row.at("prompt_text").get<std::string>();
  const std::string rel = row.at("prompt_path").get<std::string>();
  const fs::path p = config_.work_dir / rel;
  const std::string text = read_file(p);
  const std::string expect = row.at("prompt_sha256").get<std::string>();
  if (sha256_hex(text) != expect) {
    throw std::runtime_error("prompt file " + p.string() +
                             " no longer matches its manifest digest; rerun 'assemble'");
  }
  return text;
}

Json Pipeline::usage_snapshot() const {
  Json snap = Json::object();
  for (const auto& [name, client] : clients_) {
    Json models = Json::object();
    for (const auto& [model, usage] : client->usage()) {
      models[model] = {{"calls", usage.calls},
                       {"prompt_tokens", usage.prompt_tokens},
                       {"completion_tokens", usage.completion_tokens}};
    }
    snap[name] = models;
  }
  return snap;
}

namespace {

// after - before, field by field; backends/models absent earlier count from 0
Json usage_delta(const Json& before, const Json& after) {
  Json delta = Json::object();
  for (auto it = after.begin(); it != after.end(); ++it) {
    const std::string& backend = it.key();
    Json models = Json::object();
    for (auto jt = it.value().begin(); jt != it.value().end(); ++jt) {
      const std::string& model = jt.key();
      Json row = Json::object();
      for (const char* field : {"calls", "prompt_tokens", "completion_tokens"}) {
        long long prev = 0;
        if (before.contains(backend) && before.at(backend).contains(model)) {
          prev = before.at(backend).at(model).at(field).get<long long>();
        }
        row[field] = jt.value().at(field).get<long long>() - prev;
      }
      if (row.at("calls").get<long long>() != 0 ||
          row.at("prompt_tokens").get<long long>() != 0 ||
          row.at("completion_tokens").get<long long>() != 0) {
        models[model] = row;
      }
    }
    if (!models.empty()) delta[backend] = models;
  }
  return delta;
}

} // namespace

StageSummary Pipeline::finish_stage(Stage stage, double seconds, Json counts,
                                    const Json& usage_before) {
  StageSummary summary;
  summary.stage = stage;
  summary.seconds = seconds;
  summary.counts = std::move(counts);

  Json row = Json::object();
  row["stage"] = to_string(stage);
  row["finished_at"] = utc_timestamp();
  row["seconds"] = seconds;
  row["counts"] = summary.counts;
  row["usage"] = usage_delta(usage_before, usage_snapshot());
  append_jsonl(summaries_path(), row);

  // Cumulative usage/cost for this process, refreshed after every stage.
  Json usage = Json::object();
  for (const auto& [name, client] : clients_) {
    usage[name] = client->usage_report(config_.prices);
  }
  atomic_write_file(usage_path(), usage.dump(2) + "\n");

  return summary;
}

std::string Pipeline::genre_for(const std::string& seed_id) const {
  const std::uint64_t h = mix64(config_.seed ^ sha256_prefix64("genre:" + seed_id));
  return config_.genres[h % config_.genres.size()];
}

fs::path Pipeline::eval_records_path(const std::string& model) const {
  return stages_dir() / ("eval_records." + sanitize_for_filename(model) + ".jsonl");
}

StageSummary Pipeline::run_stage(Stage stage) {
  switch (stage) {
    case Stage::ingest: return run_ingest();
    case Stage::steps: return run_steps();
    case Stage::decompose: return run_decompose();
    case Stage::expand: return run_expand();
    case Stage::pool: return run_pool();
    case Stage::assemble: return do_assemble({});
    case Stage::eval: return do_eval({});
    case Stage::report: return run_report();
  }
  throw std::logic_error("unreachable stage value");
}

std::vector<StageSummary> Pipeline::run_all() {
  std::vector<StageSummary> out;
  out.reserve(all_stages().size());
  for (Stage stage : all_stages()) out.push_back(run_stage(stage));
  return out;
}

StageSummary Pipeline::run_assemble(const AssembleOverrides& overrides) {
  return do_assemble(overrides);
}

StageSummary Pipeline::run_eval(const EvalOverrides& overrides) { return do_eval(overrides); }

namespace {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

} // namespace

// ---------------------------------------------------------------------------
// Stages

StageSummary Pipeline::run_ingest() {
  ensure_locked();
  const Json before = usage_snapshot();
  Stopwatch watch;

  const std::vector<SeedQuestion> seeds = read_seeds(config_.seeds_path);
  export_seed_questions(seeds_valid_path(), seeds);

  Json counts = {{"seeds", seeds.size()}};
  return finish_stage(Stage::ingest, watch.seconds(), std::move(counts), before);
}

StageSummary Pipeline::run_steps() {
  ensure_locked();
  require_artifact(seeds_valid_path(), Stage::ingest);
  const Json before = usage_snapshot();
  Stopwatch watch;

  std::vector<SeedQuestion> seeds = read_seeds(seeds_valid_path());
  LlmClient& client = client_for(config_.synth_backend);

  std::vector<SeedQuestion> retained;
  std::vector<Json> rejects;
  long long unparsed = 0;
  for (SeedQuestion& q : seeds) {
    const StepCountResult res =
        count_reasoning_steps(client, prompts(), config_.synth_model, q, config_.step_attempts,
                              config_.synth_temperature, config_.step_max_tokens);
    if (res.steps.has_value() && *res.steps >= config_.min_steps) {
      q.step_count = res.steps;
      retained.push_back(q);
      continue;
    }
    if (!res.steps.has_value()) ++unparsed;
    Json row = Json::object();
    row["seed_id"] = q.id;
    row["steps"] = res.steps.has_value() ? Json(*res.steps) : Json(nullptr);
    row["attempts"] = res.attempts;
    row["reason"] = res.steps.has_value() ? "below_min_steps" : "unparsed_step_count";
    rejects.push_back(std::move(row));
  }

  export_seed_questions(seeds_steps_path(), retained);
  write_jsonl_atomic(steps_rejects_path(), rejects);

  const StepHistogram hist = step_histogram(retained);
  Json hist_json = Json::object();
  for (const auto& [steps, n] : hist.buckets) hist_json[std::to_string(steps)] = n;
  Json counts = {{"judged", seeds.size()},
                 {"retained", retained.size()},
                 {"rejected", rejects.size()},
                 {"unparsed", unparsed},
                 {"min_steps", config_.min_steps},
                 {"mean_steps", hist.empty ? "-" : hist.mean_steps.str()},
                 {"histogram", hist_json}};
  return finish_stage(Stage::steps, watch.seconds(), std::move(counts), before);
}

StageSummary Pipeline::run_decompose() {
  ensure_locked();
  require_artifact(seeds_steps_path(), Stage::steps);
  const Json before = usage_snapshot();
  Stopwatch watch;

  const std::vector<SeedQuestion> seeds = read_seeds(seeds_steps_path());
  LlmClient& client = client_for(config_.synth_backend);

  std::vector<Json> rows;
  std::vector<Json> rejects;
  for (const SeedQuestion& q : seeds) {
    const DecomposeOutcome outcome =
        decompose(client, prompts(), config_.synth_model, q, config_.max_samples,
                  config_.synth_temperature, config_.synth_max_tokens);
    if (outcome.ok()) {
      rows.push_back(outcome.result->to_json());
    } else {
      Json samples = Json::array();
      for (const DecomposeSampleRecord& rec : outcome.history) samples.push_back(rec.to_json());
      rejects.push_back({{"seed_id", q.id}, {"samples", samples}});
    }
  }

  write_jsonl_atomic(decompositions_path(), rows);
  write_jsonl_atomic(decompose_rejects_path(), rejects);

  Json counts = {{"questions", seeds.size()},
                 {"decomposed", rows.size()},
                 {"rejected", rejects.size()}};
  return finish_stage(Stage::decompose, watch.seconds(), std::move(counts), before);
}

StageSummary Pipeline::run_expand() {
  ensure_locked();
  require_artifact(decompositions_path(), Stage::decompose);
  const Json before = usage_snapshot();
  Stopwatch watch;

  LlmClient& client = client_for(config_.synth_backend);

  std::vector<Json> rows;
  std::vector<Json> rejects;
  std::size_t total = 0;
  for (const Json& obj : read_jsonl(decompositions_path())) {
    ++total;
    const DecomposedQuestion d = DecomposedQuestion::from_json(obj);
    const std::string genre = genre_for(d.seed_id);
    const ExpandOutcome outcome =
        expand(client, prompts(), config_.synth_model, d, genre, config_.max_samples,
               config_.synth_temperature, config_.expand_max_tokens);
    if (outcome.ok()) {
      rows.push_back(outcome.result->to_json());
    } else {
      Json samples = Json::array();
      for (const ExpandSampleRecord& rec : outcome.history) samples.push_back(rec.to_json());
      rejects.push_back({{"seed_id", d.seed_id}, {"genre", genre}, {"samples", samples}});
    }
  }

  write_jsonl_atomic(expansions_path(), rows);
  write_jsonl_atomic(expand_rejects_path(), rejects);

  Json counts = {{"decompositions", total}, {"expanded", rows.size()}, {"rejected", rejects.size()}};
  return finish_stage(Stage::expand, watch.seconds(), std::move(counts), before);
}

StageSummary Pipeline::run_pool() {
  ensure_locked();
  if (config_.corpus_paths.empty()) {
    throw std::runtime_error("paths.corpus names no files — the pool stage needs raw passages");
  }
  const Json before = usage_snapshot();
  Stopwatch watch;

  const IngestResult ingest = ingest_corpus(config_.corpus_paths, config_.min_passage_words);
  LlmClient& client = client_for(config_.synth_backend);
  const std::shared_ptr<Tokenizer> tok = make_tokenizer(config_.tokenizer_spec);

  DistractorPool pool;
  long long duplicates = 0;
  for (const RawPassage& raw : ingest.passages) {
    DistractorPassage p = rewrite_passage(client, prompts(), config_.synth_model, raw, *tok,
                                          config_.rewrite_max_tokens);
    if (!pool.insert(std::move(p))) ++duplicates;
  }
  pool.save_jsonl(pool_path());

  Json counts = {{"raw_passages", ingest.passages.size()},
                 {"dropped_short", ingest.dropped_short},
                 {"duplicates", duplicates},
                 {"pool_size", pool.size()},
                 {"pool_tokens", pool.total_tokens()}};
  return finish_stage(Stage::pool, watch.seconds(), std::move(counts), before);
}

StageSummary Pipeline::do_assemble(const AssembleOverrides& overrides) {
  ensure_locked();
  require_artifact(seeds_steps_path(), Stage::steps);
  require_artifact(decompositions_path(), Stage::decompose);
  require_artifact(expansions_path(), Stage::expand);
  require_artifact(pool_path(), Stage::pool);
  const Json before = usage_snapshot();
  Stopwatch watch;

  const std::vector<SeedQuestion> seeds = read_seeds(seeds_steps_path());
  std::map<std::string, DecomposedQuestion> decomps;
  for (const Json& obj : read_jsonl(decompositions_path())) {
    DecomposedQuestion d = DecomposedQuestion::from_json(obj);
    decomps.emplace(d.seed_id, std::move(d));
  }
  std::map<std::string, ExpandedContext> expansions;
  for (const Json& obj : read_jsonl(expansions_path())) {
    ExpandedContext e = ExpandedContext::from_json(obj);
    expansions.emplace(e.seed_id, std::move(e));
  }

  std::vector<QuestionBundle> bundles;
  for (const SeedQuestion& q : seeds) {
    auto d = decomps.find(q.id);
    auto e = expansions.find(q.id);
    if (d == decomps.end() || e == expansions.end()) continue; // rejected upstream
    bundles.push_back({q, d->second, e->second});
  }

  MatrixConfig mc;
  mc.lengths = overrides.lengths.value_or(config_.lengths);
  mc.positions = overrides.positions.value_or(config_.positions);
  mc.hops = overrides.hops.value_or(config_.hops);
  mc.seed = overrides.seed.value_or(config_.seed);
  mc.tolerance = overrides.tolerance.value_or(config_.tolerance);
  mc.inline_prompts = config_.inline_prompts;
  const std::string tok_spec = overrides.tokenizer_spec.value_or(config_.tokenizer_spec);
  const std::shared_ptr<Tokenizer> tok = make_tokenizer(tok_spec);

  const DistractorPool pool = DistractorPool::load_jsonl(pool_path());

  const fs::path prompt_dir = config_.work_dir / "prompts";
  if (!mc.inline_prompts) fs::create_directories(prompt_dir);
  const PromptSink sink = [&](const std::string& variant_id, const std::string& text) {
    const std::string rel = "prompts/" + sanitize_for_filename(variant_id) + ".txt";
    atomic_write_file(config_.work_dir / rel, text);
    return rel;
  };

  const MatrixResult result = build_variant_matrix(bundles, pool, mc, prompts(), *tok, sink);
  write_jsonl_atomic(manifest_path(), result.manifest);
  write_jsonl_atomic(assemble_errors_path(), result.errors);

  Json counts = {{"bundles", bundles.size()},
                 {"variants", result.manifest.size()},
                 {"errors", result.errors.size()},
                 {"tokenizer", tok->name()},
                 {"seed", mc.seed}};
  return finish_stage(Stage::assemble, watch.seconds(), std::move(counts), before);
}

StageSummary Pipeline::do_eval(const EvalOverrides& overrides) {
  ensure_locked();
  require_artifact(manifest_path(), Stage::assemble);
  require_artifact(seeds_steps_path(), Stage::steps);
  const Json before = usage_snapshot();
  Stopwatch watch;

  std::vector<std::string> models;
  if (overrides.model.has_value()) {
    models.push_back(*overrides.model);
  } else {
    models = config_.eval_models;
  }
  if (models.empty()) {
    throw std::runtime_error("no models to evaluate — set eval.models or pass --model");
  }
  {
    std::set<std::string> filenames;
    for (const std::string& m : models) {
      if (!filenames.insert(sanitize_for_filename(m)).second) {
        throw std::runtime_error("models '" + m + "' and another entry collide after filename "
                                 "sanitization; rename one");
      }
    }
  }
  const std::string backend_name = overrides.backend.value_or(config_.eval_backend);
  LlmClient& client = client_for(backend_name);
  const int max_parallel = overrides.max_parallel.value_or(config_.eval_max_parallel);

  std::map<std::string, std::string> answers; // seed_id -> answer label
  for (const SeedQuestion& q : read_seeds(seeds_steps_path())) answers[q.id] = q.answer;

  std::vector<EvalTask> tasks;
  for (const Json& row : read_jsonl(manifest_path())) {
    EvalTask task;
    task.variant_id = row.at("variant_id").get<std::string>();
    task.prompt_text = prompt_text_for_row(row);
    const std::string seed_id = row.at("seed_id").get<std::string>();
    auto it = answers.find(seed_id);
    if (it == answers.end()) {
      throw std::runtime_error("manifest row " + task.variant_id +
                               " references unknown seed '" + seed_id + "'");
    }
    task.answer_label = it->second;
    tasks.push_back(std::move(task));
  }

  long long transport_errors = 0;
  long long extraction_failures = 0;
  long long reused = 0;
  for (const std::string& model : models) {
    std::map<std::string, EvalRecord> existing;
    if (overrides.resume && fs::exists(eval_records_path(model))) {
      for (const Json& obj : read_jsonl(eval_records_path(model))) {
        EvalRecord rec = EvalRecord::from_json(obj);
        existing.emplace(rec.variant_ref, std::move(rec));
      }
    }
    const std::vector<EvalRecord> records =
        longweave::run_eval(client, tasks, model, max_parallel, config_.eval_max_tokens,
                 existing.empty() ? nullptr : &existing);
    std::vector<Json> rows;
    rows.reserve(records.size());
    for (const EvalRecord& rec : records) {
      if (!rec.error.empty()) ++transport_errors;
      if (rec.error.empty() && !rec.extracted.has_value()) ++extraction_failures;
      if (existing.count(rec.variant_ref)) ++reused;
      rows.push_back(rec.to_json());
    }
    write_jsonl_atomic(eval_records_path(model), rows);
  }

  Json counts = {{"variants", tasks.size()},
                 {"models", models.size()},
                 {"reused_records", reused},
                 {"transport_errors", transport_errors},
                 {"extraction_failures", extraction_failures}};
  return finish_stage(Stage::eval, watch.seconds(), std::move(counts), before);
}

StageSummary Pipeline::run_report() {
  ensure_locked();
  require_artifact(manifest_path(), Stage::assemble);
  require_artifact(seeds_steps_path(), Stage::steps);
  const Json before = usage_snapshot();
  Stopwatch watch;

  const std::vector<Json> manifest = read_jsonl(manifest_path());

  std::vector<EvalRecord> records;
  std::set<std::string> models;
  for (const auto& entry : fs::directory_iterator(stages_dir())) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("eval_records.", 0) != 0 || entry.path().extension() != ".jsonl") continue;
    for (const Json& obj : read_jsonl(entry.path())) {
      EvalRecord rec = EvalRecord::from_json(obj);
      models.insert(rec.model);
      records.push_back(std::move(rec));
    }
  }
  if (records.empty()) {
    throw std::runtime_error("no eval records under " + stages_dir().string() +
                             " — run the 'eval' stage first");
  }

  // Baseline covers exactly the questions that made it into the dataset.
  std::set<std::string> manifest_seed_ids;
  for (const Json& row : manifest) {
    manifest_seed_ids.insert(row.at("seed_id").get<std::string>());
  }
  std::vector<SeedQuestion> seeds;
  for (SeedQuestion& q : read_seeds(seeds_steps_path())) {
    if (manifest_seed_ids.count(q.id)) seeds.push_back(std::move(q));
  }

  // Report the lengths actually present in the manifest, in ascending order.
  std::set<long long> length_set;
  for (const Json& row : manifest) {
    if (row.contains("target_tokens")) {
      length_set.insert(row.at("target_tokens").get<long long>());
    }
  }
  const std::vector<long long> lengths(length_set.begin(), length_set.end());

  const BenchmarkReport report = aggregate(records, manifest, seeds, lengths);
  atomic_write_file(report_csv_path(), report_to_csv(report));
  atomic_write_file(report_md_path(), report_to_markdown(report));

  Json counts = {{"records", records.size()},
                 {"models", models.size()},
                 {"cells", report.cells.size()},
                 {"random_baseline", report.random_baseline.str()}};
  return finish_stage(Stage::report, watch.seconds(), std::move(counts), before);
}

} // namespace longweave
