#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "longweave/jsonl.hpp"

namespace longweave {

struct LlmRequest {
  std::string model;
  std::string system;
  std::string user;
  double temperature = 0.0;
  int max_tokens = 1024;
  // Sample ordinal for repeated sampling at temperature > 0. Participates in
  // the cache key only when temperature > 0, so distinct samples of the same
  // prompt get distinct cache slots while greedy calls share one.
  std::optional<std::uint64_t> seed_hint;
};

struct LlmUsage {
  long long prompt_tokens = 0;
  long long completion_tokens = 0;
  long long calls = 0;

  LlmUsage& operator+=(const LlmUsage& o) {
    prompt_tokens += o.prompt_tokens;
    completion_tokens += o.completion_tokens;
    calls += o.calls;
    return *this;
  }
};

struct LlmResponse {
  std::string text;
  LlmUsage usage; // usage of this single call (calls == 1)
  long long latency_ms = 0;
  bool from_cache = false;
};

// Transport-level failure. retryable == true means the client may back off
// and try again (rate limits, 5xx, connection drops); false means retrying
// cannot help (bad credentials, malformed request, scripted gap in a mock).
struct BackendError : std::runtime_error {
  bool retryable;
  explicit BackendError(const std::string& msg, bool retryable_)
      : std::runtime_error(msg), retryable(retryable_) {}
};

class LlmBackend {
 public:
  virtual ~LlmBackend() = default;
  virtual LlmResponse complete(const LlmRequest& req) = 0;
  // Identifies the shared rate-limit domain (e.g. the HTTP host, or the
  // script path for mocks).
  virtual std::string endpoint_id() const = 0;
};

// Deterministic scripted backend driven by a JSONL script. Each line is one
// entry with fields:
//   match:     substring that must occur in the user prompt
//   match_all: array of substrings that must all occur (alternative to match)
//   response:  reply text, or
//   responses: array of replies consumed per match ordinal (last one sticks)
//   fail_times: first N matching calls raise a retryable BackendError
// Entries are tried in file order; first match wins. A prompt no entry
// matches raises a non-retryable error quoting the prompt head, so script
// gaps fail loudly instead of silently derailing a pipeline run.
class MockBackend final : public LlmBackend {
 public:
  explicit MockBackend(const std::filesystem::path& script_path);
  explicit MockBackend(const Json& entries, std::string id = "<inline>");

  LlmResponse complete(const LlmRequest& req) override;
  std::string endpoint_id() const override { return "mock:" + id_; }

  // Total transport calls served or failed, for call-accounting tests.
  long long call_count() const;

 private:
  struct Entry {
    std::vector<std::string> needles;
    std::vector<std::string> responses;
    long long fail_times = 0;
    long long hits = 0;   // successful matches so far
    long long fails = 0;  // injected failures so far
  };

  void load(const Json& entries);

  std::string id_;
  mutable std::mutex mutex_;
  std::vector<Entry> entries_;
  long long calls_ = 0;
};

struct RetryPolicy {
  int max_retries = 3;        // total attempts = 1 + max_retries
  int initial_delay_ms = 200; // delay before the first retry
  double multiplier = 2.0;    // each subsequent delay is >= the previous
  int max_delay_ms = 10'000;
};

struct BackendConfig {
  std::string name; // logical name from config, e.g. "synth" or "eval"
  std::string type; // "mock" | "http"
  // mock
  std::string script_path;
  // http (OpenAI-style chat completions)
  std::string base_url;
  std::string api_path = "/v1/chat/completions";
  std::string api_key_env; // name of the env var holding the key — never the key
  int timeout_s = 120;
  // shared client behaviour
  double requests_per_second = 0.0; // 0 = unthrottled
  RetryPolicy retry;
};

std::shared_ptr<LlmBackend> make_backend(const BackendConfig& cfg);

// Per-model price in USD per million tokens.
struct ModelPrice {
  double prompt_usd_per_mtok = 0.0;
  double completion_usd_per_mtok = 0.0;
};
using PriceTable = std::map<std::string, ModelPrice>;

// Wraps a transport with a content-addressed response cache, bounded retries
// with nondecreasing backoff, a per-endpoint rate gate shared across clients,
// and a usage ledger that counts only real transport calls (cache hits are
// free and do not touch the ledger).
class LlmClient {
 public:
  struct Options {
    std::filesystem::path cache_dir; // empty = caching disabled
    RetryPolicy retry;
    double requests_per_second = 0.0;
  };

  LlmClient(std::shared_ptr<LlmBackend> backend, Options options);

  LlmResponse complete(const LlmRequest& req);

  // Cache key: SHA-256 of the canonical request tuple
  // (model, system, user, temperature %.9g, max_tokens), with the sample
  // ordinal appended iff temperature > 0 and seed_hint is set.
  static std::string cache_key(const LlmRequest& req);

  std::map<std::string, LlmUsage> usage() const;
  // {"models": {model: {calls, prompt_tokens, completion_tokens, cost_usd}},
  //  "total": {...}} — models missing from the price table get cost 0 and are
  // listed under "unpriced_models".
  Json usage_report(const PriceTable& prices) const;

  LlmBackend& backend() { return *backend_; }

 private:
  std::filesystem::path cache_path(const std::string& key) const;
  std::optional<LlmResponse> cache_lookup(const LlmRequest& req, const std::string& key) const;
  void cache_store(const LlmRequest& req, const std::string& key, const LlmResponse& resp) const;
  void record_usage(const std::string& model, const LlmUsage& usage);

  std::shared_ptr<LlmBackend> backend_;
  Options options_;
  mutable std::mutex ledger_mutex_;
  std::map<std::string, LlmUsage> ledger_;
};

PriceTable parse_price_table(const Json& prices_json);

} // namespace longweave
