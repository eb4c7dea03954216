#include "longweave/llm.hpp"

#include <chrono>
#include <cstdio>
#include <thread>

#include "longweave/digest.hpp"
#include "longweave/text.hpp"

namespace longweave {
namespace {

long long count_words_ll(const std::string& s) {
  return static_cast<long long>(split_ws(s).size());
}

std::string format_temperature(double t) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", t);
  return buf;
}

// One gate per endpoint, shared process-wide so concurrent clients hitting
// the same endpoint respect a single throttle.
class RateGate {
 public:
  void wait(double requests_per_second) {
    if (requests_per_second <= 0.0) return;
    const auto min_interval = std::chrono::duration<double>(1.0 / requests_per_second);
    std::chrono::steady_clock::time_point wake;
    {
      std::lock_guard<std::mutex> lock(mutex_);
      const auto now = std::chrono::steady_clock::now();
      const auto earliest =
          next_allowed_.time_since_epoch().count() == 0 ? now : next_allowed_;
      wake = std::max(now, earliest);
      next_allowed_ =
          wake + std::chrono::duration_cast<std::chrono::steady_clock::duration>(min_interval);
    }
    std::this_thread::sleep_until(wake);
  }

 private:
  std::mutex mutex_;
  std::chrono::steady_clock::time_point next_allowed_{};
};

RateGate& gate_for(const std::string& endpoint_id) {
  static std::mutex registry_mutex;
  static std::map<std::string, std::unique_ptr<RateGate>> registry;
  std::lock_guard<std::mutex> lock(registry_mutex);
  auto& slot = registry[endpoint_id];
  if (!slot) slot = std::make_unique<RateGate>();
  return *slot;
}

} // namespace

// ---------------------------------------------------------------- MockBackend

MockBackend::MockBackend(const std::filesystem::path& script_path) : id_(script_path.string()) {
  Json entries = Json::array();
  for_each_jsonl(script_path, [&](Json obj, std::size_t) { entries.push_back(std::move(obj)); });
  load(entries);
}

MockBackend::MockBackend(const Json& entries, std::string id) : id_(std::move(id)) {
  load(entries);
}

void MockBackend::load(const Json& entries) {
  if (!entries.is_array()) throw std::runtime_error("mock script must be an array of entries");
  for (const Json& e : entries) {
    Entry entry;
    if (e.contains("match")) entry.needles.push_back(e.at("match").get<std::string>());
    if (e.contains("match_all"))
      for (const Json& n : e.at("match_all")) entry.needles.push_back(n.get<std::string>());
    if (entry.needles.empty())
      throw std::runtime_error("mock entry needs 'match' or 'match_all': " + e.dump());
    if (e.contains("responses"))
      for (const Json& r : e.at("responses")) entry.responses.push_back(r.get<std::string>());
    else if (e.contains("response"))
      entry.responses.push_back(e.at("response").get<std::string>());
    entry.fail_times = e.value("fail_times", 0LL);
    if (entry.responses.empty() && entry.fail_times == 0)
      throw std::runtime_error("mock entry needs 'response', 'responses', or 'fail_times': " +
                               e.dump());
    entries_.push_back(std::move(entry));
  }
}

LlmResponse MockBackend::complete(const LlmRequest& req) {
  std::lock_guard<std::mutex> lock(mutex_);
  ++calls_;
  for (Entry& entry : entries_) {
    bool all = true;
    for (const std::string& needle : entry.needles) {
      if (req.user.find(needle) == std::string::npos) {
        all = false;
        break;
      }
    }
    if (!all) continue;

    if (entry.fails < entry.fail_times) {
      ++entry.fails;
      throw BackendError("injected transient failure (" + std::to_string(entry.fails) + "/" +
                             std::to_string(entry.fail_times) + ") for '" + entry.needles.front() +
                             "'",
                         /*retryable=*/true);
    }
    if (entry.responses.empty())
      throw BackendError("mock entry for '" + entry.needles.front() +
                             "' only injects failures and has no response",
                         /*retryable=*/false);
    const std::size_t idx =
        std::min<std::size_t>(static_cast<std::size_t>(entry.hits), entry.responses.size() - 1);
    ++entry.hits;
    LlmResponse resp;
    resp.text = entry.responses[idx];
    resp.usage.prompt_tokens = count_words_ll(req.system) + count_words_ll(req.user);
    resp.usage.completion_tokens = count_words_ll(resp.text);
    resp.usage.calls = 1;
    return resp;
  }
  const std::string head = req.user.substr(0, 80);
  throw BackendError("mock script " + id_ + " has no entry matching prompt starting: \"" + head +
                         "\"",
                     /*retryable=*/false);
}

long long MockBackend::call_count() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return calls_;
}

// ------------------------------------------------------------------ LlmClient

LlmClient::LlmClient(std::shared_ptr<LlmBackend> backend, Options options)
    : backend_(std::move(backend)), options_(std::move(options)) {
  if (!backend_) throw std::runtime_error("LlmClient requires a backend");
}

std::string LlmClient::cache_key(const LlmRequest& req) {
  Json tuple = Json::array();
  tuple.push_back(req.model);
  tuple.push_back(req.system);
  tuple.push_back(req.user);
  tuple.push_back(format_temperature(req.temperature));
  tuple.push_back(req.max_tokens);
  if (req.temperature > 0.0 && req.seed_hint)
    tuple.push_back(*req.seed_hint);
  return sha256_hex(tuple.dump());
}

std::filesystem::path LlmClient::cache_path(const std::string& key) const {
  return options_.cache_dir / key.substr(0, 2) / key.substr(2, 2) / (key + ".json");
}

std::optional<LlmResponse> LlmClient::cache_lookup(const LlmRequest&,
                                                   const std::string& key) const {
  if (options_.cache_dir.empty()) return std::nullopt;
  const auto path = cache_path(key);
  std::error_code ec;
  if (!std::filesystem::exists(path, ec)) return std::nullopt;
  Json obj = Json::parse(read_file(path));
  LlmResponse resp;
  resp.text = obj.at("response").get<std::string>();
  resp.usage.prompt_tokens = obj.value("prompt_tokens", 0LL);
  resp.usage.completion_tokens = obj.value("completion_tokens", 0LL);
  resp.usage.calls = 0; // a cache hit is not a transport call
  resp.from_cache = true;
  return resp;
}

void LlmClient::cache_store(const LlmRequest& req, const std::string& key,
                            const LlmResponse& resp) const {
  if (options_.cache_dir.empty()) return;
  Json obj;
  obj["model"] = req.model;
  obj["temperature"] = req.temperature;
  obj["max_tokens"] = req.max_tokens;
  if (req.temperature > 0.0 && req.seed_hint) obj["sample"] = *req.seed_hint;
  obj["prompt_sha256"] = sha256_hex(req.system + "\n\n" + req.user);
  obj["response"] = resp.text;
  obj["prompt_tokens"] = resp.usage.prompt_tokens;
  obj["completion_tokens"] = resp.usage.completion_tokens;
  atomic_write_file(cache_path(key), obj.dump(2) + "\n");
}

void LlmClient::record_usage(const std::string& model, const LlmUsage& usage) {
  std::lock_guard<std::mutex> lock(ledger_mutex_);
  ledger_[model] += usage;
}

LlmResponse LlmClient::complete(const LlmRequest& req) {
  const std::string key = cache_key(req);
  if (auto hit = cache_lookup(req, key)) return *hit;

  const RetryPolicy& rp = options_.retry;
  double delay_ms = rp.initial_delay_ms;
  const int attempts = 1 + std::max(0, rp.max_retries);
  for (int attempt = 1;; ++attempt) {
    try {
      gate_for(backend_->endpoint_id()).wait(options_.requests_per_second);
      const auto t0 = std::chrono::steady_clock::now();
      LlmResponse resp = backend_->complete(req);
      resp.latency_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
      resp.usage.calls = 1;
      resp.from_cache = false;
      record_usage(req.model, resp.usage);
      cache_store(req, key, resp);
      return resp;
    } catch (const BackendError& e) {
      if (!e.retryable || attempt >= attempts) throw;
      std::this_thread::sleep_for(
          std::chrono::milliseconds(static_cast<long long>(delay_ms)));
      delay_ms = std::min(std::max(delay_ms * rp.multiplier, delay_ms),
                          static_cast<double>(rp.max_delay_ms));
    }
  }
}

std::map<std::string, LlmUsage> LlmClient::usage() const {
  std::lock_guard<std::mutex> lock(ledger_mutex_);
  return ledger_;
}

Json LlmClient::usage_report(const PriceTable& prices) const {
  const auto snapshot = usage();
  Json models = Json::object();
  Json unpriced = Json::array();
  LlmUsage total;
  double total_cost = 0.0;
  for (const auto& [model, u] : snapshot) {
    total += u;
    Json m;
    m["calls"] = u.calls;
    m["prompt_tokens"] = u.prompt_tokens;
    m["completion_tokens"] = u.completion_tokens;
    auto it = prices.find(model);
    if (it != prices.end()) {
      const double cost = (static_cast<double>(u.prompt_tokens) * it->second.prompt_usd_per_mtok +
                           static_cast<double>(u.completion_tokens) *
                               it->second.completion_usd_per_mtok) /
                          1e6;
      m["cost_usd"] = cost;
      total_cost += cost;
    } else {
      m["cost_usd"] = 0.0;
      unpriced.push_back(model);
    }
    models[model] = std::move(m);
  }
  Json report;
  report["models"] = std::move(models);
  report["total"] = {{"calls", total.calls},
                     {"prompt_tokens", total.prompt_tokens},
                     {"completion_tokens", total.completion_tokens},
                     {"cost_usd", total_cost}};
  report["unpriced_models"] = std::move(unpriced);
  return report;
}

PriceTable parse_price_table(const Json& prices_json) {
  PriceTable table;
  for (auto it = prices_json.begin(); it != prices_json.end(); ++it) {
    const Json& v = it.value();
    ModelPrice p;
    if (v.is_array() && v.size() == 2) {
      p.prompt_usd_per_mtok = v[0].get<double>();
      p.completion_usd_per_mtok = v[1].get<double>();
    } else if (v.is_object()) {
      p.prompt_usd_per_mtok = v.value("prompt_usd_per_mtok", 0.0);
      p.completion_usd_per_mtok = v.value("completion_usd_per_mtok", 0.0);
    } else {
      throw std::runtime_error("price entry for " + it.key() +
                               " must be [prompt, completion] or an object");
    }
    table[it.key()] = p;
  }
  return table;
}

} // namespace longweave
