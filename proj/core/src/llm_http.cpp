#include "longweave/llm_http.hpp"

#include <cstdlib>

#include <httplib.h>

namespace longweave {

HttpBackend::HttpBackend(BackendConfig cfg) : cfg_(std::move(cfg)) {
  if (cfg_.base_url.empty()) throw std::runtime_error("http backend requires base_url");
}

Json HttpBackend::request_body(const LlmRequest& req) {
  Json body;
  body["model"] = req.model;
  Json messages = Json::array();
  if (!req.system.empty())
    messages.push_back({{"role", "system"}, {"content", req.system}});
  messages.push_back({{"role", "user"}, {"content", req.user}});
  body["messages"] = std::move(messages);
  body["temperature"] = req.temperature;
  body["max_tokens"] = req.max_tokens;
  if (req.temperature > 0.0 && req.seed_hint) body["seed"] = *req.seed_hint;
  return body;
}

LlmResponse HttpBackend::complete(const LlmRequest& req) {
  httplib::Headers headers;
  if (!cfg_.api_key_env.empty()) {
    const char* key = std::getenv(cfg_.api_key_env.c_str());
    if (key == nullptr || *key == '\0')
      throw BackendError("environment variable " + cfg_.api_key_env +
                             " is not set; refusing to call " + cfg_.base_url,
                         /*retryable=*/false);
    headers.emplace("Authorization", std::string("Bearer ") + key);
  }

  httplib::Client cli(cfg_.base_url);
  cli.set_connection_timeout(10, 0);
  cli.set_read_timeout(cfg_.timeout_s, 0);
  cli.set_write_timeout(cfg_.timeout_s, 0);

  const std::string body = request_body(req).dump();
  auto res = cli.Post(cfg_.api_path, headers, body, "application/json");
  if (!res)
    throw BackendError("connection to " + cfg_.base_url +
                           " failed: " + httplib::to_string(res.error()),
                       /*retryable=*/true);

  if (res->status == 429 || res->status >= 500)
    throw BackendError("HTTP " + std::to_string(res->status) + " from " + cfg_.base_url + ": " +
                           res->body.substr(0, 200),
                       /*retryable=*/true);
  if (res->status != 200)
    throw BackendError("HTTP " + std::to_string(res->status) + " from " + cfg_.base_url + ": " +
                           res->body.substr(0, 200),
                       /*retryable=*/false);

  Json obj;
  try {
    obj = Json::parse(res->body);
  } catch (const std::exception& e) {
    throw BackendError(std::string("unparseable response body: ") + e.what(),
                       /*retryable=*/false);
  }
  if (obj.contains("error"))
    throw BackendError("API error: " + obj["error"].dump(), /*retryable=*/false);

  LlmResponse resp;
  try {
    const Json& choice = obj.at("choices").at(0);
    const Json& content = choice.at("message").at("content");
    resp.text = content.is_null() ? std::string() : content.get<std::string>();
  } catch (const std::exception& e) {
    throw BackendError(std::string("response missing choices[0].message.content: ") + e.what(),
                       /*retryable=*/false);
  }
  if (obj.contains("usage")) {
    resp.usage.prompt_tokens = obj["usage"].value("prompt_tokens", 0LL);
    resp.usage.completion_tokens = obj["usage"].value("completion_tokens", 0LL);
  }
  resp.usage.calls = 1;
  return resp;
}

std::shared_ptr<LlmBackend> make_backend(const BackendConfig& cfg) {
  if (cfg.type == "mock") {
    if (cfg.script_path.empty())
      throw std::runtime_error("backend '" + cfg.name + "' is type mock but has no script path");
    return std::make_shared<MockBackend>(std::filesystem::path(cfg.script_path));
  }
  if (cfg.type == "http") return std::make_shared<HttpBackend>(cfg);
  throw std::runtime_error("backend '" + cfg.name + "' has unknown type '" + cfg.type +
                           "' (expected mock or http)");
}

} // namespace longweave
