#pragma once

#include "longweave/llm.hpp"

namespace longweave {

// OpenAI-style chat-completions transport over HTTP(S). The API key is read
// from the environment variable named in BackendConfig::api_key_env at call
// time — config files carry the variable's *name*, never the secret — and a
// missing variable fails before any network I/O.
class HttpBackend final : public LlmBackend {
 public:
  explicit HttpBackend(BackendConfig cfg);

  LlmResponse complete(const LlmRequest& req) override;
  std::string endpoint_id() const override { return "http:" + cfg_.base_url; }

  // Exposed for tests: the JSON body sent for a request.
  static Json request_body(const LlmRequest& req);

 private:
  BackendConfig cfg_;
};

} // namespace longweave
