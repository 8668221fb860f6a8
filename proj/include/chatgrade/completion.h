#pragma once

#include <chrono>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "chatgrade/dataset.h"

namespace chatgrade {

struct HttpRequest {
  std::string url;
  std::vector<std::pair<std::string, std::string>> headers;
  std::string body;
};

struct HttpResponse {
  int status = 0;
  std::string body;
};

// Executes one HTTP POST. Implementations throw TransportError for network
// failures and timeouts, and must be safe to call from several threads.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual HttpResponse post(const HttpRequest& request) = 0;
};

struct RetryPolicy {
  int attempts = 3;  // total tries, including the first
  std::chrono::milliseconds backoff_base{500};
};

struct CompletionConfig {
  std::string base_url = "https://api.openai.com/v1";
  std::string model = "text-davinci-003";
  int max_tokens = 256;
  double temperature = 0.7;
  std::string api_key_env = "OPENAI_API_KEY";
  int max_concurrent = 1;
  RetryPolicy retry;

  // Throws ConfigError.
  void validate() const;
};

using EnvLookup = std::function<std::optional<std::string>(std::string_view)>;
using Sleeper = std::function<void(std::chrono::milliseconds)>;
using LogSink = std::function<void(std::string_view)>;

// Process environment via getenv.
EnvLookup system_env();
Sleeper thread_sleeper();

// JSON body {model, prompt, max_tokens, temperature}; a pure function of its
// inputs.
std::string completion_request_body(std::string_view prompt, const CompletionConfig& cfg);

// First choice's text, whitespace-trimmed. Throws ProtocolError.
std::string parse_completion_text(std::string_view body);

struct GenerationOutcome {
  EvalRecord record;
  std::optional<std::string> error;  // set when generation failed

  bool ok() const { return !error.has_value(); }
};

class CompletionClient {
 public:
  CompletionClient(CompletionConfig cfg, Transport& transport, EnvLookup env,
                   LogSink log = {}, Sleeper sleep = thread_sleeper());

  const CompletionConfig& config() const { return cfg_; }

  // Retries HTTP 429, 5xx and transport failures with exponential backoff;
  // 401/403 fail immediately with CredentialError. Configuration problems
  // (invalid config, missing key) throw ConfigError.
  std::string generate(std::string_view prompt) const;

  // Fills every record's response, keeping input order and at most
  // max_concurrent requests in flight. Per-record failures are reported in
  // the outcome; only ConfigError escapes.
  std::vector<GenerationOutcome> generate_batch(const std::vector<EvalRecord>& records) const;

 private:
  std::string api_key() const;
  HttpRequest build_request(std::string_view prompt, const std::string& key) const;
  std::string generate_with_key(std::string_view prompt, const std::string& key) const;
  void log(const std::string& message, const std::string& key) const;

  CompletionConfig cfg_;
  Transport& transport_;
  EnvLookup env_;
  LogSink log_;
  Sleeper sleep_;
  mutable std::mutex log_mutex_;
};

}  // namespace chatgrade
