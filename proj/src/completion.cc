#include "chatgrade/completion.h"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "chatgrade/error.h"
#include "json.hpp"

namespace chatgrade {
namespace {

using json = nlohmann::ordered_json;

std::string trim(std::string_view s) {
  constexpr std::string_view kSpace = " \t\r\n\f\v";
  const auto first = s.find_first_not_of(kSpace);
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(kSpace);
  return std::string(s.substr(first, last - first + 1));
}

std::string redact(std::string message, const std::string& secret) {
  if (secret.empty()) return message;
  for (auto pos = message.find(secret); pos != std::string::npos;
       pos = message.find(secret, pos)) {
    message.replace(pos, secret.size(), "[redacted]");
  }
  return message;
}

}  // namespace

void CompletionConfig::validate() const {
  if (base_url.empty()) throw ConfigError("completion base URL is empty");
  if (model.empty()) throw ConfigError("completion model is empty");
  if (max_tokens < 1) throw ConfigError("max_tokens must be at least 1");
  if (!(temperature >= 0.0)) throw ConfigError("temperature must be non-negative");
  if (api_key_env.empty()) throw ConfigError("API key environment variable name is empty");
  if (max_concurrent < 1) throw ConfigError("max_concurrent must be at least 1");
  if (retry.attempts < 1) throw ConfigError("retry attempts must be at least 1");
  if (retry.backoff_base.count() < 0) throw ConfigError("retry backoff must be non-negative");
}

EnvLookup system_env() {
  return [](std::string_view name) -> std::optional<std::string> {
    const char* value = std::getenv(std::string(name).c_str());
    if (value == nullptr) return std::nullopt;
    return std::string(value);
  };
}

Sleeper thread_sleeper() {
  return [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
}

std::string completion_request_body(std::string_view prompt, const CompletionConfig& cfg) {
  json body;
  body["model"] = cfg.model;
  body["prompt"] = std::string(prompt);
  body["max_tokens"] = cfg.max_tokens;
  body["temperature"] = cfg.temperature;
  return body.dump();
}

std::string parse_completion_text(std::string_view body) {
  json doc;
  try {
    doc = json::parse(body);
  } catch (const json::parse_error&) {
    throw ProtocolError("completion response is not valid JSON");
  }
  const auto choices = doc.find("choices");
  if (choices == doc.end() || !choices->is_array()) {
    throw ProtocolError("completion response has no choices array");
  }
  if (choices->empty()) throw ProtocolError("completion response has an empty choices list");
  const auto& first = choices->front();
  if (!first.is_object() || !first.contains("text") || !first["text"].is_string()) {
    throw ProtocolError("first completion choice has no text");
  }
  return trim(first["text"].get<std::string>());
}

CompletionClient::CompletionClient(CompletionConfig cfg, Transport& transport, EnvLookup env,
                                   LogSink log, Sleeper sleep)
    : cfg_(std::move(cfg)),
      transport_(transport),
      env_(std::move(env)),
      log_(std::move(log)),
      sleep_(std::move(sleep)) {}

std::string CompletionClient::api_key() const {
  cfg_.validate();
  const auto key = env_ ? env_(cfg_.api_key_env) : std::nullopt;
  if (!key || key->empty()) {
    throw ConfigError(fmt::format("environment variable {} is not set", cfg_.api_key_env));
  }
  return *key;
}

HttpRequest CompletionClient::build_request(std::string_view prompt,
                                            const std::string& key) const {
  std::string url = cfg_.base_url;
  while (!url.empty() && url.back() == '/') url.pop_back();
  return HttpRequest{url + "/completions",
                     {{"Authorization", "Bearer " + key}, {"Content-Type", "application/json"}},
                     completion_request_body(prompt, cfg_)};
}

void CompletionClient::log(const std::string& message, const std::string& key) const {
  if (!log_) return;
  const std::lock_guard lock(log_mutex_);
  log_(redact(message, key));
}

std::string CompletionClient::generate(std::string_view prompt) const {
  return generate_with_key(prompt, api_key());
}

std::string CompletionClient::generate_with_key(std::string_view prompt,
                                                const std::string& key) const {
  if (trim(prompt).empty()) throw std::invalid_argument("prompt is empty");
  const HttpRequest request = build_request(prompt, key);

  std::string last_failure;
  bool rate_limited = false;
  for (int attempt = 1; attempt <= cfg_.retry.attempts; ++attempt) {
    if (attempt > 1) {
      const auto delay = cfg_.retry.backoff_base * (1LL << std::min(attempt - 2, 20));
      log(fmt::format("retrying in {} ms (attempt {}/{})", delay.count(), attempt,
                      cfg_.retry.attempts),
          key);
      if (sleep_) sleep_(delay);
    }

    HttpResponse response;
    try {
      response = transport_.post(request);
    } catch (const TransportError& e) {
      last_failure = redact(e.what(), key);
      rate_limited = false;
      log("transport failure: " + last_failure, key);
      continue;
    }

    if (response.status >= 200 && response.status < 300) {
      return parse_completion_text(response.body);
    }
    if (response.status == 401 || response.status == 403) {
      throw CredentialError(
          fmt::format("completion endpoint rejected the credentials (HTTP {})", response.status));
    }
    if (response.status == 429 || response.status >= 500) {
      rate_limited = response.status == 429;
      last_failure = fmt::format("HTTP {}", response.status);
      log("completion request failed with " + last_failure, key);
      continue;
    }
    throw ProtocolError(fmt::format("unexpected HTTP status {}", response.status));
  }

  const std::string summary =
      fmt::format("giving up after {} attempts: {}", cfg_.retry.attempts, last_failure);
  if (rate_limited) throw RateLimitError(summary);
  throw TransportError(summary);
}

std::vector<GenerationOutcome> CompletionClient::generate_batch(
    const std::vector<EvalRecord>& records) const {
  const std::string key = api_key();
  std::vector<GenerationOutcome> outcomes(records.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t i = next++; i < records.size(); i = next++) {
      GenerationOutcome& out = outcomes[i];
      out.record = records[i];
      try {
        out.record.response = generate_with_key(records[i].prompt, key);
        if (out.record.response->empty()) {
          out.record.response.reset();
          throw ProtocolError("completion text is empty");
        }
      } catch (const std::exception& e) {
        out.record.response.reset();
        out.error = redact(e.what(), key);
        log(fmt::format("record {}: {}", records[i].id, *out.error), key);
      }
    }
  };

  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(cfg_.max_concurrent), records.size());
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  return outcomes;
}

}  // namespace chatgrade
