#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <string>

#include "planforge/llm/ledger.hpp"

namespace planforge::llm {

struct RetryPolicy {
  int count = 0;       // retries after the first attempt
  int backoff_ms = 0;  // linear backoff between attempts
};

struct LLMConfig {
  std::string endpoint = "https://api.openai.com/v1/chat/completions";
  std::string model;
  double temperature = 0.0;
  int max_output_tokens = 1024;
  RetryPolicy retry;
  std::string api_key_env = "LLM_API_KEY";  // the key itself never appears in configs

  void validate() const;  // ConfigError on out-of-range values
};

struct Usage {
  int prompt_tokens = 0;
  int completion_tokens = 0;
  int attempts = 1;
};

struct Completion {
  std::string text;
  Usage usage;
  std::string backend;  // "live" or "fixture"
};

/// Transport seam for tests: given (endpoint, api key, request body JSON),
/// return status/body or a transport failure.
struct HttpResponse {
  bool transport_ok = false;
  int status = 0;
  std::string body;
  std::string error;
};
using HttpPoster = std::function<HttpResponse(const std::string& endpoint,
                                              const std::string& api_key,
                                              const std::string& body)>;

/// Provider-agnostic completion gateway. Two backends share the
/// interface: a live OpenAI-compatible chat endpoint and a deterministic
/// fixture store keyed by relative file path ("load_truck/round1" reads
/// <store>/load_truck/round1.txt). Every call lands in the run ledger
/// when one is attached.
class LLMClient {
 public:
  static LLMClient fixture(std::filesystem::path store_dir, RunLedger* ledger = nullptr);
  static LLMClient live(LLMConfig config, RunLedger* ledger = nullptr,
                        HttpPoster poster = {});

  /// `key` names the fixture file for the fixture backend and tags the
  /// ledger entry for both. AuthError if the key env var is unset (live),
  /// TransportError once retries are exhausted or the fixture is missing,
  /// BudgetExceeded once the token budget is spent.
  Completion complete(const std::string& prompt, const std::string& key);

  void set_token_budget(std::int64_t tokens);  // 0 = unlimited
  std::int64_t tokens_spent() const;
  bool is_fixture() const { return fixture_mode_; }

 private:
  LLMClient() = default;

  Completion complete_fixture(const std::string& prompt, const std::string& key);
  Completion complete_live(const std::string& prompt, const std::string& key);
  void charge(const Usage& usage);
  void check_budget() const;

  bool fixture_mode_ = true;
  std::filesystem::path store_dir_;
  LLMConfig config_;
  HttpPoster poster_;
  RunLedger* ledger_ = nullptr;
  std::int64_t budget_ = 0;
  std::int64_t spent_ = 0;
  std::unique_ptr<std::mutex> mutex_ = std::make_unique<std::mutex>();
};

/// Rough byte-based token estimate used when the backend reports no usage.
int estimate_tokens(const std::string& text);

HttpResponse default_http_poster(const std::string& endpoint, const std::string& api_key,
                                 const std::string& body);

}  // namespace planforge::llm
