#include "planforge/llm/client.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "planforge/error.hpp"

namespace planforge::llm {

void LLMConfig::validate() const {
  if (temperature < 0.0 || temperature > 2.0)
    throw Error(Errc::ConfigError, "temperature must be in [0, 2]");
  if (max_output_tokens <= 0)
    throw Error(Errc::ConfigError, "max_output_tokens must be positive");
  if (retry.count < 0) throw Error(Errc::ConfigError, "retry count must be >= 0");
  if (retry.backoff_ms < 0) throw Error(Errc::ConfigError, "backoff must be >= 0");
  if (endpoint.empty()) throw Error(Errc::ConfigError, "endpoint must not be empty");
}

int estimate_tokens(const std::string& text) {
  return static_cast<int>((text.size() + 3) / 4);
}

LLMClient LLMClient::fixture(std::filesystem::path store_dir, RunLedger* ledger) {
  LLMClient c;
  c.fixture_mode_ = true;
  c.store_dir_ = std::move(store_dir);
  c.ledger_ = ledger;
  return c;
}

LLMClient LLMClient::live(LLMConfig config, RunLedger* ledger, HttpPoster poster) {
  config.validate();
  LLMClient c;
  c.fixture_mode_ = false;
  c.config_ = std::move(config);
  c.ledger_ = ledger;
  c.poster_ = poster ? std::move(poster) : default_http_poster;
  return c;
}

void LLMClient::set_token_budget(std::int64_t tokens) {
  std::lock_guard<std::mutex> lock(*mutex_);
  budget_ = tokens;
}

std::int64_t LLMClient::tokens_spent() const {
  std::lock_guard<std::mutex> lock(*mutex_);
  return spent_;
}

void LLMClient::check_budget() const {
  std::lock_guard<std::mutex> lock(*mutex_);
  if (budget_ > 0 && spent_ >= budget_)
    throw Error(Errc::BudgetExceeded,
                "token budget of " + std::to_string(budget_) + " spent");
}

void LLMClient::charge(const Usage& usage) {
  std::lock_guard<std::mutex> lock(*mutex_);
  spent_ += usage.prompt_tokens + usage.completion_tokens;
}

Completion LLMClient::complete(const std::string& prompt, const std::string& key) {
  check_budget();
  Completion c = fixture_mode_ ? complete_fixture(prompt, key)
                               : complete_live(prompt, key);
  charge(c.usage);
  if (ledger_) {
    LedgerEntry entry;
    entry.key = key;
    entry.backend = c.backend;
    entry.model = fixture_mode_ ? "" : config_.model;
    entry.prompt = prompt;
    entry.completion = c.text;
    entry.attempts = c.usage.attempts;
    entry.prompt_tokens = c.usage.prompt_tokens;
    entry.completion_tokens = c.usage.completion_tokens;
    ledger_->record(entry);
  }
  return c;
}

Completion LLMClient::complete_fixture(const std::string& prompt, const std::string& key) {
  if (key.find("..") != std::string::npos)
    throw Error(Errc::TransportError, "fixture key may not contain '..': " + key);
  std::filesystem::path file = store_dir_ / (key + ".txt");
  std::ifstream in(file);
  if (!in)
    throw Error(Errc::TransportError, "fixture not found: " + key + " (" + file.string() + ")");
  std::ostringstream buf;
  buf << in.rdbuf();
  Completion c;
  c.text = buf.str();
  c.backend = "fixture";
  c.usage.prompt_tokens = estimate_tokens(prompt);
  c.usage.completion_tokens = estimate_tokens(c.text);
  c.usage.attempts = 1;
  return c;
}

Completion LLMClient::complete_live(const std::string& prompt, const std::string& key) {
  const char* api_key = std::getenv(config_.api_key_env.c_str());
  if (!api_key || !*api_key)
    throw Error(Errc::AuthError,
                "environment variable " + config_.api_key_env + " is not set");

  nlohmann::json request;
  request["model"] = config_.model;
  request["temperature"] = config_.temperature;
  request["max_tokens"] = config_.max_output_tokens;
  request["messages"] = nlohmann::json::array({
      nlohmann::json{{"role", "user"}, {"content", prompt}},
  });
  std::string body = request.dump();

  int max_attempts = 1 + config_.retry.count;
  std::string last_error;
  for (int attempt = 1; attempt <= max_attempts; ++attempt) {
    if (attempt > 1 && config_.retry.backoff_ms > 0)
      std::this_thread::sleep_for(
          std::chrono::milliseconds(config_.retry.backoff_ms * (attempt - 1)));

    HttpResponse resp = poster_(config_.endpoint, api_key, body);
    if (!resp.transport_ok) {
      last_error = resp.error.empty() ? "transport failure" : resp.error;
      continue;
    }
    if (resp.status == 401 || resp.status == 403)
      throw Error(Errc::AuthError, "endpoint rejected credentials (HTTP " +
                                       std::to_string(resp.status) + ") for " + key);
    if (resp.status == 429 || resp.status >= 500) {
      last_error = "HTTP " + std::to_string(resp.status);
      continue;
    }
    if (resp.status != 200)
      throw Error(Errc::TransportError,
                  "HTTP " + std::to_string(resp.status) + " for " + key);

    try {
      nlohmann::json parsed = nlohmann::json::parse(resp.body);
      Completion c;
      c.text = parsed.at("choices").at(0).at("message").at("content").get<std::string>();
      c.backend = "live";
      c.usage.attempts = attempt;
      if (parsed.contains("usage")) {
        c.usage.prompt_tokens = parsed["usage"].value("prompt_tokens", 0);
        c.usage.completion_tokens = parsed["usage"].value("completion_tokens", 0);
      }
      if (c.usage.prompt_tokens == 0) c.usage.prompt_tokens = estimate_tokens(prompt);
      if (c.usage.completion_tokens == 0)
        c.usage.completion_tokens = estimate_tokens(c.text);
      return c;
    } catch (const nlohmann::json::exception& e) {
      throw Error(Errc::TransportError,
                  std::string("malformed completion payload: ") + e.what());
    }
  }
  throw Error(Errc::TransportError, "gave up after " + std::to_string(max_attempts) +
                                        " attempts (" + last_error + ") for " + key);
}

HttpResponse default_http_poster(const std::string& endpoint, const std::string& api_key,
                                 const std::string& body) {
  HttpResponse out;
  std::string scheme, host_port, path;
  std::size_t scheme_end = endpoint.find("://");
  if (scheme_end == std::string::npos) {
    out.error = "endpoint has no scheme: " + endpoint;
    return out;
  }
  scheme = endpoint.substr(0, scheme_end);
  std::size_t host_start = scheme_end + 3;
  std::size_t path_start = endpoint.find('/', host_start);
  if (path_start == std::string::npos) {
    host_port = endpoint.substr(host_start);
    path = "/";
  } else {
    host_port = endpoint.substr(host_start, path_start - host_start);
    path = endpoint.substr(path_start);
  }

  httplib::Headers headers = {{"Authorization", "Bearer " + api_key}};
  auto run = [&](auto& client) {
    client.set_connection_timeout(30, 0);
    client.set_read_timeout(120, 0);
    auto res = client.Post(path, headers, body, "application/json");
    if (!res) {
      out.error = "connection to " + host_port + " failed";
      return;
    }
    out.transport_ok = true;
    out.status = res->status;
    out.body = res->body;
  };

  if (scheme != "http" && scheme != "https") {
    out.error = "unsupported scheme " + scheme;
    return out;
  }
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
  if (scheme == "https") {
    out.error = "built without TLS support";
    return out;
  }
#endif
  httplib::Client client((scheme + "://" + host_port).c_str());
  run(client);
  return out;
}

}  // namespace planforge::llm
