#include "planforge/llm/ledger.hpp"

#include <chrono>
#include <fstream>
#include <nlohmann/json.hpp>

#include "planforge/error.hpp"

namespace planforge::llm {

RunLedger::RunLedger(std::filesystem::path file) : path_(std::move(file)) {
  if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
}

void RunLedger::record(const LedgerEntry& entry) {
  nlohmann::json j;
  {
    auto now = std::chrono::system_clock::now();
    auto secs = std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch());
    std::time_t t = secs.count();
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    j["ts"] = buf;
  }
  j["key"] = entry.key;
  j["backend"] = entry.backend;
  if (!entry.model.empty()) j["model"] = entry.model;
  j["attempts"] = entry.attempts;
  j["prompt_tokens"] = entry.prompt_tokens;
  j["completion_tokens"] = entry.completion_tokens;
  j["prompt"] = entry.prompt;
  j["completion"] = entry.completion;

  std::lock_guard<std::mutex> lock(mutex_);
  std::ofstream out(path_, std::ios::app);
  if (!out) throw Error(Errc::IoError, "cannot append to ledger " + path_.string());
  out << j.dump() << "\n";
}

}  // namespace planforge::llm
