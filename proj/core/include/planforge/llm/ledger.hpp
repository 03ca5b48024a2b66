#pragma once

#include <filesystem>
#include <mutex>
#include <string>

namespace planforge::llm {

struct LedgerEntry {
  std::string key;
  std::string backend;
  std::string model;
  std::string prompt;
  std::string completion;
  int attempts = 1;
  int prompt_tokens = 0;
  int completion_tokens = 0;
};

/// Append-only JSONL audit trail of every LLM exchange. One line per
/// call; the "ts" field is the only non-deterministic part, comparisons
/// should drop it.
class RunLedger {
 public:
  explicit RunLedger(std::filesystem::path file);

  void record(const LedgerEntry& entry);
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::mutex mutex_;
};

}  // namespace planforge::llm
