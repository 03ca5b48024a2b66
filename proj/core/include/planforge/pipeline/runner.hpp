#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "planforge/pipeline/config.hpp"

namespace planforge::pipeline {

struct StageReport {
  std::string stage;
  enum class Status { Ok, Failed, Skipped } status = Status::Skipped;
  std::string detail;                  // failure reason or a one-line summary
  std::string error_code;              // errc name when an exception ended the stage
  std::vector<std::string> artifacts;  // file names relative to the out dir
  std::vector<std::string> notes;      // non-fatal warnings, kept deterministic
};

struct RunReport {
  std::string name;
  std::string out_dir;
  std::vector<StageReport> stages;

  bool ok() const;
  std::string to_json_string() const;
};

struct RunOptions {
  bool keep_going = false;  // attempt later stages after a failure
  int verbosity = 0;        // 0 quiet, 1 stage lines, 2 artifact detail
  std::ostream* log = nullptr;
  std::string backend_override;        // "" keeps the config's backend
  std::filesystem::path out_override;  // "" keeps the config's out_dir
  std::optional<std::uint64_t> seed_override;
};

/// Execute the configured stages in order. Artifacts land under the out
/// directory and are byte-stable across runs; only the ledger timestamps
/// vary. A failed stage halts the run unless keep_going is set, in which
/// case later stages run when their inputs survived. The report itself is
/// also written as run_report.json.
RunReport run_pipeline(const PipelineConfig& config, const RunOptions& options = {});

/// 0 when every stage passed, otherwise the worst stage outcome: 2 for
/// environment failures (config, io, auth, transport, budget), 1 for
/// model-quality failures.
int suggested_exit_code(const RunReport& report);

}  // namespace planforge::pipeline
