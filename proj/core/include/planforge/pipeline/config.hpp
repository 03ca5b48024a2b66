#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "planforge/llm/client.hpp"

namespace planforge::pipeline {

enum class Stage { BuildDomain, BuildTask, Validate, Plan, Feedback };

std::string stage_name(Stage stage);
Stage stage_from(const std::string& name);  // ConfigError on junk

struct Limits {
  int max_iter = 2;        // domain build sweeps
  int max_rounds = 3;      // feedback rounds
  std::int64_t token_budget = 0;  // 0 = unlimited
  std::int64_t solver_max_expansions = 1'000'000;
  std::int64_t solver_timeout_ms = 0;  // 0 = no deadline
};

/// One YAML file describing one run: which stages, which inputs, which
/// backend. Relative paths are resolved against the YAML's directory at
/// load time. ${VAR} environment interpolation is honored in the llm
/// section only; the API key itself always stays in the environment.
struct PipelineConfig {
  std::string name;
  std::string domain_name;   // defaults to name
  std::string problem_name;  // defaults to name + "-task"
  std::string backend = "fixture";  // "fixture" | "live"
  std::filesystem::path fixture_dir;
  std::vector<Stage> stages;
  std::filesystem::path out_dir = "out";
  std::uint64_t seed = 0;
  Limits limits;
  std::string solver = "bfs";  // "bfs" | "greedy"
  std::string feedback_mode = "llm";

  struct Inputs {
    std::filesystem::path domain_desc;
    std::filesystem::path action_model;
    std::filesystem::path hierarchy;
    std::filesystem::path problem_desc;
    std::filesystem::path domain_file;   // skips build-domain as the domain source
    std::filesystem::path problem_file;  // skips build-task as the problem source
  } inputs;

  struct Templates {
    std::filesystem::path predicates;
    std::filesystem::path action;
    std::filesystem::path task;
    std::filesystem::path task_feedback;
    std::filesystem::path domain_feedback;
  } templates;

  std::filesystem::path answers_file;  // scripted reviewer for human/hybrid
  llm::LLMConfig llm;

  static PipelineConfig load(const std::filesystem::path& file);
  static PipelineConfig from_yaml_text(const std::string& text,
                                       const std::filesystem::path& base_dir);

  bool has_stage(Stage stage) const;
  void validate() const;  // ConfigError on anything inconsistent
};

}  // namespace planforge::pipeline
