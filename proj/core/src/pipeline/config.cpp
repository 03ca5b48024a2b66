#include "planforge/pipeline/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "planforge/error.hpp"

namespace planforge::pipeline {

namespace {

const Stage kStageOrder[] = {Stage::BuildDomain, Stage::BuildTask, Stage::Validate,
                             Stage::Plan, Stage::Feedback};

int stage_rank(Stage s) {
  for (int i = 0; i < 5; ++i)
    if (kStageOrder[i] == s) return i;
  return -1;
}

void reject_unknown_keys(const YAML::Node& node, const std::set<std::string>& known,
                         const std::string& where) {
  if (!node || !node.IsMap()) return;
  for (const auto& kv : node) {
    std::string key = kv.first.as<std::string>();
    if (!known.count(key))
      throw Error(Errc::ConfigError, "unknown key '" + key + "' in " + where);
  }
}

std::string get_string(const YAML::Node& node, const std::string& key,
                       const std::string& fallback = "") {
  if (!node[key]) return fallback;
  if (!node[key].IsScalar())
    throw Error(Errc::ConfigError, "'" + key + "' must be a scalar");
  return node[key].as<std::string>();
}

std::int64_t get_int(const YAML::Node& node, const std::string& key, std::int64_t fallback) {
  if (!node[key]) return fallback;
  try {
    return node[key].as<std::int64_t>();
  } catch (const YAML::Exception&) {
    throw Error(Errc::ConfigError, "'" + key + "' must be an integer");
  }
}

/// ${VAR} substitution, llm section only. Unset variables are a hard
/// error so a typo cannot silently select the default endpoint.
std::string interpolate_env(const std::string& text) {
  std::string out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] == '$' && i + 1 < text.size() && text[i + 1] == '{') {
      std::size_t close = text.find('}', i + 2);
      if (close == std::string::npos)
        throw Error(Errc::ConfigError, "unterminated ${ in '" + text + "'");
      std::string var = text.substr(i + 2, close - i - 2);
      if (var.empty()) throw Error(Errc::ConfigError, "empty ${} in '" + text + "'");
      const char* value = std::getenv(var.c_str());
      if (!value)
        throw Error(Errc::ConfigError, "environment variable " + var + " is not set");
      out += value;
      i = close + 1;
    } else {
      out += text[i];
      ++i;
    }
  }
  return out;
}

std::filesystem::path resolve(const std::filesystem::path& base,
                              const std::string& value) {
  if (value.empty()) return {};
  std::filesystem::path p(value);
  if (p.is_absolute()) return p.lexically_normal();
  return (base / p).lexically_normal();
}

}  // namespace

std::string stage_name(Stage stage) {
  switch (stage) {
    case Stage::BuildDomain: return "build-domain";
    case Stage::BuildTask: return "build-task";
    case Stage::Validate: return "validate";
    case Stage::Plan: return "plan";
    case Stage::Feedback: return "feedback";
  }
  return "?";
}

Stage stage_from(const std::string& name) {
  for (Stage s : kStageOrder)
    if (stage_name(s) == name) return s;
  throw Error(Errc::ConfigError, "unknown stage '" + name + "'");
}

bool PipelineConfig::has_stage(Stage stage) const {
  return std::find(stages.begin(), stages.end(), stage) != stages.end();
}

PipelineConfig PipelineConfig::load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error(Errc::IoError, "cannot read config " + file.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  std::filesystem::path base = file.has_parent_path() ? file.parent_path()
                                                      : std::filesystem::path(".");
  return from_yaml_text(buf.str(), base);
}

PipelineConfig PipelineConfig::from_yaml_text(const std::string& text,
                                              const std::filesystem::path& base_dir) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw Error(Errc::ConfigError, std::string("YAML parse failure: ") + e.what());
  }
  if (!root.IsMap()) throw Error(Errc::ConfigError, "config root must be a mapping");

  reject_unknown_keys(root,
                      {"name", "domain_name", "problem_name", "backend", "fixture_dir",
                       "stages", "out_dir", "seed", "limits", "solver", "feedback_mode",
                       "inputs", "templates", "answers_file", "llm"},
                      "config");

  PipelineConfig cfg;
  cfg.name = get_string(root, "name");
  cfg.domain_name = get_string(root, "domain_name", cfg.name);
  cfg.problem_name = get_string(root, "problem_name", cfg.name + "-task");
  cfg.backend = get_string(root, "backend", "fixture");
  cfg.fixture_dir = resolve(base_dir, get_string(root, "fixture_dir"));
  cfg.out_dir = resolve(base_dir, get_string(root, "out_dir", "out"));
  cfg.seed = static_cast<std::uint64_t>(get_int(root, "seed", 0));
  cfg.solver = get_string(root, "solver", "bfs");
  cfg.feedback_mode = get_string(root, "feedback_mode", "llm");
  cfg.answers_file = resolve(base_dir, get_string(root, "answers_file"));

  if (root["stages"]) {
    if (!root["stages"].IsSequence())
      throw Error(Errc::ConfigError, "'stages' must be a sequence");
    for (const auto& s : root["stages"]) cfg.stages.push_back(stage_from(s.as<std::string>()));
  }

  if (root["limits"]) {
    const YAML::Node& lim = root["limits"];
    reject_unknown_keys(lim,
                        {"max_iter", "max_rounds", "token_budget",
                         "solver_max_expansions", "solver_timeout_ms"},
                        "limits");
    cfg.limits.max_iter = static_cast<int>(get_int(lim, "max_iter", cfg.limits.max_iter));
    cfg.limits.max_rounds =
        static_cast<int>(get_int(lim, "max_rounds", cfg.limits.max_rounds));
    cfg.limits.token_budget = get_int(lim, "token_budget", cfg.limits.token_budget);
    cfg.limits.solver_max_expansions =
        get_int(lim, "solver_max_expansions", cfg.limits.solver_max_expansions);
    cfg.limits.solver_timeout_ms =
        get_int(lim, "solver_timeout_ms", cfg.limits.solver_timeout_ms);
  }

  if (root["inputs"]) {
    const YAML::Node& in = root["inputs"];
    reject_unknown_keys(in,
                        {"domain_desc", "action_model", "hierarchy", "problem_desc",
                         "domain_file", "problem_file"},
                        "inputs");
    cfg.inputs.domain_desc = resolve(base_dir, get_string(in, "domain_desc"));
    cfg.inputs.action_model = resolve(base_dir, get_string(in, "action_model"));
    cfg.inputs.hierarchy = resolve(base_dir, get_string(in, "hierarchy"));
    cfg.inputs.problem_desc = resolve(base_dir, get_string(in, "problem_desc"));
    cfg.inputs.domain_file = resolve(base_dir, get_string(in, "domain_file"));
    cfg.inputs.problem_file = resolve(base_dir, get_string(in, "problem_file"));
  }

  if (root["templates"]) {
    const YAML::Node& t = root["templates"];
    reject_unknown_keys(
        t, {"predicates", "action", "task", "task_feedback", "domain_feedback"},
        "templates");
    cfg.templates.predicates = resolve(base_dir, get_string(t, "predicates"));
    cfg.templates.action = resolve(base_dir, get_string(t, "action"));
    cfg.templates.task = resolve(base_dir, get_string(t, "task"));
    cfg.templates.task_feedback = resolve(base_dir, get_string(t, "task_feedback"));
    cfg.templates.domain_feedback = resolve(base_dir, get_string(t, "domain_feedback"));
  }

  if (root["llm"]) {
    const YAML::Node& l = root["llm"];
    reject_unknown_keys(
        l, {"endpoint", "model", "temperature", "max_output_tokens", "retry", "api_key_env"},
        "llm");
    cfg.llm.endpoint = interpolate_env(get_string(l, "endpoint", cfg.llm.endpoint));
    cfg.llm.model = interpolate_env(get_string(l, "model", cfg.llm.model));
    if (l["temperature"]) cfg.llm.temperature = l["temperature"].as<double>();
    cfg.llm.max_output_tokens = static_cast<int>(
        get_int(l, "max_output_tokens", cfg.llm.max_output_tokens));
    if (l["retry"]) {
      reject_unknown_keys(l["retry"], {"count", "backoff_ms"}, "llm.retry");
      cfg.llm.retry.count = static_cast<int>(get_int(l["retry"], "count", 0));
      cfg.llm.retry.backoff_ms = static_cast<int>(get_int(l["retry"], "backoff_ms", 0));
    }
    cfg.llm.api_key_env = interpolate_env(get_string(l, "api_key_env", cfg.llm.api_key_env));
  }

  cfg.validate();
  return cfg;
}

void PipelineConfig::validate() const {
  if (name.empty()) throw Error(Errc::ConfigError, "'name' is required");
  if (backend != "fixture" && backend != "live")
    throw Error(Errc::ConfigError, "backend must be 'fixture' or 'live', got '" + backend + "'");
  if (solver != "bfs" && solver != "greedy")
    throw Error(Errc::ConfigError, "solver must be 'bfs' or 'greedy', got '" + solver + "'");
  if (feedback_mode != "llm" && feedback_mode != "human" && feedback_mode != "hybrid")
    throw Error(Errc::ConfigError, "feedback_mode must be llm, human, or hybrid");
  if (stages.empty()) throw Error(Errc::ConfigError, "'stages' must list at least one stage");
  for (std::size_t i = 1; i < stages.size(); ++i) {
    if (stages[i] == stages[i - 1])
      throw Error(Errc::ConfigError, "stage " + stage_name(stages[i]) + " listed twice");
    if (stage_rank(stages[i]) < stage_rank(stages[i - 1]))
      throw Error(Errc::ConfigError,
                  "stages out of order: " + stage_name(stages[i]) + " cannot follow " +
                      stage_name(stages[i - 1]));
  }
  if (limits.max_iter < 1) throw Error(Errc::ConfigError, "limits.max_iter must be >= 1");
  if (limits.max_rounds < 1) throw Error(Errc::ConfigError, "limits.max_rounds must be >= 1");
  if (limits.token_budget < 0)
    throw Error(Errc::ConfigError, "limits.token_budget must be >= 0");
  if (limits.solver_max_expansions < 1)
    throw Error(Errc::ConfigError, "limits.solver_max_expansions must be >= 1");
  if (limits.solver_timeout_ms < 0)
    throw Error(Errc::ConfigError, "limits.solver_timeout_ms must be >= 0");

  bool needs_llm = has_stage(Stage::BuildDomain) || has_stage(Stage::BuildTask) ||
                   has_stage(Stage::Feedback);
  if (needs_llm && backend == "fixture" && fixture_dir.empty())
    throw Error(Errc::ConfigError, "fixture backend needs 'fixture_dir'");
  if (backend == "live") llm.validate();

  bool domain_source = has_stage(Stage::BuildDomain) || !inputs.domain_file.empty();
  bool problem_source = has_stage(Stage::BuildTask) || !inputs.problem_file.empty();

  if (has_stage(Stage::BuildDomain)) {
    if (inputs.domain_desc.empty())
      throw Error(Errc::ConfigError, "build-domain needs inputs.domain_desc");
    if (inputs.action_model.empty())
      throw Error(Errc::ConfigError, "build-domain needs inputs.action_model");
    if (inputs.hierarchy.empty())
      throw Error(Errc::ConfigError, "build-domain needs inputs.hierarchy");
    if (templates.action.empty())
      throw Error(Errc::ConfigError, "build-domain needs templates.action");
  }
  if (has_stage(Stage::BuildTask)) {
    if (inputs.problem_desc.empty())
      throw Error(Errc::ConfigError, "build-task needs inputs.problem_desc");
    if (inputs.hierarchy.empty())
      throw Error(Errc::ConfigError, "build-task needs inputs.hierarchy");
    if (templates.task.empty())
      throw Error(Errc::ConfigError, "build-task needs templates.task");
    if (!domain_source)
      throw Error(Errc::ConfigError,
                  "build-task needs a domain source (build-domain stage or inputs.domain_file)");
  }
  if (has_stage(Stage::Validate) && !domain_source)
    throw Error(Errc::ConfigError,
                "validate needs a domain source (build-domain stage or inputs.domain_file)");
  if (has_stage(Stage::Plan) && (!domain_source || !problem_source))
    throw Error(Errc::ConfigError, "plan needs both a domain source and a problem source");
  if (has_stage(Stage::Feedback)) {
    if (problem_source) {
      if (templates.task_feedback.empty())
        throw Error(Errc::ConfigError, "task feedback needs templates.task_feedback");
      if (inputs.problem_desc.empty())
        throw Error(Errc::ConfigError, "task feedback needs inputs.problem_desc");
      if (inputs.hierarchy.empty())
        throw Error(Errc::ConfigError, "task feedback needs inputs.hierarchy");
      if (!domain_source)
        throw Error(Errc::ConfigError, "task feedback needs a domain source for the vocabulary");
    } else if (domain_source) {
      if (templates.domain_feedback.empty())
        throw Error(Errc::ConfigError, "domain feedback needs templates.domain_feedback");
      if (inputs.domain_desc.empty())
        throw Error(Errc::ConfigError, "domain feedback needs inputs.domain_desc");
    } else {
      throw Error(Errc::ConfigError, "feedback needs a domain or problem source");
    }
    if (feedback_mode != "llm" && answers_file.empty())
      throw Error(Errc::ConfigError,
                  feedback_mode + " feedback in a pipeline needs 'answers_file'");
  }
}

}  // namespace planforge::pipeline
