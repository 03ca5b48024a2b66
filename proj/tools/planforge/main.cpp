// planforge: build, check, and solve planning models from the command line.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "planforge/builder/domain_builder.hpp"
#include "planforge/builder/feedback.hpp"
#include "planforge/builder/task_builder.hpp"
#include "planforge/diag/checks.hpp"
#include "planforge/engine/equivalence.hpp"
#include "planforge/engine/ground.hpp"
#include "planforge/engine/plan.hpp"
#include "planforge/engine/search.hpp"
#include "planforge/engine/validate.hpp"
#include "planforge/error.hpp"
#include "planforge/llm/client.hpp"
#include "planforge/llm/ledger.hpp"
#include "planforge/llm/prompt.hpp"
#include "planforge/pddl/formatter.hpp"
#include "planforge/pddl/parser.hpp"
#include "planforge/pipeline/config.hpp"
#include "planforge/pipeline/runner.hpp"

namespace {

using namespace planforge;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::IoError, "cannot write " + path);
  out << text;
  if (!text.empty() && text.back() != '\n') out << '\n';
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
  } else {
    spit(out_path, text);
  }
}

bool looks_like_problem(const std::string& text) {
  std::vector<std::string> tokens = pddl::tokenize(text);
  for (std::size_t i = 0; i + 1 < tokens.size(); ++i)
    if (tokens[i] == "(" && (tokens[i + 1] == "domain" || tokens[i + 1] == "problem"))
      return tokens[i + 1] == "problem";
  return false;
}

int print_diagnostics(const std::vector<diag::Diagnostic>& diags, bool json) {
  if (json) {
    std::cout << diag::to_json_string(diags) << "\n";
  } else {
    for (const auto& d : diags) std::cout << d.to_string() << "\n";
    if (diags.empty()) std::cout << "clean: no findings\n";
  }
  return diag::has_errors(diags) ? 1 : 0;
}

/// Shared knobs for every subcommand that talks to a model backend.
struct BackendArgs {
  std::string store;  // fixture directory
  bool live = false;
  std::string endpoint;
  std::string model;
  std::string api_key_env = "LLM_API_KEY";
  double temperature = 0.0;
  int max_output_tokens = 1024;
  int retries = 0;
  int backoff_ms = 0;
  std::int64_t token_budget = 0;
  std::string ledger_path;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--store", store, "fixture completion directory");
    cmd->add_flag("--live", live, "call a live endpoint instead of fixtures");
    cmd->add_option("--endpoint", endpoint, "chat completions URL (live)");
    cmd->add_option("--model", model, "model name (live)");
    cmd->add_option("--api-key-env", api_key_env,
                    "environment variable holding the API key (live)");
    cmd->add_option("--temperature", temperature, "sampling temperature (live)");
    cmd->add_option("--max-output-tokens", max_output_tokens, "completion cap (live)");
    cmd->add_option("--retries", retries, "retry count on transport failures (live)");
    cmd->add_option("--backoff-ms", backoff_ms, "linear backoff between attempts (live)");
    cmd->add_option("--token-budget", token_budget, "total token budget, 0 = unlimited");
    cmd->add_option("--ledger", ledger_path, "append prompt/completion records here");
  }

  llm::LLMClient make(std::optional<llm::RunLedger>& ledger) const {
    llm::RunLedger* lp = nullptr;
    if (!ledger_path.empty()) {
      ledger.emplace(ledger_path);
      lp = &*ledger;
    }
    llm::LLMClient client = [&] {
      if (live) {
        llm::LLMConfig cfg;
        if (!endpoint.empty()) cfg.endpoint = endpoint;
        cfg.model = model;
        cfg.temperature = temperature;
        cfg.max_output_tokens = max_output_tokens;
        cfg.retry = {retries, backoff_ms};
        cfg.api_key_env = api_key_env;
        cfg.validate();
        return llm::LLMClient::live(cfg, lp);
      }
      if (store.empty())
        throw Error(Errc::ConfigError, "fixture backend needs --store (or pass --live)");
      return llm::LLMClient::fixture(store, lp);
    }();
    client.set_token_budget(token_budget);
    return client;
  }
};

int cmd_parse(const std::string& file) {
  std::string text = slurp(file);
  if (looks_like_problem(text)) {
    pddl::Problem p = pddl::parse_problem(text, file);
    std::cout << "problem " << p.name << " (domain " << p.domain_name << "): "
              << p.objects.size() << " objects, " << p.init.size() << " init atoms, "
              << p.goal.size() << " goal literals\n";
  } else {
    pddl::Domain d = pddl::parse_domain(text, file);
    std::cout << "domain " << d.name << ": " << d.types.size() << " types, "
              << d.predicates.size() << " predicates, " << d.actions.size()
              << " actions\n";
  }
  return 0;
}

int cmd_fmt(const std::string& file, const std::string& out_path) {
  std::string text = slurp(file);
  if (looks_like_problem(text))
    emit(pddl::format_problem(pddl::parse_problem(text, file)), out_path);
  else
    emit(pddl::format_domain(pddl::parse_domain(text, file)), out_path);
  return 0;
}

int cmd_check(const std::string& domain_file, const std::string& problem_file, bool json) {
  pddl::Domain d = pddl::parse_domain(slurp(domain_file), domain_file);
  std::vector<diag::Diagnostic> diags = diag::check_domain(d);
  if (!problem_file.empty()) {
    pddl::Problem p = pddl::parse_problem(slurp(problem_file), problem_file);
    for (auto&& extra : {diag::check_problem(d, p), diag::cross_check(d, p)})
      diags.insert(diags.end(), extra.begin(), extra.end());
  }
  return print_diagnostics(diags, json);
}

int cmd_plan(const std::string& domain_file, const std::string& problem_file,
             const std::string& solver, std::uint64_t max_expansions, int timeout_ms,
             std::uint64_t seed, const std::string& out_path, bool json) {
  pddl::Domain d = pddl::parse_domain(slurp(domain_file), domain_file);
  pddl::Problem p = pddl::parse_problem(slurp(problem_file), problem_file);
  engine::GroundTask task = engine::ground(d, p);

  engine::SolveLimits limits;
  limits.mode = solver == "greedy" ? engine::SolveLimits::Mode::GreedyGoalCount
                                   : engine::SolveLimits::Mode::Bfs;
  limits.max_expansions = max_expansions;
  limits.timeout_ms = timeout_ms;
  limits.seed = seed;
  engine::SolveResult result = engine::solve(task, limits);

  if (result.solved()) {
    emit(engine::plan_to_text(task, result.plan), out_path);
    if (json)
      std::cerr << "; length " << result.plan.cost() << ", expansions "
                << result.expansions << "\n";
    return 0;
  }
  std::cerr << (result.status == engine::SolveResult::Status::Unsolvable
                    ? "unsolvable"
                    : "resource limit reached")
            << " after " << result.expansions << " expansions\n";
  return 1;
}

int cmd_validate_plan(const std::string& domain_file, const std::string& problem_file,
                      const std::string& plan_file, bool json) {
  pddl::Domain d = pddl::parse_domain(slurp(domain_file), domain_file);
  pddl::Problem p = pddl::parse_problem(slurp(problem_file), problem_file);
  std::vector<std::string> lines = engine::parse_plan_text(slurp(plan_file));
  engine::ValidationReport report = engine::validate_plan(d, p, lines);
  std::cout << (json ? report.to_json_string() : report.to_string()) << "\n";
  return report.valid() ? 0 : 1;
}

engine::NameMapping parse_mapping(const std::vector<std::string>& predicate_pairs,
                                  const std::vector<std::string>& action_pairs) {
  engine::NameMapping mapping;
  auto parse_into = [](const std::vector<std::string>& pairs,
                       std::map<std::string, std::string>& out, const char* what) {
    for (const std::string& pair : pairs) {
      std::size_t eq = pair.find('=');
      if (eq == std::string::npos || eq == 0 || eq + 1 == pair.size())
        throw Error(Errc::ConfigError,
                    std::string("--map-") + what + " wants from=to, got '" + pair + "'");
      out[pair.substr(0, eq)] = pair.substr(eq + 1);
    }
  };
  parse_into(predicate_pairs, mapping.predicates, "predicate");
  parse_into(action_pairs, mapping.actions, "action");
  return mapping;
}

int cmd_compare(const std::string& ref_file, const std::string& cand_file,
                const std::string& problem_file, int walks, int max_len,
                std::uint64_t seed, const std::vector<std::string>& map_predicates,
                const std::vector<std::string>& map_actions, bool json) {
  pddl::Domain reference = pddl::parse_domain(slurp(ref_file), ref_file);
  pddl::Domain candidate = pddl::parse_domain(slurp(cand_file), cand_file);
  pddl::Problem problem = pddl::parse_problem(slurp(problem_file), problem_file);

  engine::SamplerConfig config;
  config.n_walks = walks;
  config.max_len = max_len;
  config.seed = seed;
  engine::EquivalenceReport report = engine::operational_equivalence(
      reference, candidate, problem, config, parse_mapping(map_predicates, map_actions));

  if (json) {
    std::cout << report.to_json_string() << "\n";
  } else if (report.agree()) {
    std::cout << "agree on " << report.walks_run << " walks\n";
  } else {
    std::cout << "disagree at step " << report.step << ": " << report.detail << "\n";
    for (const auto& a : report.sequence) std::cout << "  " << a << "\n";
  }
  return report.agree() ? 0 : 1;
}

int cmd_build_domain(const BackendArgs& backend, const std::string& desc_file,
                     const std::string& actions_file, const std::string& types_file,
                     const std::string& template_file, const std::string& name,
                     int max_iter, const std::string& out_path, bool json) {
  std::optional<llm::RunLedger> ledger;
  llm::LLMClient client = backend.make(ledger);

  builder::ExtractContext ctx{slurp(desc_file), builder::TypeHierarchy::load(types_file)};
  ctx.types.validate();
  builder::NLActionModel model = builder::NLActionModel::load(actions_file);
  llm::PromptTemplate tmpl = llm::PromptTemplate::load(template_file);

  builder::DomainBuildResult built =
      builder::build_domain_action_by_action(client, tmpl, ctx, model, max_iter, "domain/");
  builder::AssembledDomain assembled = builder::assemble_domain(
      name, ctx.types.requirements, ctx.types, built.predicates, built.actions);

  emit(pddl::format_domain(assembled.domain), out_path);
  for (const auto& w : built.warnings) std::cerr << "warning: " << w << "\n";
  if (!assembled.diagnostics.empty()) {
    if (json)
      std::cerr << diag::to_json_string(assembled.diagnostics) << "\n";
    else
      for (const auto& d : assembled.diagnostics) std::cerr << d.to_string() << "\n";
  }
  return diag::has_errors(assembled.diagnostics) ? 1 : 0;
}

int cmd_build_task(const BackendArgs& backend, const std::string& desc_file,
                   const std::string& domain_file, const std::string& types_file,
                   const std::string& template_file, const std::string& name,
                   const std::string& out_path, bool json) {
  std::optional<llm::RunLedger> ledger;
  llm::LLMClient client = backend.make(ledger);

  pddl::Domain domain = pddl::parse_domain(slurp(domain_file), domain_file);
  builder::TypeHierarchy types = builder::TypeHierarchy::load(types_file);
  types.validate();
  llm::PromptTemplate tmpl = llm::PromptTemplate::load(template_file);

  builder::ExtractedTask ex = builder::extract_task(client, tmpl, slurp(desc_file), types,
                                                    domain.predicates, "task");
  emit(builder::generate_task(domain.name, name, ex.triple), out_path);
  for (const auto& w : ex.warnings) std::cerr << "warning: " << w << "\n";
  if (!ex.diagnostics.empty()) {
    if (json)
      std::cerr << diag::to_json_string(ex.diagnostics) << "\n";
    else
      for (const auto& d : ex.diagnostics) std::cerr << d.to_string() << "\n";
  }
  return diag::has_errors(ex.diagnostics) ? 1 : 0;
}

int cmd_feedback(const BackendArgs& backend, const std::string& target,
                 const std::string& mode_name, const std::string& template_file,
                 const std::string& desc_file, const std::string& domain_file,
                 const std::string& problem_file, const std::string& types_file,
                 const std::string& answers_file, const std::string& out_path,
                 bool json) {
  std::optional<llm::RunLedger> ledger;
  llm::LLMClient client = backend.make(ledger);
  builder::FeedbackMode mode = builder::feedback_mode_from(mode_name);

  std::ifstream answers;
  builder::ReviewIo io;
  if (mode != builder::FeedbackMode::Llm) {
    if (!answers_file.empty()) {
      answers.open(answers_file);
      if (!answers) throw Error(Errc::IoError, "cannot read answers file " + answers_file);
      io.in = &answers;
    }
    io.out = &std::cerr;  // keep stdout clean for the revised model
  }

  llm::PromptTemplate tmpl = llm::PromptTemplate::load(template_file);
  pddl::Domain domain = pddl::parse_domain(slurp(domain_file), domain_file);

  builder::FeedbackReport report;
  if (target == "task") {
    if (problem_file.empty() || types_file.empty())
      throw Error(Errc::ConfigError, "task feedback needs --problem and --types");
    pddl::Problem problem = pddl::parse_problem(slurp(problem_file), problem_file);
    builder::TypeHierarchy types = builder::TypeHierarchy::load(types_file);
    types.validate();
    builder::TaskTriple triple{problem.objects, problem.init, problem.goal};
    auto [revised, rep] =
        builder::task_feedback(client, tmpl, slurp(desc_file), types, domain.predicates,
                               triple, mode, "feedback/round1", io);
    report = std::move(rep);
    emit(builder::generate_task(problem.domain_name, problem.name, revised), out_path);
  } else if (target == "domain") {
    auto [revised, rep] = builder::domain_feedback(client, tmpl, slurp(desc_file), domain,
                                                   mode, "feedback/round1", io);
    report = std::move(rep);
    emit(pddl::format_domain(revised), out_path);
  } else {
    throw Error(Errc::ConfigError, "--target must be task or domain");
  }

  if (json) std::cerr << report.to_json_string() << "\n";
  std::cerr << (report.accepted() ? "verdict: accept" : "verdict: revise") << " ("
            << report.applied_count() << " edits applied)\n";
  return 0;
}

int cmd_run(const std::string& config_file, const std::string& backend,
            const std::string& out_dir, std::optional<std::uint64_t> seed,
            bool keep_going, int verbosity) {
  pipeline::PipelineConfig config = pipeline::PipelineConfig::load(config_file);
  pipeline::RunOptions options;
  options.keep_going = keep_going;
  options.verbosity = verbosity;
  options.log = &std::cerr;
  options.backend_override = backend;
  options.out_override = out_dir;
  options.seed_override = seed;

  pipeline::RunReport report = pipeline::run_pipeline(config, options);
  for (const auto& s : report.stages) {
    const char* status = s.status == pipeline::StageReport::Status::Ok ? "ok"
                         : s.status == pipeline::StageReport::Status::Failed ? "failed"
                                                                             : "skipped";
    std::cout << s.stage << ": " << status;
    if (!s.detail.empty()) std::cout << " (" << s.detail << ")";
    std::cout << "\n";
  }
  return pipeline::suggested_exit_code(report);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"planning model construction and checking toolkit"};
  app.require_subcommand(1);

  // parse
  std::string parse_file;
  CLI::App* parse_cmd = app.add_subcommand("parse", "parse a domain or problem file");
  parse_cmd->add_option("file", parse_file, "PDDL file")->required();

  // fmt
  std::string fmt_file, fmt_out;
  CLI::App* fmt_cmd = app.add_subcommand("fmt", "rewrite a model in canonical layout");
  fmt_cmd->add_option("file", fmt_file, "PDDL file")->required();
  fmt_cmd->add_option("-o,--out", fmt_out, "write here instead of stdout");

  // check
  std::string check_domain_file, check_problem_file;
  bool check_json = false;
  CLI::App* check_cmd = app.add_subcommand("check", "run the diagnostic suite");
  check_cmd->add_option("domain", check_domain_file, "domain file")->required();
  check_cmd->add_option("problem", check_problem_file, "problem file (optional)");
  check_cmd->add_flag("--json", check_json, "JSON diagnostics");

  // plan
  std::string plan_domain, plan_problem, plan_solver = "bfs", plan_out;
  std::uint64_t plan_max_expansions = 1'000'000, plan_seed = 0;
  int plan_timeout_ms = 0;
  bool plan_json = false;
  CLI::App* plan_cmd = app.add_subcommand("plan", "ground and solve a task");
  plan_cmd->add_option("domain", plan_domain, "domain file")->required();
  plan_cmd->add_option("problem", plan_problem, "problem file")->required();
  plan_cmd->add_option("--solver", plan_solver, "bfs (optimal) or greedy")
      ->check(CLI::IsMember({"bfs", "greedy"}));
  plan_cmd->add_option("--max-expansions", plan_max_expansions, "expansion cap");
  plan_cmd->add_option("--timeout-ms", plan_timeout_ms, "wall clock cap, 0 = none");
  plan_cmd->add_option("--seed", plan_seed, "recorded in the plan provenance");
  plan_cmd->add_option("-o,--out", plan_out, "plan file instead of stdout");
  plan_cmd->add_flag("--json", plan_json, "print search stats to stderr");

  // validate-plan
  std::string vp_domain, vp_problem, vp_plan;
  bool vp_json = false;
  CLI::App* vp_cmd = app.add_subcommand("validate-plan", "simulate a plan file");
  vp_cmd->add_option("domain", vp_domain, "domain file")->required();
  vp_cmd->add_option("problem", vp_problem, "problem file")->required();
  vp_cmd->add_option("plan", vp_plan, "plan file, one action per line")->required();
  vp_cmd->add_flag("--json", vp_json, "JSON report");

  // compare
  std::string cmp_ref, cmp_cand, cmp_problem;
  int cmp_walks = 200, cmp_max_len = 20;
  std::uint64_t cmp_seed = 0;
  std::vector<std::string> cmp_map_predicates, cmp_map_actions;
  bool cmp_json = false;
  CLI::App* cmp_cmd =
      app.add_subcommand("compare", "sampled operational comparison of two domains");
  cmp_cmd->add_option("reference", cmp_ref, "reference domain")->required();
  cmp_cmd->add_option("candidate", cmp_cand, "candidate domain")->required();
  cmp_cmd->add_option("problem", cmp_problem, "shared problem")->required();
  cmp_cmd->add_option("--walks", cmp_walks, "number of random walks");
  cmp_cmd->add_option("--max-len", cmp_max_len, "walk length cap");
  cmp_cmd->add_option("--seed", cmp_seed, "sampler seed");
  cmp_cmd->add_option("--map-predicate", cmp_map_predicates,
                      "reference=candidate predicate rename, repeatable");
  cmp_cmd->add_option("--map-action", cmp_map_actions,
                      "reference=candidate action rename, repeatable");
  cmp_cmd->add_flag("--json", cmp_json, "JSON report");

  // build-domain
  BackendArgs bd_backend;
  std::string bd_desc, bd_actions, bd_types, bd_template, bd_name = "generated", bd_out;
  int bd_max_iter = 2;
  bool bd_json = false;
  CLI::App* bd_cmd =
      app.add_subcommand("build-domain", "construct a domain action by action");
  bd_cmd->add_option("--desc", bd_desc, "domain description text file")->required();
  bd_cmd->add_option("--actions", bd_actions, "action model JSON")->required();
  bd_cmd->add_option("--types", bd_types, "type hierarchy JSON")->required();
  bd_cmd->add_option("--template", bd_template, "action extraction prompt template")
      ->required();
  bd_cmd->add_option("--name", bd_name, "domain name");
  bd_cmd->add_option("--max-iter", bd_max_iter, "construction sweeps");
  bd_cmd->add_option("-o,--out", bd_out, "domain file instead of stdout");
  bd_cmd->add_flag("--json", bd_json, "JSON diagnostics on stderr");
  bd_backend.add_to(bd_cmd);

  // build-task
  BackendArgs bt_backend;
  std::string bt_desc, bt_domain, bt_types, bt_template, bt_name = "generated-task", bt_out;
  bool bt_json = false;
  CLI::App* bt_cmd = app.add_subcommand("build-task", "extract a problem from text");
  bt_cmd->add_option("--desc", bt_desc, "problem description text file")->required();
  bt_cmd->add_option("--domain", bt_domain, "domain file supplying the vocabulary")
      ->required();
  bt_cmd->add_option("--types", bt_types, "type hierarchy JSON")->required();
  bt_cmd->add_option("--template", bt_template, "task extraction prompt template")
      ->required();
  bt_cmd->add_option("--name", bt_name, "problem name");
  bt_cmd->add_option("-o,--out", bt_out, "problem file instead of stdout");
  bt_cmd->add_flag("--json", bt_json, "JSON diagnostics on stderr");
  bt_backend.add_to(bt_cmd);

  // feedback
  BackendArgs fb_backend;
  std::string fb_target = "task", fb_mode = "llm", fb_template, fb_desc, fb_domain;
  std::string fb_problem, fb_types, fb_answers, fb_out;
  bool fb_json = false;
  CLI::App* fb_cmd = app.add_subcommand("feedback", "run one feedback round on a model");
  fb_cmd->add_option("--target", fb_target, "task or domain")
      ->check(CLI::IsMember({"task", "domain"}));
  fb_cmd->add_option("--mode", fb_mode, "llm, human, or hybrid")
      ->check(CLI::IsMember({"llm", "human", "hybrid"}));
  fb_cmd->add_option("--template", fb_template, "feedback checklist template")->required();
  fb_cmd->add_option("--desc", fb_desc, "natural language description")->required();
  fb_cmd->add_option("--domain", fb_domain, "domain file")->required();
  fb_cmd->add_option("--problem", fb_problem, "problem file (task target)");
  fb_cmd->add_option("--types", fb_types, "type hierarchy JSON (task target)");
  fb_cmd->add_option("--answers", fb_answers,
                     "scripted reviewer answers (defaults to stdin)");
  fb_cmd->add_option("-o,--out", fb_out, "revised model instead of stdout");
  fb_cmd->add_flag("--json", fb_json, "JSON report on stderr");
  fb_backend.add_to(fb_cmd);

  // run
  std::string run_config, run_backend, run_out;
  std::uint64_t run_seed_value = 0;
  bool run_keep_going = false;
  CLI::App* run_cmd = app.add_subcommand("run", "execute a configured pipeline");
  run_cmd->add_option("-c,--config", run_config, "pipeline YAML")->required();
  run_cmd->add_option("--backend", run_backend, "override: fixture or live")
      ->check(CLI::IsMember({"fixture", "live"}));
  run_cmd->add_option("--out", run_out, "override the output directory");
  CLI::Option* run_seed_opt = run_cmd->add_option("--seed", run_seed_value, "override the seed");
  run_cmd->add_flag("--keep-going", run_keep_going, "attempt later stages after a failure");
  int run_verbosity = 0;
  run_cmd->add_flag("-v", run_verbosity, "stage progress on stderr, repeat for detail");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (parse_cmd->parsed()) return cmd_parse(parse_file);
    if (fmt_cmd->parsed()) return cmd_fmt(fmt_file, fmt_out);
    if (check_cmd->parsed()) return cmd_check(check_domain_file, check_problem_file, check_json);
    if (plan_cmd->parsed())
      return cmd_plan(plan_domain, plan_problem, plan_solver, plan_max_expansions,
                      plan_timeout_ms, plan_seed, plan_out, plan_json);
    if (vp_cmd->parsed()) return cmd_validate_plan(vp_domain, vp_problem, vp_plan, vp_json);
    if (cmp_cmd->parsed())
      return cmd_compare(cmp_ref, cmp_cand, cmp_problem, cmp_walks, cmp_max_len, cmp_seed,
                         cmp_map_predicates, cmp_map_actions, cmp_json);
    if (bd_cmd->parsed())
      return cmd_build_domain(bd_backend, bd_desc, bd_actions, bd_types, bd_template,
                              bd_name, bd_max_iter, bd_out, bd_json);
    if (bt_cmd->parsed())
      return cmd_build_task(bt_backend, bt_desc, bt_domain, bt_types, bt_template, bt_name,
                            bt_out, bt_json);
    if (fb_cmd->parsed())
      return cmd_feedback(fb_backend, fb_target, fb_mode, fb_template, fb_desc, fb_domain,
                          fb_problem, fb_types, fb_answers, fb_out, fb_json);
    if (run_cmd->parsed()) {
      std::optional<std::uint64_t> seed;
      if (run_seed_opt->count() > 0) seed = run_seed_value;
      return cmd_run(run_config, run_backend, run_out, seed, run_keep_going, run_verbosity);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
