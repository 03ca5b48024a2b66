#include "planforge/pipeline/runner.hpp"

#include <algorithm>
#include <fstream>
#include <nlohmann/json.hpp>
#include <optional>
#include <sstream>

#include "planforge/builder/domain_builder.hpp"
#include "planforge/builder/feedback.hpp"
#include "planforge/builder/task_builder.hpp"
#include "planforge/diag/checks.hpp"
#include "planforge/engine/ground.hpp"
#include "planforge/engine/search.hpp"
#include "planforge/engine/validate.hpp"
#include "planforge/error.hpp"
#include "planforge/llm/client.hpp"
#include "planforge/pddl/formatter.hpp"
#include "planforge/pddl/parser.hpp"

namespace planforge::pipeline {

namespace {

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct RunContext {
  const PipelineConfig& cfg;
  const RunOptions& opts;
  std::filesystem::path out;
  std::string backend;
  std::uint64_t seed = 0;

  std::optional<llm::RunLedger> ledger;
  std::optional<llm::LLMClient> client;

  std::optional<pddl::Domain> domain;
  std::optional<pddl::Problem> problem;
  std::optional<builder::TaskTriple> triple;
  std::optional<builder::TypeHierarchy> hierarchy;
};

void spit(RunContext& ctx, StageReport& report, const std::string& file,
          const std::string& text) {
  std::filesystem::path path = ctx.out / file;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
  out << text;
  if (!text.empty() && text.back() != '\n') out << '\n';
  out.flush();
  if (!out) throw Error(Errc::IoError, "write failed for " + path.string());
  if (std::find(report.artifacts.begin(), report.artifacts.end(), file) ==
      report.artifacts.end())
    report.artifacts.push_back(file);
  if (ctx.opts.verbosity >= 2 && ctx.opts.log)
    *ctx.opts.log << "  wrote " << path.string() << "\n";
}

llm::LLMClient& ensure_client(RunContext& ctx) {
  if (ctx.client) return *ctx.client;
  ctx.ledger.emplace(ctx.out / "ledger.jsonl");
  if (ctx.backend == "fixture") {
    if (ctx.cfg.fixture_dir.empty())
      throw Error(Errc::ConfigError, "fixture backend needs 'fixture_dir'");
    ctx.client = llm::LLMClient::fixture(ctx.cfg.fixture_dir, &*ctx.ledger);
  } else {
    ctx.client = llm::LLMClient::live(ctx.cfg.llm, &*ctx.ledger);
  }
  ctx.client->set_token_budget(ctx.cfg.limits.token_budget);
  return *ctx.client;
}

const builder::TypeHierarchy& ensure_hierarchy(RunContext& ctx) {
  if (!ctx.hierarchy) {
    if (ctx.cfg.inputs.hierarchy.empty())
      throw Error(Errc::ConfigError, "no type hierarchy input configured");
    ctx.hierarchy = builder::TypeHierarchy::load(ctx.cfg.inputs.hierarchy);
    ctx.hierarchy->validate();
  }
  return *ctx.hierarchy;
}

bool domain_available(const RunContext& ctx) {
  return ctx.domain.has_value() || !ctx.cfg.inputs.domain_file.empty();
}

bool problem_available(const RunContext& ctx) {
  return ctx.problem.has_value() || !ctx.cfg.inputs.problem_file.empty();
}

const pddl::Domain& ensure_domain(RunContext& ctx) {
  if (!ctx.domain) {
    const auto& file = ctx.cfg.inputs.domain_file;
    if (file.empty()) throw Error(Errc::ConfigError, "no domain available");
    ctx.domain = pddl::parse_domain(slurp(file), file.filename().string());
  }
  return *ctx.domain;
}

const pddl::Problem& ensure_problem(RunContext& ctx) {
  if (!ctx.problem) {
    const auto& file = ctx.cfg.inputs.problem_file;
    if (file.empty()) throw Error(Errc::ConfigError, "no problem available");
    ctx.problem = pddl::parse_problem(slurp(file), file.filename().string());
  }
  return *ctx.problem;
}

const builder::TaskTriple& ensure_triple(RunContext& ctx) {
  if (!ctx.triple) {
    const pddl::Problem& p = ensure_problem(ctx);
    ctx.triple = builder::TaskTriple{p.objects, p.init, p.goal};
  }
  return *ctx.triple;
}

std::string count_phrase(std::size_t n, const char* noun) {
  return std::to_string(n) + " " + noun + (n == 1 ? "" : "s");
}

std::string first_error(const std::vector<diag::Diagnostic>& diags) {
  for (const auto& d : diags)
    if (d.severity == diag::Severity::Error) return d.to_string();
  return "";
}

bool stage_build_domain(RunContext& ctx, StageReport& report) {
  llm::LLMClient& client = ensure_client(ctx);
  std::string domain_desc = slurp(ctx.cfg.inputs.domain_desc);
  builder::NLActionModel model = builder::NLActionModel::load(ctx.cfg.inputs.action_model);
  builder::ExtractContext ectx{domain_desc, ensure_hierarchy(ctx)};
  llm::PromptTemplate tmpl = llm::PromptTemplate::load(ctx.cfg.templates.action);

  builder::DomainBuildResult built = builder::build_domain_action_by_action(
      client, tmpl, ectx, model, ctx.cfg.limits.max_iter, "domain/");
  builder::AssembledDomain assembled =
      builder::assemble_domain(ctx.cfg.domain_name, ectx.types.requirements, ectx.types,
                               built.predicates, built.actions);
  ctx.domain = assembled.domain;
  report.notes = built.warnings;

  spit(ctx, report, "domain.pddl", pddl::format_domain(*ctx.domain));
  nlohmann::ordered_json preds = nlohmann::ordered_json::array();
  for (const auto& p : ctx.domain->predicates)
    preds.push_back({{"name", p.name}, {"arity", p.arity()}, {"signature", p.clean()}});
  spit(ctx, report, "predicates.json", preds.dump(2));
  spit(ctx, report, "domain_diagnostics.json", diag::to_json_string(assembled.diagnostics));

  if (diag::has_errors(assembled.diagnostics)) {
    report.detail = first_error(assembled.diagnostics);
    return false;
  }
  report.detail = count_phrase(ctx.domain->predicates.size(), "predicate") + ", " +
                  count_phrase(ctx.domain->actions.size(), "action") + ", " +
                  count_phrase(static_cast<std::size_t>(built.sweeps_run), "sweep");
  return true;
}

bool stage_build_task(RunContext& ctx, StageReport& report) {
  llm::LLMClient& client = ensure_client(ctx);
  const pddl::Domain& domain = ensure_domain(ctx);
  std::string problem_desc = slurp(ctx.cfg.inputs.problem_desc);
  llm::PromptTemplate tmpl = llm::PromptTemplate::load(ctx.cfg.templates.task);

  builder::ExtractedTask ex = builder::extract_task(
      client, tmpl, problem_desc, ensure_hierarchy(ctx), domain.predicates, "task");
  ctx.triple = ex.triple;
  ctx.problem = builder::to_problem(domain.name, ctx.cfg.problem_name, ex.triple);
  report.notes = ex.warnings;

  spit(ctx, report, "problem.pddl", pddl::format_problem(*ctx.problem));
  spit(ctx, report, "task_diagnostics.json", diag::to_json_string(ex.diagnostics));

  if (diag::has_errors(ex.diagnostics)) {
    report.detail = first_error(ex.diagnostics);
    return false;
  }
  report.detail = count_phrase(ctx.triple->objects.size(), "object") + ", " +
                  count_phrase(ctx.triple->init.size(), "init atom") + ", " +
                  count_phrase(ctx.triple->goal.size(), "goal literal");
  return true;
}

bool stage_validate(RunContext& ctx, StageReport& report) {
  const pddl::Domain& domain = ensure_domain(ctx);
  std::vector<diag::Diagnostic> diags = diag::check_domain(domain);
  if (problem_available(ctx)) {
    const pddl::Problem& problem = ensure_problem(ctx);
    std::vector<diag::Diagnostic> more = diag::check_problem(domain, problem);
    diags.insert(diags.end(), more.begin(), more.end());
    more = diag::cross_check(domain, problem);
    diags.insert(diags.end(), more.begin(), more.end());
  }
  spit(ctx, report, "diagnostics.json", diag::to_json_string(diags));

  std::size_t errors = diag::errors_only(diags).size();
  std::size_t warnings = diags.size() - errors;
  report.detail =
      count_phrase(errors, "error") + ", " + count_phrase(warnings, "warning");
  if (errors > 0) {
    report.detail = first_error(diags);
    return false;
  }
  return true;
}

bool stage_plan(RunContext& ctx, StageReport& report) {
  engine::GroundTask task = engine::ground(ensure_domain(ctx), ensure_problem(ctx));
  engine::SolveLimits limits;
  limits.mode = ctx.cfg.solver == "greedy" ? engine::SolveLimits::Mode::GreedyGoalCount
                                           : engine::SolveLimits::Mode::Bfs;
  limits.max_expansions = static_cast<std::uint64_t>(ctx.cfg.limits.solver_max_expansions);
  limits.timeout_ms = static_cast<int>(ctx.cfg.limits.solver_timeout_ms);
  limits.seed = ctx.seed;

  engine::SolveResult result = engine::solve(task, limits);

  nlohmann::ordered_json pj;
  pj["solver"] = ctx.cfg.solver;
  pj["ground_actions"] = task.actions.size();
  pj["ground_atoms"] = task.atoms.size();
  pj["expansions"] = result.expansions;
  switch (result.status) {
    case engine::SolveResult::Status::Solved: pj["status"] = "solved"; break;
    case engine::SolveResult::Status::Unsolvable: pj["status"] = "unsolvable"; break;
    case engine::SolveResult::Status::ResourceExhausted:
      pj["status"] = "resource_exhausted";
      break;
  }
  if (result.solved()) {
    pj["length"] = result.plan.cost();
    std::string text = engine::plan_to_text(task, result.plan);
    spit(ctx, report, "plan.txt", text);
    engine::ValidationReport check = engine::validate_plan(task, result.plan);
    pj["validation"] = nlohmann::ordered_json::parse(check.to_json_string());
  }
  spit(ctx, report, "plan_report.json", pj.dump(2));

  if (!result.solved()) {
    report.detail = result.status == engine::SolveResult::Status::Unsolvable
                        ? "no plan exists"
                        : "search hit the resource limit";
    return false;
  }
  report.detail = "plan of length " + std::to_string(result.plan.cost()) + " after " +
                  std::to_string(result.expansions) + " expansions";
  return true;
}

bool stage_feedback(RunContext& ctx, StageReport& report) {
  llm::LLMClient& client = ensure_client(ctx);
  builder::FeedbackMode mode = builder::feedback_mode_from(ctx.cfg.feedback_mode);

  std::ifstream answers;
  std::ostringstream sink;
  builder::ReviewIo io;
  if (mode != builder::FeedbackMode::Llm) {
    answers.open(ctx.cfg.answers_file);
    if (!answers)
      throw Error(Errc::IoError, "cannot read answers file " +
                                     ctx.cfg.answers_file.string());
    io.in = &answers;
    io.out = &sink;
  }

  nlohmann::ordered_json fj;
  bool accepted = false;
  int rounds = 0;
  if (problem_available(ctx)) {
    const pddl::Domain& domain = ensure_domain(ctx);
    const builder::TypeHierarchy& types = ensure_hierarchy(ctx);
    std::string problem_desc = slurp(ctx.cfg.inputs.problem_desc);
    llm::PromptTemplate tmpl = llm::PromptTemplate::load(ctx.cfg.templates.task_feedback);
    builder::TaskTriple start = ensure_triple(ctx);

    auto result = builder::refine_until_accepted<builder::TaskTriple>(
        [&] { return start; },
        [&](const builder::TaskTriple& candidate, int round) {
          return builder::task_feedback(client, tmpl, problem_desc, types,
                                        domain.predicates, candidate, mode,
                                        "feedback/round" + std::to_string(round), io);
        },
        ctx.cfg.limits.max_rounds);

    ctx.triple = result.model;
    ctx.problem = builder::to_problem(domain.name, ctx.cfg.problem_name, result.model);
    spit(ctx, report, "problem.pddl", pddl::format_problem(*ctx.problem));
    accepted = result.accepted();
    rounds = result.rounds();
    fj["target"] = "task";
    fj["rounds_detail"] = nlohmann::ordered_json::array();
    for (const auto& r : result.transcript)
      fj["rounds_detail"].push_back(nlohmann::ordered_json::parse(r.to_json_string()));
  } else {
    const pddl::Domain& domain = ensure_domain(ctx);
    std::string domain_desc = slurp(ctx.cfg.inputs.domain_desc);
    llm::PromptTemplate tmpl = llm::PromptTemplate::load(ctx.cfg.templates.domain_feedback);

    auto result = builder::refine_until_accepted<pddl::Domain>(
        [&] { return domain; },
        [&](const pddl::Domain& candidate, int round) {
          return builder::domain_feedback(client, tmpl, domain_desc, candidate, mode,
                                          "feedback/round" + std::to_string(round), io);
        },
        ctx.cfg.limits.max_rounds);

    ctx.domain = result.model;
    spit(ctx, report, "domain.pddl", pddl::format_domain(*ctx.domain));
    accepted = result.accepted();
    rounds = result.rounds();
    fj["target"] = "domain";
    fj["rounds_detail"] = nlohmann::ordered_json::array();
    for (const auto& r : result.transcript)
      fj["rounds_detail"].push_back(nlohmann::ordered_json::parse(r.to_json_string()));
  }
  fj["status"] = accepted ? "accepted" : "rounds_exhausted";
  fj["rounds"] = rounds;
  if (ctx.opts.verbosity >= 2 && ctx.opts.log && !sink.str().empty())
    *ctx.opts.log << sink.str();
  spit(ctx, report, "feedback_report.json", fj.dump(2));

  report.detail = accepted ? "accepted after " + count_phrase(rounds, "round")
                           : "revision rounds exhausted (" + std::to_string(rounds) + ")";
  return accepted;
}

constexpr const char* kEnvironmentCodes[] = {
    "MissingPlaceholder", "UnknownPlaceholder", "AuthError",
    "TransportError",     "BudgetExceeded",     "MissingSection",
    "MissingChecklist",   "ConfigError",        "IoError",
};

bool is_environment_code(const std::string& code) {
  for (const char* c : kEnvironmentCodes)
    if (code == c) return true;
  return false;
}

}  // namespace

bool RunReport::ok() const {
  for (const auto& s : stages)
    if (s.status != StageReport::Status::Ok) return false;
  return true;
}

std::string RunReport::to_json_string() const {
  nlohmann::ordered_json j;
  j["name"] = name;
  j["ok"] = ok();
  j["stages"] = nlohmann::ordered_json::array();
  for (const auto& s : stages) {
    nlohmann::ordered_json e;
    e["stage"] = s.stage;
    switch (s.status) {
      case StageReport::Status::Ok: e["status"] = "ok"; break;
      case StageReport::Status::Failed: e["status"] = "failed"; break;
      case StageReport::Status::Skipped: e["status"] = "skipped"; break;
    }
    e["detail"] = s.detail;
    if (!s.error_code.empty()) e["error_code"] = s.error_code;
    e["artifacts"] = s.artifacts;
    if (!s.notes.empty()) e["notes"] = s.notes;
    j["stages"].push_back(std::move(e));
  }
  return j.dump(2);
}

RunReport run_pipeline(const PipelineConfig& config, const RunOptions& options) {
  config.validate();

  RunContext ctx{config, options};
  ctx.out = options.out_override.empty() ? config.out_dir : options.out_override;
  ctx.backend = options.backend_override.empty() ? config.backend : options.backend_override;
  if (ctx.backend != "fixture" && ctx.backend != "live")
    throw Error(Errc::ConfigError, "backend must be 'fixture' or 'live', got '" +
                                       ctx.backend + "'");
  ctx.seed = options.seed_override.value_or(config.seed);

  std::error_code ec;
  std::filesystem::create_directories(ctx.out, ec);
  if (ec)
    throw Error(Errc::IoError, "cannot create output directory " + ctx.out.string() +
                                   ": " + ec.message());

  RunReport report;
  report.name = config.name;
  report.out_dir = ctx.out.string();

  bool halted = false;
  for (Stage stage : config.stages) {
    StageReport sr;
    sr.stage = stage_name(stage);
    if (halted) {
      sr.status = StageReport::Status::Skipped;
      sr.detail = "earlier stage failed";
      report.stages.push_back(std::move(sr));
      continue;
    }
    if (options.verbosity >= 1 && options.log)
      *options.log << "[" << sr.stage << "] running\n";

    bool ok = false;
    try {
      switch (stage) {
        case Stage::BuildDomain: ok = stage_build_domain(ctx, sr); break;
        case Stage::BuildTask: ok = stage_build_task(ctx, sr); break;
        case Stage::Validate: ok = stage_validate(ctx, sr); break;
        case Stage::Plan: ok = stage_plan(ctx, sr); break;
        case Stage::Feedback: ok = stage_feedback(ctx, sr); break;
      }
    } catch (const Error& e) {
      sr.detail = e.what();
      sr.error_code = std::string(errc_name(e.code()));
    } catch (const std::exception& e) {
      sr.detail = e.what();
    }
    sr.status = ok ? StageReport::Status::Ok : StageReport::Status::Failed;
    if (options.verbosity >= 1 && options.log)
      *options.log << "[" << sr.stage << "] " << (ok ? "ok" : "failed")
                   << (sr.detail.empty() ? "" : ": " + sr.detail) << "\n";
    if (!ok && !options.keep_going) halted = true;
    report.stages.push_back(std::move(sr));
  }

  std::filesystem::path report_path = ctx.out / "run_report.json";
  std::ofstream out(report_path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::IoError, "cannot write " + report_path.string());
  out << report.to_json_string() << "\n";
  return report;
}

int suggested_exit_code(const RunReport& report) {
  int code = 0;
  for (const auto& s : report.stages) {
    if (s.status != StageReport::Status::Failed) continue;
    if (is_environment_code(s.error_code)) return 2;
    code = 1;
  }
  return code;
}

}  // namespace planforge::pipeline
