#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>

#include "doctest.h"
#include "helpers.hpp"
#include "planforge/builder/task_builder.hpp"
#include "planforge/error.hpp"
#include "planforge/pddl/formatter.hpp"
#include "planforge/pddl/parser.hpp"
#include "planforge/pipeline/config.hpp"
#include "planforge/pipeline/runner.hpp"

using namespace planforge;
using namespace planforge::pipeline;

namespace {

PipelineConfig from_text(const std::string& text) {
    return PipelineConfig::from_yaml_text(text, "/tmp/base");
}

void expect_config_error(const std::string& text, const std::string& needle) {
    try {
        from_text(text);
        FAIL("expected ConfigError for: ", needle);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::ConfigError);
        CHECK_MESSAGE(std::string(e.what()).find(needle) != std::string::npos,
                      "message was: ", e.what());
    }
}

const StageReport* find_stage(const RunReport& report, const std::string& name) {
    for (const auto& s : report.stages)
        if (s.stage == name) return &s;
    return nullptr;
}

}  // namespace

TEST_CASE("stage names round trip and junk is rejected") {
    for (const char* n : {"build-domain", "build-task", "validate", "plan", "feedback"})
        CHECK(stage_name(stage_from(n)) == n);
    CHECK_THROWS_AS((void)stage_from("deploy"), Error);
}

TEST_CASE("config defaults fill in around a minimal file") {
    PipelineConfig cfg = from_text(
        "name: demo\n"
        "stages: [validate]\n"
        "inputs: {domain_file: d.pddl}\n");
    CHECK(cfg.name == "demo");
    CHECK(cfg.domain_name == "demo");
    CHECK(cfg.problem_name == "demo-task");
    CHECK(cfg.backend == "fixture");
    CHECK(cfg.solver == "bfs");
    CHECK(cfg.feedback_mode == "llm");
    CHECK(cfg.seed == 0);
    CHECK(cfg.limits.max_iter == 2);
    CHECK(cfg.limits.max_rounds == 3);
    CHECK(cfg.limits.token_budget == 0);
    CHECK(cfg.limits.solver_max_expansions == 1'000'000);
    CHECK(cfg.limits.solver_timeout_ms == 0);
    CHECK(cfg.llm.api_key_env == "LLM_API_KEY");
    // relative paths resolve against the yaml directory
    CHECK(cfg.out_dir == std::filesystem::path("/tmp/base/out"));
    CHECK(cfg.inputs.domain_file == std::filesystem::path("/tmp/base/d.pddl"));
    CHECK(cfg.has_stage(Stage::Validate));
    CHECK_FALSE(cfg.has_stage(Stage::Plan));

    PipelineConfig abs = from_text(
        "name: demo\n"
        "stages: [validate]\n"
        "inputs: {domain_file: /abs/d.pddl}\n");
    CHECK(abs.inputs.domain_file == std::filesystem::path("/abs/d.pddl"));
}

TEST_CASE("config rejects unknown keys, bad shapes, and bad values") {
    expect_config_error("name: x\nstages: [validate]\nextra: 1\n"
                        "inputs: {domain_file: d}\n",
                        "unknown key 'extra' in config");
    expect_config_error("name: x\nstages: [validate]\nlimits: {bogus: 1}\n"
                        "inputs: {domain_file: d}\n",
                        "unknown key 'bogus' in limits");
    expect_config_error("name: x\nstages: [validate]\ninputs: {domain_file: d, typo: z}\n",
                        "unknown key 'typo' in inputs");
    expect_config_error("- a\n- b\n", "config root must be a mapping");
    expect_config_error("stages: [validate]\ninputs: {domain_file: d}\n", "'name' is required");
    expect_config_error("name: [1, 2]\nstages: [validate]\ninputs: {domain_file: d}\n",
                        "'name' must be a scalar");
    expect_config_error("name: x\nstages: nope\ninputs: {domain_file: d}\n",
                        "'stages' must be a sequence");
    expect_config_error("name: x\nstages: [deploy]\n", "unknown stage 'deploy'");
    expect_config_error("name: x\nstages: []\ninputs: {domain_file: d}\n",
                        "'stages' must list at least one stage");
    expect_config_error("name: x\nbackend: cloud\nstages: [validate]\n"
                        "inputs: {domain_file: d}\n",
                        "backend must be 'fixture' or 'live'");
    expect_config_error("name: x\nsolver: dfs\nstages: [validate]\ninputs: {domain_file: d}\n",
                        "solver must be 'bfs' or 'greedy'");
    expect_config_error("name: x\nfeedback_mode: oracle\nstages: [validate]\n"
                        "inputs: {domain_file: d}\n",
                        "feedback_mode must be llm, human, or hybrid");
    expect_config_error("name: x\nstages: [validate]\ninputs: {domain_file: d}\n"
                        "limits: {max_iter: 0}\n",
                        "limits.max_iter must be >= 1");
    expect_config_error("name: x\nstages: [validate]\ninputs: {domain_file: d}\n"
                        "limits: {max_iter: many}\n",
                        "'max_iter' must be an integer");
    expect_config_error("name: x\nstages: [validate]\ninputs: {domain_file: d}\n"
                        "limits: {token_budget: -1}\n",
                        "limits.token_budget must be >= 0");
}

TEST_CASE("config enforces the canonical stage order") {
    expect_config_error("name: x\nstages: [plan, validate]\n"
                        "inputs: {domain_file: d, problem_file: p}\n",
                        "stages out of order: validate cannot follow plan");
    expect_config_error("name: x\nstages: [validate, validate]\ninputs: {domain_file: d}\n",
                        "stage validate listed twice");
    // any increasing subsequence is fine
    PipelineConfig cfg = from_text(
        "name: x\nstages: [validate, feedback]\nfixture_dir: store\n"
        "inputs: {domain_file: d, domain_desc: desc.txt}\n"
        "templates: {domain_feedback: fb.txt}\n");
    CHECK(cfg.stages.size() == 2);
}

TEST_CASE("config demands the inputs each stage needs") {
    expect_config_error("name: x\nstages: [build-domain]\nfixture_dir: s\n"
                        "inputs: {action_model: m, hierarchy: h}\n"
                        "templates: {action: a}\n",
                        "build-domain needs inputs.domain_desc");
    expect_config_error("name: x\nstages: [build-domain]\nfixture_dir: s\n"
                        "inputs: {domain_desc: d, hierarchy: h}\n"
                        "templates: {action: a}\n",
                        "build-domain needs inputs.action_model");
    expect_config_error("name: x\nstages: [build-domain]\nfixture_dir: s\n"
                        "inputs: {domain_desc: d, action_model: m, hierarchy: h}\n",
                        "build-domain needs templates.action");
    expect_config_error("name: x\nstages: [build-task]\nfixture_dir: s\n"
                        "inputs: {problem_desc: p, hierarchy: h}\n"
                        "templates: {task: t}\n",
                        "build-task needs a domain source");
    expect_config_error("name: x\nstages: [validate]\n", "validate needs a domain source");
    expect_config_error("name: x\nstages: [plan]\ninputs: {domain_file: d}\n",
                        "plan needs both a domain source and a problem source");
    expect_config_error("name: x\nstages: [feedback]\nfixture_dir: s\n",
                        "feedback needs a domain or problem source");
    expect_config_error("name: x\nstages: [feedback]\nfixture_dir: s\n"
                        "inputs: {domain_file: d, domain_desc: desc}\n",
                        "domain feedback needs templates.domain_feedback");
    expect_config_error("name: x\nstages: [feedback]\nfixture_dir: s\nfeedback_mode: hybrid\n"
                        "inputs: {domain_file: d, domain_desc: desc}\n"
                        "templates: {domain_feedback: fb}\n",
                        "hybrid feedback in a pipeline needs 'answers_file'");
    expect_config_error("name: x\nstages: [build-domain]\n"
                        "inputs: {domain_desc: d, action_model: m, hierarchy: h}\n"
                        "templates: {action: a}\n",
                        "fixture backend needs 'fixture_dir'");
}

TEST_CASE("the llm section interpolates ${VAR} from the environment") {
    setenv("PF_TEST_MODEL", "demo-model", 1);
    PipelineConfig cfg = from_text(
        "name: x\nstages: [validate]\ninputs: {domain_file: d}\n"
        "llm: {model: '${PF_TEST_MODEL}', api_key_env: MY_KEY}\n");
    CHECK(cfg.llm.model == "demo-model");
    // only the variable NAME is stored, never a key value
    CHECK(cfg.llm.api_key_env == "MY_KEY");
    unsetenv("PF_TEST_MODEL");

    expect_config_error("name: x\nstages: [validate]\ninputs: {domain_file: d}\n"
                        "llm: {model: '${PF_TEST_MODEL}'}\n",
                        "environment variable PF_TEST_MODEL is not set");
    expect_config_error("name: x\nstages: [validate]\ninputs: {domain_file: d}\n"
                        "llm: {model: '${oops'}\n",
                        "unterminated ${");
    expect_config_error("name: x\nstages: [validate]\ninputs: {domain_file: d}\n"
                        "llm: {model: '${}'}\n",
                        "empty ${}");
    // outside the llm section the sequence stays literal
    PipelineConfig plain = from_text(
        "name: x\nstages: [validate]\ninputs: {domain_file: '${NOT_EXPANDED}.pddl'}\n");
    CHECK(plain.inputs.domain_file.string().find("${NOT_EXPANDED}") != std::string::npos);
}

TEST_CASE("config load reports yaml and io failures") {
    CHECK_THROWS_AS((void)PipelineConfig::load("/nonexistent/pipeline.yaml"), Error);
    expect_config_error("name: \"x\nstages", "YAML parse failure");
}

TEST_CASE("the full logistics pipeline runs from recorded completions") {
    auto out = testutil::scratch_dir("pipe_logistics_full");
    PipelineConfig cfg = PipelineConfig::load(testutil::fixture("configs/logistics_full.yaml"));
    RunOptions opts;
    opts.out_override = out;
    RunReport report = run_pipeline(cfg, opts);

    REQUIRE(report.stages.size() == 5);
    CHECK(report.ok());
    CHECK(suggested_exit_code(report) == 0);
    CHECK(report.out_dir == out.string());

    const StageReport* bd = find_stage(report, "build-domain");
    REQUIRE(bd);
    CHECK(bd->status == StageReport::Status::Ok);
    CHECK(bd->detail == "7 predicates, 6 actions, 2 sweeps");
    CHECK(bd->artifacts ==
          std::vector<std::string>{"domain.pddl", "predicates.json", "domain_diagnostics.json"});

    const StageReport* bt = find_stage(report, "build-task");
    REQUIRE(bt);
    CHECK(bt->detail == "8 objects, 7 init atoms, 1 goal literal");

    CHECK(find_stage(report, "validate")->detail == "0 errors, 0 warnings");
    CHECK(find_stage(report, "plan")->detail.find("plan of length 3") == 0);
    CHECK(find_stage(report, "feedback")->detail == "accepted after 1 round");

    // artifacts exist and parse
    for (const char* f : {"domain.pddl", "predicates.json", "domain_diagnostics.json",
                          "problem.pddl", "task_diagnostics.json", "diagnostics.json",
                          "plan.txt", "plan_report.json", "feedback_report.json",
                          "run_report.json", "ledger.jsonl"})
        CHECK_MESSAGE(std::filesystem::exists(out / f), "missing artifact ", f);

    // the produced model solves exactly like the reference pair
    pddl::Domain d = pddl::parse_domain(testutil::slurp(out / "domain.pddl"));
    pddl::Problem p = pddl::parse_problem(testutil::slurp(out / "problem.pddl"));
    CHECK(d.actions == pddl::parse_domain(testutil::slurp_fixture("pddl/logistics.pddl")).actions);
    CHECK(p.init == pddl::parse_problem(
                        testutil::slurp_fixture("pddl/logistics_problem.pddl")).init);

    nlohmann::json pj = nlohmann::json::parse(testutil::slurp(out / "plan_report.json"));
    CHECK(pj["status"] == "solved");
    CHECK(pj["length"] == 3);
    CHECK(pj["validation"]["status"] == "valid");

    nlohmann::json fj = nlohmann::json::parse(testutil::slurp(out / "feedback_report.json"));
    CHECK(fj["target"] == "task");
    CHECK(fj["status"] == "accepted");
    CHECK(fj["rounds"] == 1);
    CHECK(fj["rounds_detail"][0]["verdict"] == "accept");

    std::string rr = testutil::slurp(out / "run_report.json");
    CHECK(rr.back() == '\n');
    nlohmann::json j = nlohmann::json::parse(rr);
    CHECK(j["ok"] == true);
    CHECK(j["stages"].size() == 5);
    CHECK(j["stages"][0]["stage"] == "build-domain");
    CHECK(j["stages"][0]["status"] == "ok");
}

TEST_CASE("pipeline artifacts are byte stable run over run") {
    auto out1 = testutil::scratch_dir("pipe_repeat_1");
    auto out2 = testutil::scratch_dir("pipe_repeat_2");
    PipelineConfig cfg = PipelineConfig::load(testutil::fixture("configs/logistics_full.yaml"));
    RunOptions opts;
    opts.out_override = out1;
    run_pipeline(cfg, opts);
    opts.out_override = out2;
    run_pipeline(cfg, opts);
    for (const char* f : {"domain.pddl", "problem.pddl", "plan.txt", "plan_report.json",
                          "feedback_report.json", "diagnostics.json", "run_report.json"})
        CHECK_MESSAGE(testutil::slurp(out1 / f) == testutil::slurp(out2 / f),
                      "artifact differs between runs: ", f);
    // only the ledger may differ, and only in its timestamps
    std::string l1 = testutil::slurp(out1 / "ledger.jsonl");
    std::string l2 = testutil::slurp(out2 / "ledger.jsonl");
    auto strip_ts = [](const std::string& text) {
        std::string out;
        std::istringstream in(text);
        std::string line;
        while (std::getline(in, line)) {
            nlohmann::ordered_json j = nlohmann::ordered_json::parse(line);
            j.erase("ts");
            out += j.dump() + "\n";
        }
        return out;
    };
    CHECK(strip_ts(l1) == strip_ts(l2));
}

TEST_CASE("check-only configs run without any model calls") {
    auto out = testutil::scratch_dir("pipe_logistics_check");
    PipelineConfig cfg = PipelineConfig::load(testutil::fixture("configs/logistics_check.yaml"));
    RunOptions opts;
    opts.out_override = out;
    RunReport report = run_pipeline(cfg, opts);
    CHECK(report.ok());
    CHECK(find_stage(report, "validate")->status == StageReport::Status::Ok);
    CHECK(find_stage(report, "plan")->detail.find("plan of length 3") == 0);
    CHECK_FALSE(std::filesystem::exists(out / "ledger.jsonl"));  // no client, no ledger
}

TEST_CASE("a broken domain fails validate and skips the plan stage") {
    auto out = testutil::scratch_dir("pipe_broken");
    PipelineConfig cfg = PipelineConfig::load(testutil::fixture("configs/broken_check.yaml"));
    RunOptions opts;
    opts.out_override = out;
    RunReport report = run_pipeline(cfg, opts);

    CHECK_FALSE(report.ok());
    const StageReport* validate = find_stage(report, "validate");
    REQUIRE(validate);
    CHECK(validate->status == StageReport::Status::Failed);
    CHECK(validate->detail.find("predicate road is not declared") != std::string::npos);
    CHECK(validate->error_code.empty());  // quality failure, not an exception
    const StageReport* plan = find_stage(report, "plan");
    REQUIRE(plan);
    CHECK(plan->status == StageReport::Status::Skipped);
    CHECK(plan->detail == "earlier stage failed");
    CHECK(suggested_exit_code(report) == 1);

    nlohmann::json j = nlohmann::json::parse(testutil::slurp(out / "run_report.json"));
    CHECK(j["ok"] == false);
    CHECK(j["stages"][1]["status"] == "skipped");
}

TEST_CASE("keep_going runs later stages on surviving inputs") {
    auto out = testutil::scratch_dir("pipe_keep_going");
    PipelineConfig cfg = PipelineConfig::load(testutil::fixture("configs/broken_check.yaml"));
    RunOptions opts;
    opts.out_override = out;
    opts.keep_going = true;
    RunReport report = run_pipeline(cfg, opts);

    const StageReport* plan = find_stage(report, "plan");
    REQUIRE(plan);
    // the undeclared predicate can never hold, so driving is impossible
    CHECK(plan->status == StageReport::Status::Failed);
    CHECK(plan->detail == "no plan exists");
    CHECK(suggested_exit_code(report) == 1);
}

TEST_CASE("hybrid task feedback with a scripted reviewer leaves the task alone") {
    auto out = testutil::scratch_dir("pipe_blocksworld");
    PipelineConfig cfg = PipelineConfig::load(testutil::fixture("configs/blocksworld_task.yaml"));
    RunOptions opts;
    opts.out_override = out;
    RunReport report = run_pipeline(cfg, opts);

    REQUIRE(report.stages.size() == 3);
    CHECK(report.ok());
    CHECK(find_stage(report, "build-task")->detail == "4 objects, 7 init atoms, 1 goal literal");
    // the misplaced-goal relaxation warning is expected and non-fatal
    CHECK(find_stage(report, "validate")->detail == "0 errors, 1 warning");
    CHECK(find_stage(report, "feedback")->detail == "accepted after 1 round");

    nlohmann::json fj = nlohmann::json::parse(testutil::slurp(out / "feedback_report.json"));
    CHECK(fj["rounds_detail"][0]["mode"] == "hybrid");
    CHECK(fj["rounds_detail"][0]["decisions"][0]["outcome"] == "rejected");
    CHECK(fj["rounds_detail"][0]["answers"][4]["answer"] == "no");  // normalized

    // the reviewer rejected the only edit, so the final problem is the
    // built one, byte for byte
    pddl::Problem p = pddl::parse_problem(testutil::slurp(out / "problem.pddl"));
    CHECK(p.name == "blocksworld_problem");
    CHECK(p.domain_name == "blocksworld");
    CHECK(p.objects.size() == 4);
    CHECK(p.init.size() == 7);
    builder::TaskTriple triple{p.objects, p.init, p.goal};
    CHECK(testutil::slurp(out / "problem.pddl") ==
          pddl::format_problem(builder::to_problem("blocksworld", "blocksworld_problem", triple)));
}

TEST_CASE("environment failures map to exit code 2") {
    auto out = testutil::scratch_dir("pipe_env_fail");
    auto empty_store = testutil::scratch_dir("pipe_env_fail_store");
    PipelineConfig cfg = PipelineConfig::load(testutil::fixture("configs/logistics_full.yaml"));
    cfg.fixture_dir = empty_store;
    RunOptions opts;
    opts.out_override = out;
    RunReport report = run_pipeline(cfg, opts);

    const StageReport* bd = find_stage(report, "build-domain");
    REQUIRE(bd);
    CHECK(bd->status == StageReport::Status::Failed);
    CHECK(bd->error_code == "TransportError");
    CHECK(bd->detail.find("fixture not found") != std::string::npos);
    CHECK(suggested_exit_code(report) == 2);
    for (std::size_t i = 1; i < report.stages.size(); ++i)
        CHECK(report.stages[i].status == StageReport::Status::Skipped);
}

TEST_CASE("a missing answers file is an environment failure at run time") {
    auto out = testutil::scratch_dir("pipe_answers_missing");
    PipelineConfig cfg = PipelineConfig::load(testutil::fixture("configs/blocksworld_task.yaml"));
    cfg.answers_file = "/nonexistent/answers.txt";
    RunOptions opts;
    opts.out_override = out;
    RunReport report = run_pipeline(cfg, opts);
    const StageReport* fb = find_stage(report, "feedback");
    REQUIRE(fb);
    CHECK(fb->status == StageReport::Status::Failed);
    CHECK(fb->error_code == "IoError");
    CHECK(suggested_exit_code(report) == 2);
}

TEST_CASE("seed and backend overrides are applied and junk is rejected") {
    auto out = testutil::scratch_dir("pipe_overrides");
    PipelineConfig cfg = PipelineConfig::load(testutil::fixture("configs/logistics_check.yaml"));
    RunOptions opts;
    opts.out_override = out;
    opts.seed_override = 99;
    RunReport report = run_pipeline(cfg, opts);
    CHECK(report.ok());

    opts.backend_override = "cloud";
    CHECK_THROWS_AS((void)run_pipeline(cfg, opts), Error);
}
