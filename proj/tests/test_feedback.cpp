#include <algorithm>
#include <nlohmann/json.hpp>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "planforge/builder/feedback.hpp"
#include "planforge/error.hpp"
#include "planforge/pddl/parser.hpp"

using namespace planforge;
using namespace planforge::builder;
using namespace planforge::llm;

namespace {

pddl::Atom atom(const std::string& pred, std::vector<std::string> args) {
    return pddl::Atom{pred, std::move(args)};
}

TypeHierarchy bw_types() {
    return TypeHierarchy::load(testutil::fixture("nl/blocksworld/hierarchy_requirements.json"));
}

std::vector<pddl::Predicate> bw_vocab() {
    return pddl::parse_domain(testutil::slurp_fixture("pddl/blocksworld_usage.pddl")).predicates;
}

// the four-block task with the wrong (clear red_block) mark included
TaskTriple bw_candidate() {
    TaskTriple t;
    for (const char* n : {"blue_block", "red_block", "yellow_block", "green_block"})
        t.objects.push_back(pddl::TypedName{n, "object"});
    t.init = {atom("on_top", {"blue_block", "red_block"}),
              atom("on_top", {"red_block", "yellow_block"}),
              atom("on_table", {"yellow_block"}),
              atom("on_table", {"green_block"}),
              atom("clear", {"blue_block"}),
              atom("clear", {"red_block"}),
              atom("clear", {"yellow_block"}),
              atom("clear", {"green_block"})};
    t.goal = {pddl::Literal{atom("on_top", {"red_block", "green_block"}), true}};
    return t;
}

PromptTemplate task_tmpl() {
    return PromptTemplate::load(testutil::fixture("templates/task_feedback.txt"));
}

}  // namespace

TEST_CASE("feedback modes parse by name") {
    CHECK(feedback_mode_from("llm") == FeedbackMode::Llm);
    CHECK(feedback_mode_from(" HYBRID ") == FeedbackMode::Hybrid);
    CHECK(feedback_mode_from("human") == FeedbackMode::Human);
    CHECK(feedback_mode_name(FeedbackMode::Hybrid) == "hybrid");
    CHECK_THROWS_AS((void)feedback_mode_from("oracle"), Error);
}

TEST_CASE("suggestion lines parse into the closed edit vocabulary") {
    Suggestion s = parse_suggestion("add-init (clear a)");
    CHECK(s.kind == SuggestionKind::AddInit);
    CHECK(s.literal.atom.to_string() == "(clear a)");
    CHECK(s.describe() == "add-init (clear a)");

    CHECK(parse_suggestion("remove-init (clear a)").kind == SuggestionKind::RemoveInit);
    Suggestion neg = parse_suggestion("add-goal (not (on a b))");
    CHECK(neg.kind == SuggestionKind::AddGoal);
    CHECK_FALSE(neg.literal.positive);
    CHECK(parse_suggestion("remove-goal (on a b)").kind == SuggestionKind::RemoveGoal);

    Suggestion obj = parse_suggestion("ADD-OBJECT Box1 - block");
    CHECK(obj.kind == SuggestionKind::AddObject);
    CHECK(obj.typed == pddl::TypedName{"box1", "block"});
    CHECK(obj.target == "box1");
    CHECK(parse_suggestion("retype-object box1 - gadget").kind == SuggestionKind::RetypeObject);
    CHECK(parse_suggestion("remove-object box1").kind == SuggestionKind::RemoveObject);

    Suggestion pred = parse_suggestion("add-predicate (shiny ?x - block): it gleams");
    CHECK(pred.kind == SuggestionKind::AddPredicate);
    CHECK(pred.predicate.name == "shiny");
    CHECK(parse_suggestion("remove-predicate shiny").kind == SuggestionKind::RemovePredicate);

    Suggestion pre = parse_suggestion("add-precondition pickup (clear ?x)");
    CHECK(pre.kind == SuggestionKind::AddPrecondition);
    CHECK(pre.target == "pickup");
    CHECK(pre.literal.atom.to_string() == "(clear ?x)");
    CHECK(parse_suggestion("remove-precondition pickup (clear ?x)").kind ==
          SuggestionKind::RemovePrecondition);
    CHECK(parse_suggestion("add-effect putdown (arm-empty)").kind == SuggestionKind::AddEffect);
    CHECK(parse_suggestion("remove-effect putdown (arm-empty)").kind ==
          SuggestionKind::RemoveEffect);

    Suggestion rp = parse_suggestion("retype-param pickup ?x - block");
    CHECK(rp.kind == SuggestionKind::RetypeParam);
    CHECK(rp.target == "pickup");
    CHECK(rp.typed == pddl::TypedName{"?x", "block"});

    for (const char* junk : {"polish the model", "add-init", "add-init clear a",
                             "remove-object ?x", "add-precondition (clear ?x)",
                             "add-init (clear a) (clear b)"}) {
        Suggestion u = parse_suggestion(junk);
        CHECK_MESSAGE(u.kind == SuggestionKind::Unknown, "expected Unknown for: ", junk);
        CHECK(u.describe() == "unknown: " + std::string(junk));
    }
}

TEST_CASE("checklists parse with the final yes/no deciding each item") {
    std::string completion = testutil::slurp_fixture("completions/blocksworld/feedback/round1.txt");
    auto [answers, suggestions] = parse_feedback(completion);
    REQUIRE(answers.size() == 8);
    CHECK(answers[0].question == "Are any necessary objects missing?");
    CHECK(answers[4].question ==
          "Are any needed or expected predicates missing from the initial state?");
    for (std::size_t i = 0; i < answers.size(); ++i)
        CHECK(answers[i].change_needed == (i == 4));
    // the wording "should not be clear" must not flip the item: only the
    // last standalone yes/no counts
    CHECK(answers[4].rationale.find("should not be clear") != std::string::npos);

    REQUIRE(suggestions.size() == 1);
    CHECK(suggestions[0].kind == SuggestionKind::RemoveInit);
    CHECK(suggestions[0].literal.atom == atom("clear", {"red_block"}));
}

TEST_CASE("feedback without numbered items is rejected") {
    try {
        parse_feedback("Everything looks fine to me.\n");
        FAIL("expected MissingChecklist");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::MissingChecklist);
    }
    // items without a suggestions section parse with none
    auto [answers, suggestions] = parse_feedback("1. Anything to fix? Nothing at all. No.\n");
    CHECK(answers.size() == 1);
    CHECK_FALSE(answers[0].change_needed);
    CHECK(suggestions.empty());
}

TEST_CASE("llm feedback applies the remove-init suggestion") {
    LLMClient client = LLMClient::fixture(testutil::fixture("completions/blocksworld"));
    auto [triple, report] =
        task_feedback(client, task_tmpl(), "four blocks", bw_types(), bw_vocab(), bw_candidate(),
                      FeedbackMode::Llm, "feedback/round1");

    CHECK(report.verdict == Verdict::Revise);
    CHECK(report.applied_count() == 1);
    REQUIRE(report.decisions.size() == 1);
    CHECK(report.decisions[0].outcome == SuggestionDecision::Outcome::Applied);
    CHECK(report.revalidation.empty());

    TaskTriple expected = bw_candidate();
    expected.init.erase(expected.init.begin() + 5);  // (clear red_block)
    CHECK(triple == expected);
}

TEST_CASE("hybrid feedback that rejects everything reads as accept") {
    LLMClient client = LLMClient::fixture(testutil::fixture("completions/blocksworld"));
    std::istringstream in("n\n");
    std::ostringstream out;
    auto [triple, report] =
        task_feedback(client, task_tmpl(), "four blocks", bw_types(), bw_vocab(), bw_candidate(),
                      FeedbackMode::Hybrid, "feedback/round1", ReviewIo{&in, &out});

    CHECK(triple == bw_candidate());  // untouched
    CHECK(report.verdict == Verdict::Accept);
    CHECK(report.applied_count() == 0);
    REQUIRE(report.decisions.size() == 1);
    CHECK(report.decisions[0].outcome == SuggestionDecision::Outcome::Rejected);
    CHECK(out.str().find("remove-init (clear red_block)") != std::string::npos);
    CHECK(out.str().find("apply? [y/n] ") != std::string::npos);
    // the yes answer was normalized to match the unchanged model
    CHECK_FALSE(report.answers[4].change_needed);
    CHECK(report.answers[4].rationale.find("[reviewer overruled the proposed change]") !=
          std::string::npos);
}

TEST_CASE("hybrid approval applies the edit and keeps the revise verdict") {
    LLMClient client = LLMClient::fixture(testutil::fixture("completions/blocksworld"));
    std::istringstream in("y\n");
    std::ostringstream out;
    auto [triple, report] =
        task_feedback(client, task_tmpl(), "four blocks", bw_types(), bw_vocab(), bw_candidate(),
                      FeedbackMode::Hybrid, "feedback/round1", ReviewIo{&in, &out});
    CHECK(report.verdict == Verdict::Revise);
    CHECK(triple.init.size() == 7);
    CHECK(report.answers[4].change_needed);  // honest yes, a change landed
}

TEST_CASE("human mode can replace a suggestion before applying") {
    LLMClient client = LLMClient::fixture(testutil::fixture("completions/blocksworld"));
    std::istringstream in("e\nremove-init (clear yellow_block)\n");
    std::ostringstream out;
    auto [triple, report] =
        task_feedback(client, task_tmpl(), "four blocks", bw_types(), bw_vocab(), bw_candidate(),
                      FeedbackMode::Human, "feedback/round1", ReviewIo{&in, &out});
    CHECK(out.str().find("apply? [y/n/e] ") != std::string::npos);
    REQUIRE(report.decisions.size() == 1);
    CHECK(report.decisions[0].outcome == SuggestionDecision::Outcome::Edited);
    CHECK(report.decisions[0].note == "replaced with: remove-init (clear yellow_block)");
    CHECK(report.applied_count() == 1);
    CHECK(report.verdict == Verdict::Revise);
    // yellow lost its mark, red kept the wrong one
    CHECK(std::find(triple.init.begin(), triple.init.end(), atom("clear", {"yellow_block"})) ==
          triple.init.end());
    CHECK(std::find(triple.init.begin(), triple.init.end(), atom("clear", {"red_block"})) !=
          triple.init.end());

    std::istringstream in2("e\ntotal nonsense\n");
    auto [triple2, report2] =
        task_feedback(client, task_tmpl(), "four blocks", bw_types(), bw_vocab(), bw_candidate(),
                      FeedbackMode::Human, "feedback/round1", ReviewIo{&in2, &out});
    CHECK(report2.decisions[0].outcome == SuggestionDecision::Outcome::Skipped);
    CHECK(report2.decisions[0].note == "unparseable replacement: total nonsense");
    CHECK(triple2 == bw_candidate());
}

TEST_CASE("unappliable and overlapping suggestions are skipped with reasons") {
    auto dir = testutil::scratch_dir("feedback_overlap");
    testutil::write_file(dir / "round.txt",
                         "1. Anything wrong? The init is too generous. Yes.\n\n"
                         "### Suggestions\n```\n"
                         "- remove-init (clear a)\n"
                         "- add-init (clear a)\n"
                         "- remove-init (holding a)\n"
                         "- add-goal (on a b)\n"
                         "- remove-goal (on a b)\n"
                         "- add-init (not (on a b))\n"
                         "- fix everything\n"
                         "```\n");
    LLMClient client = LLMClient::fixture(dir);
    TaskTriple candidate;
    candidate.objects = {pddl::TypedName{"a", "object"}, pddl::TypedName{"b", "object"}};
    candidate.init = {atom("clear", {"a"})};
    candidate.goal = {pddl::Literal{atom("on", {"a", "b"}), true}};
    std::vector<pddl::Predicate> vocab = {
        pddl::parse_predicate_signature("(clear ?x)"),
        pddl::parse_predicate_signature("(on ?x ?y)"),
        pddl::parse_predicate_signature("(holding ?x)")};

    auto [triple, report] =
        task_feedback(client, PromptTemplate::from_text("{problem_desc}"), "d", TypeHierarchy{},
                      vocab, candidate, FeedbackMode::Llm, "round");

    REQUIRE(report.decisions.size() == 7);
    using Outcome = SuggestionDecision::Outcome;
    CHECK(report.decisions[0].outcome == Outcome::Applied);
    CHECK(report.decisions[1].outcome == Outcome::Skipped);
    CHECK(report.decisions[1].note == "overlaps an earlier applied edit");
    CHECK(report.decisions[2].outcome == Outcome::Skipped);
    CHECK(report.decisions[2].note == "not in the initial state");
    CHECK(report.decisions[3].outcome == Outcome::Skipped);
    CHECK(report.decisions[3].note == "already in the goal");
    CHECK(report.decisions[4].outcome == Outcome::Skipped);
    CHECK(report.decisions[4].note == "would leave the goal empty");
    CHECK(report.decisions[5].outcome == Outcome::Skipped);
    CHECK(report.decisions[5].note == "init atoms are positive (closed world)");
    CHECK(report.decisions[6].outcome == Outcome::Skipped);
    CHECK(report.decisions[6].note == "unparseable suggestion");

    CHECK(triple.init.empty());
    CHECK(triple.goal == candidate.goal);
    CHECK(report.applied_count() == 1);
    CHECK(report.verdict == Verdict::Revise);
}

TEST_CASE("domain feedback edits actions and predicates") {
    auto dir = testutil::scratch_dir("feedback_domain");
    testutil::write_file(dir / "round.txt",
                         "1. Is anything off? The putdown action frees the arm twice over. Yes.\n\n"
                         "### Suggestions\n```\n"
                         "- add-precondition pickup (on-table ?ob)\n"
                         "- remove-effect putdown (arm-empty)\n"
                         "- add-effect putdown (arm-empty)\n"
                         "- retype-param stack ?ob - object\n"
                         "- add-predicate (shiny ?x): it sparkles\n"
                         "- remove-predicate shiny\n"
                         "- remove-precondition teleport (clear ?x)\n"
                         "```\n");
    LLMClient client = LLMClient::fixture(dir);
    pddl::Domain candidate = pddl::parse_domain(testutil::slurp_fixture("pddl/blocksworld.pddl"));

    auto [domain, report] =
        domain_feedback(client, PromptTemplate::from_text("{domain_desc}"), "blocks", candidate,
                        FeedbackMode::Llm, "round");

    using Outcome = SuggestionDecision::Outcome;
    REQUIRE(report.decisions.size() == 7);
    CHECK(report.decisions[0].outcome == Outcome::Skipped);
    CHECK(report.decisions[0].note == "precondition already present");
    CHECK(report.decisions[1].outcome == Outcome::Applied);
    CHECK(report.decisions[2].outcome == Outcome::Skipped);
    CHECK(report.decisions[2].note == "overlaps an earlier applied edit");
    CHECK(report.decisions[3].outcome == Outcome::Applied);
    CHECK(report.decisions[4].outcome == Outcome::Applied);
    CHECK(report.decisions[5].outcome == Outcome::Skipped);  // overlap with the add
    CHECK(report.decisions[6].outcome == Outcome::Skipped);
    CHECK(report.decisions[6].note == "action teleport does not exist");

    const pddl::Action* putdown = domain.find_action("putdown");
    REQUIRE(putdown);
    for (const auto& lit : putdown->effects) CHECK(lit.atom.predicate != "arm-empty");
    CHECK(domain.find_action("stack")->params[0] == pddl::TypedName{"?ob", "object"});
    CHECK(domain.find_predicate("shiny"));
    // revalidation notices the now-unused predicate
    REQUIRE(report.revalidation.size() == 1);
    CHECK(report.revalidation[0].code == diag::Code::UnusedPredicate);
}

TEST_CASE("feedback reports serialize to json") {
    LLMClient client = LLMClient::fixture(testutil::fixture("completions/blocksworld"));
    auto [triple, report] =
        task_feedback(client, task_tmpl(), "four blocks", bw_types(), bw_vocab(), bw_candidate(),
                      FeedbackMode::Llm, "feedback/round1");
    nlohmann::json j = nlohmann::json::parse(report.to_json_string());
    CHECK(j["mode"] == "llm");
    CHECK(j["verdict"] == "revise");
    REQUIRE(j["answers"].size() == 8);
    CHECK(j["answers"][4]["answer"] == "yes");
    CHECK(j["answers"][0]["answer"] == "no");
    REQUIRE(j["suggestions"].size() == 1);
    CHECK(j["suggestions"][0] == "remove-init (clear red_block)");
    REQUIRE(j["decisions"].size() == 1);
    CHECK(j["decisions"][0]["outcome"] == "applied");
    CHECK(j["revalidation"].is_array());
}

TEST_CASE("refinement stops at the first accepted round") {
    LLMClient client = LLMClient::fixture(testutil::fixture("completions/refinery/accept2"));
    TaskTriple start;
    start.objects = {pddl::TypedName{"blue_block", "object"},
                     pddl::TypedName{"red_block", "object"},
                     pddl::TypedName{"green_block", "object"}};
    start.init = {atom("on_table", {"green_block"})};
    start.goal = {pddl::Literal{atom("on_top", {"red_block", "green_block"}), true}};

    auto fb = [&](const TaskTriple& model, int round) {
        return task_feedback(client, task_tmpl(), "blocks", bw_types(), bw_vocab(), model,
                             FeedbackMode::Llm, "feedback/round" + std::to_string(round));
    };
    RefineResult<TaskTriple> r = refine_until_accepted<TaskTriple>([&] { return start; }, fb, 5);

    CHECK(r.accepted());
    CHECK(r.status == RefineStatus::Accepted);
    CHECK(r.rounds() == 2);
    REQUIRE(r.transcript.size() == 2);
    CHECK(r.transcript[0].verdict == Verdict::Revise);
    CHECK(r.transcript[1].verdict == Verdict::Accept);
    REQUIRE(r.model.goal.size() == 2);
    CHECK(r.model.goal[1] == pddl::Literal{atom("clear", {"blue_block"}), true});
}

TEST_CASE("refinement that never settles returns the last candidate") {
    LLMClient client = LLMClient::fixture(testutil::fixture("completions/refinery/never"));
    TaskTriple start;
    start.objects = {pddl::TypedName{"green_block", "object"}};
    start.init = {atom("on_table", {"green_block"})};
    start.goal = {pddl::Literal{atom("clear", {"green_block"}), true}};

    auto fb = [&](const TaskTriple& model, int round) {
        return task_feedback(client, task_tmpl(), "blocks", bw_types(), bw_vocab(), model,
                             FeedbackMode::Llm, "feedback/round" + std::to_string(round));
    };
    RefineResult<TaskTriple> r = refine_until_accepted<TaskTriple>([&] { return start; }, fb, 3);

    CHECK_FALSE(r.accepted());
    CHECK(r.status == RefineStatus::RoundsExhausted);
    CHECK(r.rounds() == 3);
    for (const auto& round : r.transcript) CHECK(round.verdict == Verdict::Revise);
    // added, removed, added again: the mark survives the last round
    CHECK(std::find(r.model.init.begin(), r.model.init.end(), atom("clear", {"green_block"})) !=
          r.model.init.end());
}
