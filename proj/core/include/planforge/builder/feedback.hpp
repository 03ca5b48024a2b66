#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "planforge/builder/task_builder.hpp"
#include "planforge/diag/diagnostic.hpp"
#include "planforge/llm/client.hpp"
#include "planforge/llm/prompt.hpp"
#include "planforge/pddl/ast.hpp"

namespace planforge::builder {

enum class FeedbackMode { Llm, Human, Hybrid };

FeedbackMode feedback_mode_from(const std::string& name);  // ConfigError on junk
std::string feedback_mode_name(FeedbackMode mode);

enum class Verdict { Accept, Revise };

struct ChecklistAnswer {
  std::string question;
  bool change_needed = false;  // the last yes/no in the item
  std::string rationale;
};

/// Closed edit vocabulary; anything the parser cannot place here is
/// Unknown and gets skipped with a warning when applied.
enum class SuggestionKind {
  AddInit,
  RemoveInit,
  AddGoal,
  RemoveGoal,
  AddObject,
  RemoveObject,
  RetypeObject,
  AddPredicate,
  RemovePredicate,
  AddPrecondition,
  RemovePrecondition,
  AddEffect,
  RemoveEffect,
  RetypeParam,
  Unknown,
};

struct Suggestion {
  SuggestionKind kind = SuggestionKind::Unknown;
  std::string raw;          // the line as written
  std::string target;       // action/object/predicate name, kind-dependent
  pddl::Literal literal;    // init/goal/precondition/effect payload
  pddl::TypedName typed;    // object or parameter typing payload
  pddl::Predicate predicate;

  std::string describe() const;
};

/// Parse one suggestion line, e.g. "remove-init (clear red_block)" or
/// "add-effect putdown (arm-empty)". Unknown on no match.
Suggestion parse_suggestion(const std::string& line);

struct SuggestionDecision {
  enum class Outcome { Applied, Rejected, Skipped, Edited };
  Suggestion suggestion;
  Outcome outcome = Outcome::Skipped;
  std::string note;
};

struct FeedbackReport {
  FeedbackMode mode = FeedbackMode::Llm;
  std::vector<ChecklistAnswer> answers;
  std::vector<Suggestion> suggestions;
  std::vector<SuggestionDecision> decisions;
  Verdict verdict = Verdict::Accept;
  std::vector<diag::Diagnostic> revalidation;
  std::string completion;  // raw text, for the audit trail

  int applied_count() const;
  bool accepted() const { return verdict == Verdict::Accept; }
  std::string to_json_string() const;
};

/// Split a feedback completion into checklist answers (numbered items,
/// the final yes/no token decides) and suggestion lines from the
/// "### Suggestions" section, if any. MissingChecklist when no numbered
/// item is found.
std::pair<std::vector<ChecklistAnswer>, std::vector<Suggestion>> parse_feedback(
    const std::string& completion);

/// Streams for the interactive modes. Human mode answers y/n/e per
/// suggestion ("e" reads a replacement suggestion line); hybrid answers
/// y/n. Tests script this with string streams, the CLI wires an answers
/// file or stdin.
struct ReviewIo {
  std::istream* in = nullptr;
  std::ostream* out = nullptr;
};

/// One feedback round over a task triple. The checklist lives in the
/// template; the candidate is appended to the rendered prompt. Verdict
/// accept means nothing changed.
std::pair<TaskTriple, FeedbackReport> task_feedback(
    llm::LLMClient& client, const llm::PromptTemplate& tmpl,
    const std::string& problem_desc, const TypeHierarchy& types,
    const std::vector<pddl::Predicate>& predicates, const TaskTriple& candidate,
    FeedbackMode mode, const std::string& key, ReviewIo io = {});

/// One feedback round over a domain.
std::pair<pddl::Domain, FeedbackReport> domain_feedback(
    llm::LLMClient& client, const llm::PromptTemplate& tmpl,
    const std::string& domain_desc, const pddl::Domain& candidate, FeedbackMode mode,
    const std::string& key, ReviewIo io = {});

enum class RefineStatus { Accepted, RoundsExhausted };

template <class Model>
struct RefineResult {
  Model model;
  RefineStatus status = RefineStatus::RoundsExhausted;
  std::vector<FeedbackReport> transcript;

  bool accepted() const { return status == RefineStatus::Accepted; }
  int rounds() const { return static_cast<int>(transcript.size()); }
};

/// Generate-test-critique: build once, then run feedback rounds until one
/// accepts or max_rounds is spent. The exhausted case is a normal return
/// carrying the last candidate and the full transcript.
template <class Model, class BuildFn, class FeedbackFn>
RefineResult<Model> refine_until_accepted(BuildFn&& build, FeedbackFn&& feedback,
                                          int max_rounds) {
  RefineResult<Model> result{build(), RefineStatus::RoundsExhausted, {}};
  for (int round = 1; round <= max_rounds; ++round) {
    std::pair<Model, FeedbackReport> next = feedback(result.model, round);
    result.model = std::move(next.first);
    result.transcript.push_back(std::move(next.second));
    if (result.transcript.back().verdict == Verdict::Accept) {
      result.status = RefineStatus::Accepted;
      break;
    }
  }
  return result;
}

}  // namespace planforge::builder
