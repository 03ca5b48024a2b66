#pragma once

#include <string>
#include <vector>

#include "planforge/builder/domain_builder.hpp"
#include "planforge/diag/diagnostic.hpp"
#include "planforge/llm/client.hpp"
#include "planforge/llm/prompt.hpp"
#include "planforge/pddl/ast.hpp"

namespace planforge::builder {

/// Objects, initial state, goal: the problem minus its wrapper.
struct TaskTriple {
  std::vector<pddl::TypedName> objects;
  std::vector<pddl::Atom> init;
  std::vector<pddl::Literal> goal;

  bool operator==(const TaskTriple&) const = default;
};

struct ExtractedTask {
  TaskTriple triple;
  std::string raw;  // full completion text
  std::vector<diag::Diagnostic> diagnostics;
  std::vector<std::string> warnings;
};

/// One LLM call extracting objects/init/goal from a problem description.
/// Completion contract: "### Objects" (one "name - type" per line),
/// "### Initial" (ground atoms), "### Goal" (a conjunction). The predicate
/// vocabulary must already be fixed; atoms that fall outside it are kept
/// but flagged, never silently dropped. EmptyGoal if the goal block has
/// no literal.
ExtractedTask extract_task(llm::LLMClient& client, const llm::PromptTemplate& tmpl,
                           const std::string& problem_desc, const TypeHierarchy& types,
                           const std::vector<pddl::Predicate>& predicates,
                           const std::string& key);

std::string format_objects(const std::vector<pddl::TypedName>& objects);
std::string format_initial(const std::vector<pddl::Atom>& init);
std::string format_goal(const std::vector<pddl::Literal>& goal);

pddl::Problem to_problem(const std::string& domain_name, const std::string& problem_name,
                         const TaskTriple& triple);

/// Render the complete problem text. The output reparses via
/// parse_problem and round-trips through format_problem byte-identically.
std::string generate_task(const std::string& domain_name, const std::string& problem_name,
                          const TaskTriple& triple);

}  // namespace planforge::builder
