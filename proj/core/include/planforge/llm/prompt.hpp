#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "planforge/pddl/ast.hpp"

namespace planforge::llm {

/// Render a predicate list the way prompts expect it: a numbered line per
/// predicate ("\n1. <raw>") or the fixed sentinel line when empty, so the
/// model always sees an explicit vocabulary state.
std::string format_predicate_list(const std::vector<pddl::Predicate>& predicates);

extern const char* const kEmptyPredicateSentinel;  // "\nNo predicate has been defined yet"

struct PromptTemplate {
  std::string body;
  std::vector<std::string> required;  // placeholders that must be bound

  /// The closed placeholder vocabulary: {domain_desc}, {types},
  /// {predicates}, {action_name}, {action_desc}, {action_list},
  /// {problem_desc}.
  static const std::set<std::string>& known_placeholders();

  static PromptTemplate from_text(std::string body, std::vector<std::string> required = {});
  static PromptTemplate load(const std::filesystem::path& file,
                             std::vector<std::string> required = {});
};

struct Bindings {
  std::map<std::string, std::string> values;

  Bindings& text(const std::string& name, std::string value);
  Bindings& predicates(const std::string& name, const std::vector<pddl::Predicate>& preds);
};

/// Substitute placeholders. MissingPlaceholder if a required placeholder
/// has no binding, UnknownPlaceholder if the body mentions a placeholder
/// outside the known vocabulary. Brace groups that are not well-formed
/// placeholder names pass through untouched.
std::string render_prompt(const PromptTemplate& tmpl, const Bindings& bindings);

}  // namespace planforge::llm
