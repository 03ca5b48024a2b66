#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "planforge/diag/diagnostic.hpp"
#include "planforge/llm/client.hpp"
#include "planforge/llm/prompt.hpp"
#include "planforge/pddl/ast.hpp"

namespace planforge::builder {

struct NLAction {
  std::string name;
  std::string desc;
};

/// Natural-language action model: ordered action name -> description.
struct NLActionModel {
  std::vector<NLAction> actions;

  static NLActionModel from_json_text(const std::string& text);
  static NLActionModel load(const std::filesystem::path& file);
};

/// Type forest plus requirement flags, as stored in
/// hierarchy_requirements.json. Parents default to "object".
struct TypeHierarchy {
  struct Node {
    std::string name;
    std::string parent = "object";
    std::string desc;
  };
  std::vector<Node> nodes;
  std::vector<std::string> requirements;

  static TypeHierarchy from_json_text(const std::string& text);
  static TypeHierarchy load(const std::filesystem::path& file);

  void validate() const;  // unique names, resolvable parents, acyclic
  std::string to_prompt_text() const;
  std::vector<pddl::TypedName> to_domain_types() const;
  bool has(const std::string& type_name) const;
};

/// Inputs shared by every extraction prompt.
struct ExtractContext {
  std::string domain_desc;
  TypeHierarchy types;
};

struct ExtractedPredicates {
  std::vector<pddl::Predicate> predicates;
  std::string raw_block;
  std::vector<std::string> warnings;  // skipped malformed lines
};

/// One LLM call proposing the predicate vocabulary for the whole domain.
/// Completion contract: a "### Predicates" section, one signature per
/// line. Malformed lines are skipped with a warning, order is preserved.
ExtractedPredicates extract_predicates(llm::LLMClient& client,
                                       const llm::PromptTemplate& tmpl,
                                       const ExtractContext& ctx,
                                       const NLActionModel& actions,
                                       const std::string& key);

struct ExtractedAction {
  pddl::Action action;
  std::vector<pddl::Predicate> new_predicates;
  std::string raw;  // full completion text
  std::vector<diag::Diagnostic> diagnostics;  // e.g. UnboundVariable
  std::vector<std::string> warnings;
};

/// One LLM call turning a described action into PDDL. Completion contract:
/// "### Parameters" / "### Preconditions" / "### Effects" /
/// "### New Predicates" sections; the last lists only predicates absent
/// from the current vocabulary ("No new predicates" otherwise). Unbound
/// variables become diagnostics, the action is still returned so a
/// feedback round can repair it.
ExtractedAction extract_action(llm::LLMClient& client, const llm::PromptTemplate& tmpl,
                               const ExtractContext& ctx, const NLAction& action,
                               const std::vector<pddl::Action>& prior_actions,
                               const std::vector<pddl::Predicate>& predicates,
                               const std::string& key);

struct DomainBuildResult {
  std::vector<pddl::Predicate> predicates;
  std::vector<pddl::Action> actions;
  std::vector<diag::Diagnostic> diagnostics;
  std::vector<std::string> warnings;
  int sweeps_run = 0;
};

/// Action-by-action construction: sweep the action model, let the
/// predicate pool grow as actions declare new predicates, prune unused
/// and duplicate declarations after each sweep, repeat max_iter times so
/// later actions can inform earlier ones. Fixture keys look like
/// "<prefix><action>/round<sweep>". Errors are rethrown with sweep and
/// action context.
DomainBuildResult build_domain_action_by_action(llm::LLMClient& client,
                                                const llm::PromptTemplate& tmpl,
                                                const ExtractContext& ctx,
                                                const NLActionModel& model,
                                                int max_iter = 2,
                                                const std::string& key_prefix = "");

struct AssembledDomain {
  pddl::Domain domain;
  std::vector<diag::Diagnostic> diagnostics;  // check_domain output
};

/// Put the pieces into a Domain value. Throws DuplicateName if two
/// predicates or two actions share a name; anything softer lands in the
/// attached diagnostics.
AssembledDomain assemble_domain(const std::string& name,
                                const std::vector<std::string>& requirements,
                                const TypeHierarchy& types,
                                std::vector<pddl::Predicate> predicates,
                                std::vector<pddl::Action> actions);

}  // namespace planforge::builder
