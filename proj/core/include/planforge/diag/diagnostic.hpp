#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace planforge::diag {

/// Stable diagnostic codes; the spelling below is the serialized form and
/// must not change between releases.
enum class Code {
  UndeclaredPredicate,
  ArityMismatch,
  TypeError,
  UnboundVariable,
  UnusedPredicate,
  UnknownObjectType,
  UnreachableGoalAtom,
  PredicateOnlyInProblem,
  ContradictoryEffect,
  DuplicateName,
};

enum class Severity { Error, Warning };

/// The code alone determines the severity: UnusedPredicate and
/// UnreachableGoalAtom are warnings, everything else is an error.
Severity severity_of(Code code);

std::string_view code_name(Code code);

struct Diagnostic {
  Code code;
  Severity severity;
  std::string file;     // source name, may be empty for built models
  std::string element;  // "predicate clear", "action pickup", "init", ...
  std::string message;
  std::string hint;  // optional repair suggestion

  std::string to_string() const;
};

Diagnostic make_diagnostic(Code code, std::string file, std::string element,
                           std::string message, std::string hint = "");

bool has_errors(const std::vector<Diagnostic>& diags);
std::vector<Diagnostic> errors_only(const std::vector<Diagnostic>& diags);

std::string to_json_string(const std::vector<Diagnostic>& diags);

}  // namespace planforge::diag
