#include "planforge/diag/diagnostic.hpp"

#include <nlohmann/json.hpp>

namespace planforge::diag {

Severity severity_of(Code code) {
  switch (code) {
    case Code::UnusedPredicate:
    case Code::UnreachableGoalAtom:
      return Severity::Warning;
    default:
      return Severity::Error;
  }
}

std::string_view code_name(Code code) {
  switch (code) {
    case Code::UndeclaredPredicate: return "UndeclaredPredicate";
    case Code::ArityMismatch: return "ArityMismatch";
    case Code::TypeError: return "TypeError";
    case Code::UnboundVariable: return "UnboundVariable";
    case Code::UnusedPredicate: return "UnusedPredicate";
    case Code::UnknownObjectType: return "UnknownObjectType";
    case Code::UnreachableGoalAtom: return "UnreachableGoalAtom";
    case Code::PredicateOnlyInProblem: return "PredicateOnlyInProblem";
    case Code::ContradictoryEffect: return "ContradictoryEffect";
    case Code::DuplicateName: return "DuplicateName";
  }
  return "Unknown";
}

std::string Diagnostic::to_string() const {
  std::string out;
  if (!file.empty()) out += file + ": ";
  out += severity == Severity::Error ? "error" : "warning";
  out += " [";
  out += code_name(code);
  out += "]";
  if (!element.empty()) out += " " + element;
  out += ": " + message;
  if (!hint.empty()) out += " (hint: " + hint + ")";
  return out;
}

Diagnostic make_diagnostic(Code code, std::string file, std::string element,
                           std::string message, std::string hint) {
  return Diagnostic{code, severity_of(code), std::move(file), std::move(element),
                    std::move(message), std::move(hint)};
}

bool has_errors(const std::vector<Diagnostic>& diags) {
  for (const auto& d : diags)
    if (d.severity == Severity::Error) return true;
  return false;
}

std::vector<Diagnostic> errors_only(const std::vector<Diagnostic>& diags) {
  std::vector<Diagnostic> out;
  for (const auto& d : diags)
    if (d.severity == Severity::Error) out.push_back(d);
  return out;
}

std::string to_json_string(const std::vector<Diagnostic>& diags) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& d : diags) {
    nlohmann::json j;
    j["code"] = std::string(code_name(d.code));
    j["severity"] = d.severity == Severity::Error ? "error" : "warning";
    j["file"] = d.file;
    j["element"] = d.element;
    j["message"] = d.message;
    if (!d.hint.empty()) j["hint"] = d.hint;
    arr.push_back(std::move(j));
  }
  return arr.dump(2);
}

}  // namespace planforge::diag
