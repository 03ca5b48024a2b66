#include "planforge/error.hpp"

namespace planforge {

std::string_view errc_name(Errc c) {
  switch (c) {
    case Errc::SyntaxError: return "SyntaxError";
    case Errc::UnsupportedFeature: return "UnsupportedFeature";
    case Errc::EmptyGoal: return "EmptyGoal";
    case Errc::MalformedSignature: return "MalformedSignature";
    case Errc::TypeMismatch: return "TypeMismatch";
    case Errc::Inapplicable: return "Inapplicable";
    case Errc::VocabularyMismatch: return "VocabularyMismatch";
    case Errc::MissingPlaceholder: return "MissingPlaceholder";
    case Errc::UnknownPlaceholder: return "UnknownPlaceholder";
    case Errc::AuthError: return "AuthError";
    case Errc::TransportError: return "TransportError";
    case Errc::BudgetExceeded: return "BudgetExceeded";
    case Errc::MissingSection: return "MissingSection";
    case Errc::MissingChecklist: return "MissingChecklist";
    case Errc::DuplicateName: return "DuplicateName";
    case Errc::ConfigError: return "ConfigError";
    case Errc::IoError: return "IoError";
  }
  return "Error";
}

int exit_code_for(Errc c) {
  switch (c) {
    case Errc::MissingPlaceholder:
    case Errc::UnknownPlaceholder:
    case Errc::AuthError:
    case Errc::TransportError:
    case Errc::BudgetExceeded:
    case Errc::MissingSection:
    case Errc::MissingChecklist:
    case Errc::ConfigError:
    case Errc::IoError:
      return 2;
    default:
      return 1;
  }
}

namespace {
std::string compose(Errc code, const std::string& message, int line, int col) {
  std::string out(errc_name(code));
  out += ": ";
  out += message;
  if (line >= 0) {
    out += " (line " + std::to_string(line);
    if (col >= 0) out += ", col " + std::to_string(col);
    out += ")";
  }
  return out;
}
}  // namespace

Error::Error(Errc code, std::string message, int line, int col)
    : std::runtime_error(compose(code, message, line, col)),
      code_(code),
      line_(line),
      col_(col) {}

}  // namespace planforge
