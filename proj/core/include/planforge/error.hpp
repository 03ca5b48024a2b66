#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace planforge {

enum class Errc {
  SyntaxError,
  UnsupportedFeature,
  EmptyGoal,
  MalformedSignature,
  TypeMismatch,
  Inapplicable,
  VocabularyMismatch,
  MissingPlaceholder,
  UnknownPlaceholder,
  AuthError,
  TransportError,
  BudgetExceeded,
  MissingSection,
  MissingChecklist,
  DuplicateName,
  ConfigError,
  IoError,
};

std::string_view errc_name(Errc c);

/// CLI convention: 1 for model and input problems (bad PDDL, failed
/// checks), 2 for configuration and environment problems (unreadable
/// files, auth, transport, bad config).
int exit_code_for(Errc c);

/// Single error type for the whole library. `line`/`col` are 1-based and
/// only meaningful for parse errors (-1 otherwise).
class Error : public std::runtime_error {
 public:
  Error(Errc code, std::string message, int line = -1, int col = -1);

  Errc code() const { return code_; }
  int line() const { return line_; }
  int col() const { return col_; }

 private:
  Errc code_;
  int line_;
  int col_;
};

}  // namespace planforge
