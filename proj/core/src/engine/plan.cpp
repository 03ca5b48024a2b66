#include "planforge/engine/plan.hpp"

#include <sstream>

#include "planforge/error.hpp"
#include "planforge/pddl/formatter.hpp"

namespace planforge::engine {

std::string plan_to_text(const GroundTask& task, const Plan& plan) {
  std::string out;
  for (int step : plan.steps) {
    out += task.actions.at(static_cast<std::size_t>(step)).text;
    out += "\n";
  }
  return out;
}

std::vector<std::string> parse_plan_text(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::vector<std::string> toks = pddl::tokenize(line);
    if (toks.empty()) continue;
    if (toks.size() < 3 || toks.front() != "(" || toks.back() != ")")
      throw Error(Errc::SyntaxError, "bad plan line: " + line, lineno);
    std::string norm = "(";
    for (std::size_t i = 1; i + 1 < toks.size(); ++i) {
      if (toks[i] == "(" || toks[i] == ")")
        throw Error(Errc::SyntaxError, "bad plan line: " + line, lineno);
      if (i > 1) norm += " ";
      norm += toks[i];
    }
    norm += ")";
    lines.push_back(std::move(norm));
  }
  return lines;
}

}  // namespace planforge::engine
