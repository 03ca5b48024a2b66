#include "planforge/builder/task_builder.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "planforge/error.hpp"
#include "planforge/llm/sections.hpp"
#include "planforge/pddl/formatter.hpp"
#include "planforge/pddl/parser.hpp"

namespace planforge::builder {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// "blue_block - object" or "blue_block"; descriptions after a colon are
// dropped. Type defaults to object, stored explicitly.
bool parse_object_line(const std::string& line, pddl::TypedName& out) {
  std::string work = lower(line);
  std::size_t colon = work.find(':');
  if (colon != std::string::npos) work = work.substr(0, colon);
  std::istringstream in(work);
  std::string name, dash, type, extra;
  if (!(in >> name)) return false;
  if (name[0] == '?' || name[0] == '(' || name[0] == '-') return false;
  out.name = name;
  out.type = "object";
  if (in >> dash) {
    if (dash != "-" || !(in >> type) || type.empty() || type[0] == '?') return false;
    if (in >> extra) return false;
    out.type = type;
  }
  return true;
}

// One or more "(pred obj ...)" groups on a line.
std::vector<pddl::Atom> parse_ground_atoms(const std::string& line, bool& negative_seen) {
  std::vector<std::string> toks = pddl::tokenize(line);
  std::vector<pddl::Atom> out;
  std::size_t i = 0;
  while (i < toks.size()) {
    if (toks[i] != "(")
      throw Error(Errc::SyntaxError, "expected ( in: " + line);
    ++i;
    if (i < toks.size() && toks[i] == "not") {
      // Closed world: negated init atoms carry no information, skip them.
      negative_seen = true;
      int depth = 1;
      while (i < toks.size() && depth > 0) {
        if (toks[i] == "(") ++depth;
        if (toks[i] == ")") --depth;
        ++i;
      }
      continue;
    }
    pddl::Atom atom;
    if (i >= toks.size() || toks[i] == "(" || toks[i] == ")")
      throw Error(Errc::SyntaxError, "expected predicate in: " + line);
    atom.predicate = toks[i++];
    while (i < toks.size() && toks[i] != ")" && toks[i] != "(") {
      if (!toks[i].empty() && toks[i][0] == '?')
        throw Error(Errc::SyntaxError, "variable in ground atom: " + line);
      atom.args.push_back(toks[i++]);
    }
    if (i >= toks.size() || toks[i] != ")")
      throw Error(Errc::SyntaxError, "unbalanced parens in: " + line);
    ++i;
    out.push_back(std::move(atom));
  }
  return out;
}

}  // namespace

ExtractedTask extract_task(llm::LLMClient& client, const llm::PromptTemplate& tmpl,
                           const std::string& problem_desc, const TypeHierarchy& types,
                           const std::vector<pddl::Predicate>& predicates,
                           const std::string& key) {
  if (predicates.empty())
    throw Error(Errc::ConfigError,
                "task extraction needs a fixed predicate vocabulary, got none");

  llm::Bindings bindings;
  bindings.text("problem_desc", problem_desc)
      .text("types", types.to_prompt_text())
      .predicates("predicates", predicates);

  std::string prompt = llm::render_prompt(tmpl, bindings);
  llm::Completion completion = client.complete(prompt, key);

  auto sections = llm::extract_sections(completion.text, {"Objects", "Initial", "Goal"});

  ExtractedTask result;
  result.raw = completion.text;

  for (const auto& line : llm::block_lines(sections["Objects"])) {
    pddl::TypedName obj;
    if (!parse_object_line(line, obj)) {
      result.warnings.push_back("skipped object line: " + line);
      continue;
    }
    bool dup = false;
    for (const auto& o : result.triple.objects) dup = dup || o.name == obj.name;
    if (dup)
      result.warnings.push_back("duplicate object " + obj.name);
    else
      result.triple.objects.push_back(obj);
  }

  bool negative_seen = false;
  for (const auto& line : llm::block_lines(sections["Initial"])) {
    for (auto& atom : parse_ground_atoms(line, negative_seen)) {
      if (std::find(result.triple.init.begin(), result.triple.init.end(), atom) !=
          result.triple.init.end())
        continue;
      result.triple.init.push_back(std::move(atom));
    }
  }
  if (negative_seen)
    result.warnings.push_back("dropped negated :init atoms (closed world)");

  std::string goal_text = trim(sections["Goal"]);
  if (!goal_text.empty()) {
    if (goal_text.front() != '(') goal_text = "(and " + goal_text + ")";
    result.triple.goal = pddl::parse_ground_condition_text(goal_text);
  }
  if (result.triple.goal.empty())
    throw Error(Errc::EmptyGoal, "the goal section has no literal");

  // Vocabulary checks: flag, never drop.
  auto find_pred = [&](const std::string& name) -> const pddl::Predicate* {
    for (const auto& p : predicates)
      if (p.name == name) return &p;
    return nullptr;
  };
  auto check_atom = [&](const pddl::Atom& atom, const std::string& where) {
    const pddl::Predicate* p = find_pred(atom.predicate);
    if (!p) {
      result.diagnostics.push_back(diag::make_diagnostic(
          diag::Code::UndeclaredPredicate, "", where,
          "predicate " + atom.predicate + " is not in the vocabulary",
          "use one of the declared predicates"));
      return;
    }
    if (p->arity() != atom.args.size())
      result.diagnostics.push_back(diag::make_diagnostic(
          diag::Code::ArityMismatch, "", where,
          atom.predicate + " takes " + std::to_string(p->arity()) + " arguments, got " +
              std::to_string(atom.args.size())));
  };
  for (const auto& atom : result.triple.init) check_atom(atom, "init " + atom.to_string());
  for (const auto& lit : result.triple.goal) check_atom(lit.atom, "goal " + lit.to_string());
  for (const auto& obj : result.triple.objects)
    if (!types.has(obj.type))
      result.diagnostics.push_back(diag::make_diagnostic(
          diag::Code::UnknownObjectType, "", "object " + obj.name,
          "type " + obj.type + " is not in the hierarchy"));
  return result;
}

std::string format_objects(const std::vector<pddl::TypedName>& objects) {
  std::string out;
  for (const auto& o : objects) {
    out += o.name + " - " + o.effective_type() + "\n";
  }
  return out;
}

std::string format_initial(const std::vector<pddl::Atom>& init) {
  std::string out;
  for (const auto& a : init) out += a.to_string() + "\n";
  return out;
}

std::string format_goal(const std::vector<pddl::Literal>& goal) {
  return pddl::format_condition(goal);
}

pddl::Problem to_problem(const std::string& domain_name, const std::string& problem_name,
                         const TaskTriple& triple) {
  pddl::Problem p;
  p.name = lower(problem_name);
  p.domain_name = lower(domain_name);
  p.objects = triple.objects;
  for (auto& o : p.objects)
    if (o.type.empty()) o.type = "object";
  p.init = triple.init;
  p.goal = triple.goal;
  return p;
}

std::string generate_task(const std::string& domain_name, const std::string& problem_name,
                          const TaskTriple& triple) {
  if (triple.goal.empty()) throw Error(Errc::EmptyGoal, "refusing to render an empty goal");
  return pddl::format_problem(to_problem(domain_name, problem_name, triple));
}

}  // namespace planforge::builder
