#include "planforge/builder/feedback.hpp"

#include <algorithm>
#include <cctype>
#include <iostream>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>

#include "planforge/diag/checks.hpp"
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

}  // namespace

FeedbackMode feedback_mode_from(const std::string& name) {
  std::string n = lower(trim(name));
  if (n == "llm") return FeedbackMode::Llm;
  if (n == "human") return FeedbackMode::Human;
  if (n == "hybrid") return FeedbackMode::Hybrid;
  throw Error(Errc::ConfigError, "unknown feedback mode " + name);
}

std::string feedback_mode_name(FeedbackMode mode) {
  switch (mode) {
    case FeedbackMode::Llm: return "llm";
    case FeedbackMode::Human: return "human";
    case FeedbackMode::Hybrid: return "hybrid";
  }
  return "llm";
}

std::string Suggestion::describe() const {
  switch (kind) {
    case SuggestionKind::AddInit: return "add-init " + literal.atom.to_string();
    case SuggestionKind::RemoveInit: return "remove-init " + literal.atom.to_string();
    case SuggestionKind::AddGoal: return "add-goal " + literal.to_string();
    case SuggestionKind::RemoveGoal: return "remove-goal " + literal.to_string();
    case SuggestionKind::AddObject:
      return "add-object " + typed.name + " - " + typed.effective_type();
    case SuggestionKind::RemoveObject: return "remove-object " + target;
    case SuggestionKind::RetypeObject:
      return "retype-object " + typed.name + " - " + typed.effective_type();
    case SuggestionKind::AddPredicate: return "add-predicate " + predicate.clean();
    case SuggestionKind::RemovePredicate: return "remove-predicate " + target;
    case SuggestionKind::AddPrecondition:
      return "add-precondition " + target + " " + literal.to_string();
    case SuggestionKind::RemovePrecondition:
      return "remove-precondition " + target + " " + literal.to_string();
    case SuggestionKind::AddEffect:
      return "add-effect " + target + " " + literal.to_string();
    case SuggestionKind::RemoveEffect:
      return "remove-effect " + target + " " + literal.to_string();
    case SuggestionKind::RetypeParam:
      return "retype-param " + target + " " + typed.name + " - " + typed.effective_type();
    case SuggestionKind::Unknown: break;
  }
  return "unknown: " + raw;
}

namespace {

bool parse_one_literal(const std::string& text, bool ground, pddl::Literal& out) {
  try {
    std::vector<pddl::Literal> lits =
        ground ? pddl::parse_ground_condition_text(text) : pddl::parse_condition_text(text);
    if (lits.size() != 1) return false;
    out = lits[0];
    return true;
  } catch (const Error&) {
    return false;
  }
}

bool parse_typed_name(const std::string& text, bool variable, pddl::TypedName& out) {
  std::istringstream in(lower(text));
  std::string name, dash, type, extra;
  if (!(in >> name >> dash >> type)) return false;
  if (dash != "-" || (in >> extra)) return false;
  if (variable != (name[0] == '?')) return false;
  if (type.empty() || type[0] == '?') return false;
  out.name = name;
  out.type = type;
  return true;
}

}  // namespace

Suggestion parse_suggestion(const std::string& line) {
  Suggestion s;
  s.raw = trim(line);
  std::string work = s.raw;
  std::size_t space = work.find_first_of(" \t");
  if (space == std::string::npos) return s;
  std::string keyword = lower(work.substr(0, space));
  std::string rest = trim(work.substr(space + 1));
  if (rest.empty()) return s;

  auto lit = [&](SuggestionKind kind, bool ground) {
    pddl::Literal l;
    if (parse_one_literal(rest, ground, l)) {
      s.kind = kind;
      s.literal = l;
    }
  };

  if (keyword == "add-init") lit(SuggestionKind::AddInit, true);
  else if (keyword == "remove-init") lit(SuggestionKind::RemoveInit, true);
  else if (keyword == "add-goal") lit(SuggestionKind::AddGoal, true);
  else if (keyword == "remove-goal") lit(SuggestionKind::RemoveGoal, true);
  else if (keyword == "add-object" || keyword == "retype-object") {
    pddl::TypedName t;
    if (parse_typed_name(rest, false, t)) {
      s.kind = keyword == "add-object" ? SuggestionKind::AddObject
                                       : SuggestionKind::RetypeObject;
      s.typed = t;
      s.target = t.name;
    }
  } else if (keyword == "remove-object") {
    std::istringstream in(lower(rest));
    std::string name, extra;
    if ((in >> name) && !(in >> extra) && name[0] != '(' && name[0] != '?') {
      s.kind = SuggestionKind::RemoveObject;
      s.target = name;
    }
  } else if (keyword == "add-predicate") {
    try {
      s.predicate = pddl::parse_predicate_signature(rest);
      s.kind = SuggestionKind::AddPredicate;
      s.target = s.predicate.name;
    } catch (const Error&) {
    }
  } else if (keyword == "remove-predicate") {
    std::istringstream in(lower(rest));
    std::string name, extra;
    if ((in >> name) && !(in >> extra) && name[0] != '(' && name[0] != '?') {
      s.kind = SuggestionKind::RemovePredicate;
      s.target = name;
    }
  } else if (keyword == "add-precondition" || keyword == "remove-precondition" ||
             keyword == "add-effect" || keyword == "remove-effect") {
    std::size_t paren = rest.find('(');
    if (paren != std::string::npos && paren > 0) {
      std::string action = lower(trim(rest.substr(0, paren)));
      pddl::Literal l;
      if (!action.empty() && action.find(' ') == std::string::npos &&
          parse_one_literal(rest.substr(paren), false, l)) {
        if (keyword == "add-precondition") s.kind = SuggestionKind::AddPrecondition;
        else if (keyword == "remove-precondition") s.kind = SuggestionKind::RemovePrecondition;
        else if (keyword == "add-effect") s.kind = SuggestionKind::AddEffect;
        else s.kind = SuggestionKind::RemoveEffect;
        s.target = action;
        s.literal = l;
      }
    }
  } else if (keyword == "retype-param") {
    std::istringstream in(lower(rest));
    std::string action;
    if (in >> action) {
      std::string tail;
      std::getline(in, tail);
      pddl::TypedName t;
      if (parse_typed_name(tail, true, t)) {
        s.kind = SuggestionKind::RetypeParam;
        s.target = action;
        s.typed = t;
      }
    }
  }
  return s;
}

int FeedbackReport::applied_count() const {
  int n = 0;
  for (const auto& d : decisions)
    if (d.outcome == SuggestionDecision::Outcome::Applied ||
        d.outcome == SuggestionDecision::Outcome::Edited)
      ++n;
  return n;
}

std::string FeedbackReport::to_json_string() const {
  nlohmann::json j;
  j["mode"] = feedback_mode_name(mode);
  j["verdict"] = verdict == Verdict::Accept ? "accept" : "revise";
  j["answers"] = nlohmann::json::array();
  for (const auto& a : answers)
    j["answers"].push_back({{"question", a.question},
                            {"answer", a.change_needed ? "yes" : "no"},
                            {"rationale", a.rationale}});
  j["suggestions"] = nlohmann::json::array();
  for (const auto& s : suggestions) j["suggestions"].push_back(s.describe());
  j["decisions"] = nlohmann::json::array();
  for (const auto& d : decisions) {
    const char* outcome = "skipped";
    switch (d.outcome) {
      case SuggestionDecision::Outcome::Applied: outcome = "applied"; break;
      case SuggestionDecision::Outcome::Rejected: outcome = "rejected"; break;
      case SuggestionDecision::Outcome::Skipped: outcome = "skipped"; break;
      case SuggestionDecision::Outcome::Edited: outcome = "edited"; break;
    }
    nlohmann::json e;
    e["suggestion"] = d.suggestion.describe();
    e["outcome"] = outcome;
    if (!d.note.empty()) e["note"] = d.note;
    j["decisions"].push_back(std::move(e));
  }
  j["revalidation"] =
      nlohmann::json::parse(diag::to_json_string(revalidation));
  return j.dump(2);
}

std::pair<std::vector<ChecklistAnswer>, std::vector<Suggestion>> parse_feedback(
    const std::string& completion) {
  std::vector<ChecklistAnswer> answers;
  {
    std::istringstream in(completion);
    std::string line;
    ChecklistAnswer current;
    bool open = false;
    bool in_suggestions = false;
    auto flush = [&]() {
      if (!open) return;
      std::string all = lower(current.question + " " + current.rationale);
      std::string word;
      std::string last;
      for (char c : all) {
        if (std::isalpha(static_cast<unsigned char>(c))) {
          word += c;
        } else {
          if (word == "yes" || word == "no") last = word;
          word.clear();
        }
      }
      if (word == "yes" || word == "no") last = word;
      current.change_needed = last == "yes";
      current.rationale = trim(current.rationale);
      answers.push_back(current);
      current = ChecklistAnswer{};
      open = false;
    };
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      std::string t = trim(line);
      std::string head;  // heading text, if this is a markdown heading
      {
        std::size_t hashes = 0;
        while (hashes < t.size() && t[hashes] == '#') ++hashes;
        if (hashes > 0) head = lower(trim(t.substr(hashes)));
      }
      if (!head.empty()) {
        flush();
        in_suggestions = head.rfind("suggestion", 0) == 0;
        continue;
      }
      if (in_suggestions) continue;
      std::size_t i = 0;
      while (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) ++i;
      if (i > 0 && i < t.size() && t[i] == '.') {
        flush();
        open = true;
        std::string body = trim(t.substr(i + 1));
        std::size_t q = body.find('?');
        if (q != std::string::npos) {
          current.question = trim(body.substr(0, q + 1));
          current.rationale = trim(body.substr(q + 1));
        } else {
          current.question = body;
        }
        continue;
      }
      if (open && !t.empty()) current.rationale += (current.rationale.empty() ? "" : " ") + t;
    }
    flush();
  }
  if (answers.empty())
    throw Error(Errc::MissingChecklist, "no numbered checklist answers in completion");

  std::vector<Suggestion> suggestions;
  try {
    auto sections = llm::extract_sections(completion, {"Suggestions"});
    for (const auto& line : llm::block_lines(sections["Suggestions"]))
      suggestions.push_back(parse_suggestion(line));
  } catch (const Error& e) {
    if (e.code() != Errc::MissingSection) throw;  // absent section = no suggestions
  }
  return {answers, suggestions};
}

namespace {

// Editable model wrappers so one review loop serves tasks and domains.
struct TaskEditor {
  TaskTriple model;

  std::string overlap_key(const Suggestion& s) const {
    switch (s.kind) {
      case SuggestionKind::AddInit:
      case SuggestionKind::RemoveInit:
        return "init|" + s.literal.atom.to_string();
      case SuggestionKind::AddGoal:
      case SuggestionKind::RemoveGoal:
        return "goal|" + s.literal.atom.to_string();
      case SuggestionKind::AddObject:
      case SuggestionKind::RemoveObject:
      case SuggestionKind::RetypeObject:
        return "object|" + (s.target.empty() ? s.typed.name : s.target);
      default:
        return "other|" + s.raw;
    }
  }

  // Empty string on success, reason when unappliable.
  std::string apply(const Suggestion& s) {
    switch (s.kind) {
      case SuggestionKind::AddInit: {
        if (std::find(model.init.begin(), model.init.end(), s.literal.atom) !=
            model.init.end())
          return "already in the initial state";
        if (!s.literal.positive) return "init atoms are positive (closed world)";
        model.init.push_back(s.literal.atom);
        return "";
      }
      case SuggestionKind::RemoveInit: {
        auto it = std::find(model.init.begin(), model.init.end(), s.literal.atom);
        if (it == model.init.end()) return "not in the initial state";
        model.init.erase(it);
        return "";
      }
      case SuggestionKind::AddGoal: {
        if (std::find(model.goal.begin(), model.goal.end(), s.literal) != model.goal.end())
          return "already in the goal";
        model.goal.push_back(s.literal);
        return "";
      }
      case SuggestionKind::RemoveGoal: {
        auto it = std::find(model.goal.begin(), model.goal.end(), s.literal);
        if (it == model.goal.end()) return "not in the goal";
        if (model.goal.size() == 1) return "would leave the goal empty";
        model.goal.erase(it);
        return "";
      }
      case SuggestionKind::AddObject: {
        for (const auto& o : model.objects)
          if (o.name == s.typed.name) return "object already declared";
        model.objects.push_back(s.typed);
        return "";
      }
      case SuggestionKind::RemoveObject: {
        auto it = std::find_if(model.objects.begin(), model.objects.end(),
                               [&](const pddl::TypedName& o) { return o.name == s.target; });
        if (it == model.objects.end()) return "object not declared";
        model.objects.erase(it);
        return "";
      }
      case SuggestionKind::RetypeObject: {
        for (auto& o : model.objects)
          if (o.name == s.typed.name) {
            o.type = s.typed.type;
            return "";
          }
        return "object not declared";
      }
      default:
        return "not a task-level edit";
    }
  }
};

struct DomainEditor {
  pddl::Domain model;

  std::string overlap_key(const Suggestion& s) const {
    switch (s.kind) {
      case SuggestionKind::AddPredicate:
      case SuggestionKind::RemovePredicate:
        return "predicate|" + s.target;
      case SuggestionKind::AddPrecondition:
      case SuggestionKind::RemovePrecondition:
        return "pre|" + s.target + "|" + s.literal.atom.to_string();
      case SuggestionKind::AddEffect:
      case SuggestionKind::RemoveEffect:
        return "eff|" + s.target + "|" + s.literal.atom.to_string();
      case SuggestionKind::RetypeParam:
        return "param|" + s.target + "|" + s.typed.name;
      default:
        return "other|" + s.raw;
    }
  }

  std::string apply(const Suggestion& s) {
    auto find_action = [&]() -> pddl::Action* {
      for (auto& a : model.actions)
        if (a.name == s.target) return &a;
      return nullptr;
    };
    switch (s.kind) {
      case SuggestionKind::AddPredicate: {
        if (model.find_predicate(s.predicate.name)) return "predicate already declared";
        model.predicates.push_back(s.predicate);
        return "";
      }
      case SuggestionKind::RemovePredicate: {
        auto it = std::find_if(model.predicates.begin(), model.predicates.end(),
                               [&](const pddl::Predicate& p) { return p.name == s.target; });
        if (it == model.predicates.end()) return "predicate not declared";
        model.predicates.erase(it);
        return "";
      }
      case SuggestionKind::AddPrecondition: {
        pddl::Action* a = find_action();
        if (!a) return "action " + s.target + " does not exist";
        if (std::find(a->preconditions.begin(), a->preconditions.end(), s.literal) !=
            a->preconditions.end())
          return "precondition already present";
        a->preconditions.push_back(s.literal);
        return "";
      }
      case SuggestionKind::RemovePrecondition: {
        pddl::Action* a = find_action();
        if (!a) return "action " + s.target + " does not exist";
        auto it = std::find(a->preconditions.begin(), a->preconditions.end(), s.literal);
        if (it == a->preconditions.end()) return "precondition not present";
        a->preconditions.erase(it);
        return "";
      }
      case SuggestionKind::AddEffect: {
        pddl::Action* a = find_action();
        if (!a) return "action " + s.target + " does not exist";
        if (std::find(a->effects.begin(), a->effects.end(), s.literal) != a->effects.end())
          return "effect already present";
        a->effects.push_back(s.literal);
        return "";
      }
      case SuggestionKind::RemoveEffect: {
        pddl::Action* a = find_action();
        if (!a) return "action " + s.target + " does not exist";
        auto it = std::find(a->effects.begin(), a->effects.end(), s.literal);
        if (it == a->effects.end()) return "effect not present";
        a->effects.erase(it);
        return "";
      }
      case SuggestionKind::RetypeParam: {
        pddl::Action* a = find_action();
        if (!a) return "action " + s.target + " does not exist";
        for (auto& p : a->params)
          if (p.name == s.typed.name) {
            p.type = s.typed.type;
            return "";
          }
        return "parameter " + s.typed.name + " does not exist";
      }
      default:
        return "not a domain-level edit";
    }
  }
};

template <class Editor>
FeedbackReport review(Editor& editor, const std::string& completion, FeedbackMode mode,
                      ReviewIo io) {
  FeedbackReport report;
  report.mode = mode;
  report.completion = completion;
  std::tie(report.answers, report.suggestions) = parse_feedback(completion);

  std::istream* in = io.in ? io.in : &std::cin;
  std::ostream* out = io.out ? io.out : &std::cout;

  std::set<std::string> touched;
  for (const auto& s : report.suggestions) {
    SuggestionDecision decision;
    decision.suggestion = s;

    if (s.kind == SuggestionKind::Unknown) {
      decision.outcome = SuggestionDecision::Outcome::Skipped;
      decision.note = "unparseable suggestion";
      report.decisions.push_back(std::move(decision));
      continue;
    }
    std::string key = editor.overlap_key(s);
    if (touched.count(key)) {
      decision.outcome = SuggestionDecision::Outcome::Skipped;
      decision.note = "overlaps an earlier applied edit";
      report.decisions.push_back(std::move(decision));
      continue;
    }

    bool apply_it = true;
    if (mode != FeedbackMode::Llm) {
      *out << s.describe() << "\n";
      *out << (mode == FeedbackMode::Human ? "apply? [y/n/e] " : "apply? [y/n] ")
           << std::flush;
      std::string answer;
      if (!(*in >> answer)) answer = "n";
      answer = lower(answer);
      if (mode == FeedbackMode::Human && answer == "e") {
        std::string replacement;
        std::getline(*in >> std::ws, replacement);
        Suggestion edited = parse_suggestion(replacement);
        if (edited.kind == SuggestionKind::Unknown) {
          decision.outcome = SuggestionDecision::Outcome::Skipped;
          decision.note = "unparseable replacement: " + replacement;
          report.decisions.push_back(std::move(decision));
          continue;
        }
        std::string why = editor.apply(edited);
        if (why.empty()) {
          touched.insert(editor.overlap_key(edited));
          decision.outcome = SuggestionDecision::Outcome::Edited;
          decision.note = "replaced with: " + edited.describe();
        } else {
          decision.outcome = SuggestionDecision::Outcome::Skipped;
          decision.note = why;
        }
        report.decisions.push_back(std::move(decision));
        continue;
      }
      apply_it = answer == "y" || answer == "yes";
    }

    if (!apply_it) {
      decision.outcome = SuggestionDecision::Outcome::Rejected;
      decision.note = "rejected by reviewer";
      report.decisions.push_back(std::move(decision));
      continue;
    }
    std::string why = editor.apply(s);
    if (why.empty()) {
      touched.insert(key);
      decision.outcome = SuggestionDecision::Outcome::Applied;
    } else {
      decision.outcome = SuggestionDecision::Outcome::Skipped;
      decision.note = why;
    }
    report.decisions.push_back(std::move(decision));
  }

  if (mode == FeedbackMode::Llm) {
    bool any_yes = false;
    for (const auto& a : report.answers) any_yes = any_yes || a.change_needed;
    report.verdict = any_yes ? Verdict::Revise : Verdict::Accept;
  } else if (report.applied_count() == 0) {
    // Reviewer overruled every proposal: the round changed nothing, so it
    // reads as an accept and the answers are normalized to match.
    for (auto& a : report.answers)
      if (a.change_needed) {
        a.change_needed = false;
        a.rationale += a.rationale.empty() ? "" : " ";
        a.rationale += "[reviewer overruled the proposed change]";
      }
    report.verdict = Verdict::Accept;
  } else {
    report.verdict = Verdict::Revise;
  }
  return report;
}

}  // namespace

std::pair<TaskTriple, FeedbackReport> task_feedback(
    llm::LLMClient& client, const llm::PromptTemplate& tmpl,
    const std::string& problem_desc, const TypeHierarchy& types,
    const std::vector<pddl::Predicate>& predicates, const TaskTriple& candidate,
    FeedbackMode mode, const std::string& key, ReviewIo io) {
  llm::Bindings bindings;
  bindings.text("problem_desc", problem_desc)
      .text("types", types.to_prompt_text())
      .predicates("predicates", predicates);
  std::string prompt = llm::render_prompt(tmpl, bindings);
  prompt += "\n\nCandidate task:\n";
  prompt += "### Objects\n" + format_objects(candidate.objects);
  prompt += "### Initial\n" + format_initial(candidate.init);
  prompt += "### Goal\n" + format_goal(candidate.goal) + "\n";

  llm::Completion completion = client.complete(prompt, key);

  TaskEditor editor{candidate};
  FeedbackReport report = review(editor, completion.text, mode, io);

  pddl::Domain vocabulary;
  vocabulary.name = "vocabulary";
  vocabulary.types = types.to_domain_types();
  vocabulary.predicates = predicates;
  report.revalidation =
      diag::check_problem(vocabulary, to_problem("vocabulary", "candidate", editor.model));
  return {std::move(editor.model), std::move(report)};
}

std::pair<pddl::Domain, FeedbackReport> domain_feedback(
    llm::LLMClient& client, const llm::PromptTemplate& tmpl,
    const std::string& domain_desc, const pddl::Domain& candidate, FeedbackMode mode,
    const std::string& key, ReviewIo io) {
  llm::Bindings bindings;
  bindings.text("domain_desc", domain_desc)
      .predicates("predicates", candidate.predicates);
  std::string prompt = llm::render_prompt(tmpl, bindings);
  prompt += "\n\nCandidate domain:\n" + pddl::format_domain(candidate);

  llm::Completion completion = client.complete(prompt, key);

  DomainEditor editor{candidate};
  FeedbackReport report = review(editor, completion.text, mode, io);
  report.revalidation = diag::check_domain(editor.model);
  return {std::move(editor.model), std::move(report)};
}

}  // namespace planforge::builder
