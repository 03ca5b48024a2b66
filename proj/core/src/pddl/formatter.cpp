#include "planforge/pddl/formatter.hpp"

#include <cctype>

namespace planforge::pddl {

namespace {

void append_typed(std::string& out, const TypedName& t) {
  out += t.name;
  if (!t.type.empty()) {
    out += " - ";
    out += t.type;
  }
}

std::string typed_list_inline(const std::vector<TypedName>& list) {
  std::string out;
  for (std::size_t i = 0; i < list.size(); ++i) {
    if (i) out += " ";
    append_typed(out, list[i]);
  }
  return out;
}

}  // namespace

std::string format_literal(const Literal& lit) { return lit.to_string(); }

std::string format_condition(const std::vector<Literal>& lits) {
  std::string out = "(and";
  for (const auto& l : lits) out += " " + l.to_string();
  out += ")";
  return out;
}

std::string format_domain(const Domain& d) {
  std::string out = "(define (domain " + d.name + ")\n";
  if (!d.requirements.empty()) {
    out += "    (:requirements";
    for (const auto& r : d.requirements) out += " " + r;
    out += ")\n";
  }
  if (!d.types.empty()) {
    out += "    (:types\n";
    for (const auto& t : d.types)
      out += "        " + t.name + " - " + t.effective_type() + "\n";
    out += "    )\n";
  }
  if (!d.predicates.empty()) {
    out += "    (:predicates\n";
    for (const auto& p : d.predicates) {
      out += "        (" + p.name;
      for (const auto& prm : p.params) {
        out += " ";
        append_typed(out, prm);
      }
      out += ")\n";
    }
    out += "    )\n";
  }
  for (const auto& a : d.actions) {
    out += "    (:action " + a.name + "\n";
    out += "        :parameters (" + typed_list_inline(a.params) + ")\n";
    out += "        :precondition " + format_condition(a.preconditions) + "\n";
    out += "        :effect " + format_condition(a.effects) + "\n";
    out += "    )\n";
  }
  out += ")\n";
  return out;
}

std::string format_problem(const Problem& p) {
  std::string out = "(define\n";
  out += "    (problem " + p.name + ")\n";
  out += "    (:domain " + p.domain_name + ")\n";
  out += "    (:objects\n";
  for (const auto& o : p.objects) {
    out += "        ";
    append_typed(out, o);
    out += "\n";
  }
  out += "    )\n";
  out += "    (:init\n";
  for (const auto& a : p.init) out += "        " + a.to_string() + "\n";
  out += "    )\n";
  out += "    (:goal\n";
  out += "        " + format_condition(p.goal) + "\n";
  out += "    )\n";
  out += ")\n";
  return out;
}

std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (c == ';') {
      while (i < text.size() && text[i] != '\n') ++i;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '(' || c == ')') {
      out.emplace_back(1, c);
      ++i;
    } else {
      std::string sym;
      while (i < text.size() && text[i] != '(' && text[i] != ')' &&
             text[i] != ';' && !std::isspace(static_cast<unsigned char>(text[i]))) {
        sym += static_cast<char>(std::tolower(static_cast<unsigned char>(text[i])));
        ++i;
      }
      out.push_back(std::move(sym));
    }
  }
  return out;
}

}  // namespace planforge::pddl
