#include "planforge/builder/domain_builder.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
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

std::string read_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error(Errc::IoError, "cannot read " + file.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

NLActionModel NLActionModel::from_json_text(const std::string& text) {
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::ConfigError, std::string("bad action model JSON: ") + e.what());
  }
  if (!j.is_object())
    throw Error(Errc::ConfigError, "action model must be a JSON object");
  NLActionModel model;
  for (const auto& [name, value] : j.items()) {
    NLAction a;
    a.name = lower(name);
    if (value.is_string())
      a.desc = value.get<std::string>();
    else if (value.is_object() && value.contains("desc"))
      a.desc = value["desc"].get<std::string>();
    else
      throw Error(Errc::ConfigError, "action " + name + " needs a desc");
    model.actions.push_back(std::move(a));
  }
  if (model.actions.empty())
    throw Error(Errc::ConfigError, "action model is empty");
  return model;
}

NLActionModel NLActionModel::load(const std::filesystem::path& file) {
  return from_json_text(read_file(file));
}

TypeHierarchy TypeHierarchy::from_json_text(const std::string& text) {
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::ConfigError, std::string("bad hierarchy JSON: ") + e.what());
  }
  TypeHierarchy h;
  if (j.contains("requirements"))
    for (const auto& r : j["requirements"]) h.requirements.push_back(lower(r.get<std::string>()));
  if (j.contains("types"))
    for (const auto& t : j["types"]) {
      Node n;
      n.name = lower(t.at("name").get<std::string>());
      if (t.contains("parent")) n.parent = lower(t["parent"].get<std::string>());
      if (t.contains("desc")) n.desc = t["desc"].get<std::string>();
      h.nodes.push_back(std::move(n));
    }
  h.validate();
  return h;
}

TypeHierarchy TypeHierarchy::load(const std::filesystem::path& file) {
  return from_json_text(read_file(file));
}

void TypeHierarchy::validate() const {
  std::set<std::string> names;
  for (const auto& n : nodes) {
    if (n.name == "object")
      throw Error(Errc::ConfigError, "the root type object must not be redeclared");
    if (!names.insert(n.name).second)
      throw Error(Errc::ConfigError, "type " + n.name + " declared twice");
  }
  for (const auto& n : nodes) {
    if (n.parent != "object" && !names.count(n.parent))
      throw Error(Errc::ConfigError,
                  "type " + n.name + " has unknown parent " + n.parent);
    std::string cur = n.parent;
    std::size_t hops = 0;
    while (cur != "object") {
      if (++hops > nodes.size())
        throw Error(Errc::ConfigError, "type cycle involving " + n.name);
      for (const auto& m : nodes)
        if (m.name == cur) {
          cur = m.parent;
          break;
        }
    }
  }
}

std::string TypeHierarchy::to_prompt_text() const {
  if (nodes.empty()) return "object (no further types)";
  std::string out;
  for (const auto& n : nodes) {
    out += "- " + n.name + " - " + n.parent;
    if (!n.desc.empty()) out += ": " + n.desc;
    out += "\n";
  }
  return trim(out);
}

std::vector<pddl::TypedName> TypeHierarchy::to_domain_types() const {
  std::vector<pddl::TypedName> out;
  out.reserve(nodes.size());
  for (const auto& n : nodes) out.push_back(pddl::TypedName{n.name, n.parent});
  return out;
}

bool TypeHierarchy::has(const std::string& type_name) const {
  if (type_name == "object") return true;
  for (const auto& n : nodes)
    if (n.name == type_name) return true;
  return false;
}

namespace {

std::string action_list_text(const std::vector<pddl::Action>& actions) {
  if (actions.empty()) return "No action has been defined yet";
  std::string out;
  for (const auto& a : actions) {
    out += "(" + a.name;
    for (const auto& p : a.params) {
      out += " " + p.name;
      if (!p.type.empty()) out += " - " + p.type;
    }
    out += ")\n";
    out += "    preconditions: " + pddl::format_condition(a.preconditions) + "\n";
    out += "    effects: " + pddl::format_condition(a.effects) + "\n";
  }
  return trim(out);
}

std::vector<pddl::Predicate> parse_predicate_lines(const std::string& block,
                                                   std::vector<std::string>& warnings) {
  std::vector<pddl::Predicate> out;
  for (const auto& line : llm::block_lines(block)) {
    try {
      out.push_back(pddl::parse_predicate_signature(line));
    } catch (const Error& e) {
      warnings.push_back("skipped predicate line: " + std::string(e.what()));
    }
  }
  return out;
}

// "?t - truck" or "?t - truck: the vehicle", folded to lower case.
bool parse_parameter_line(const std::string& line, pddl::TypedName& out) {
  std::string work = lower(line);
  std::size_t colon = work.find(':');
  if (colon != std::string::npos) work = work.substr(0, colon);
  std::istringstream in(work);
  std::string name, dash, type, extra;
  if (!(in >> name)) return false;
  if (name.empty() || name[0] != '?') return false;
  out.name = name;
  out.type.clear();
  if (in >> dash) {
    if (dash != "-" || !(in >> type) || type.empty() || type[0] == '?') return false;
    if (in >> extra) return false;
    out.type = type;
  }
  return true;
}

std::vector<pddl::Literal> parse_condition_block(const std::string& block) {
  std::string text = trim(block);
  if (text.empty() || lower(text) == "none") return {};
  try {
    return pddl::parse_condition_text(text);
  } catch (const Error& e) {
    if (e.code() != Errc::SyntaxError) throw;
    // Models sometimes emit a bare list of literals; wrap and retry once.
    return pddl::parse_condition_text("(and " + text + ")");
  }
}

}  // namespace

ExtractedPredicates extract_predicates(llm::LLMClient& client,
                                       const llm::PromptTemplate& tmpl,
                                       const ExtractContext& ctx,
                                       const NLActionModel& actions,
                                       const std::string& key) {
  std::string action_desc;
  for (const auto& a : actions.actions)
    action_desc += "- " + a.name + ": " + a.desc + "\n";

  llm::Bindings bindings;
  bindings.text("domain_desc", ctx.domain_desc)
      .text("types", ctx.types.to_prompt_text())
      .text("action_list", trim(action_desc))
      .predicates("predicates", {});

  std::string prompt = llm::render_prompt(tmpl, bindings);
  llm::Completion completion = client.complete(prompt, key);

  auto sections = llm::extract_sections(completion.text, {"Predicates"});
  ExtractedPredicates result;
  result.raw_block = sections["Predicates"];
  result.predicates = parse_predicate_lines(result.raw_block, result.warnings);
  return result;
}

ExtractedAction extract_action(llm::LLMClient& client, const llm::PromptTemplate& tmpl,
                               const ExtractContext& ctx, const NLAction& action,
                               const std::vector<pddl::Action>& prior_actions,
                               const std::vector<pddl::Predicate>& predicates,
                               const std::string& key) {
  llm::Bindings bindings;
  bindings.text("domain_desc", ctx.domain_desc)
      .text("types", ctx.types.to_prompt_text())
      .text("action_name", action.name)
      .text("action_desc", action.desc)
      .text("action_list", action_list_text(prior_actions))
      .predicates("predicates", predicates);

  std::string prompt = llm::render_prompt(tmpl, bindings);
  llm::Completion completion = client.complete(prompt, key);

  auto sections = llm::extract_sections(
      completion.text, {"Parameters", "Preconditions", "Effects", "New Predicates"});

  ExtractedAction result;
  result.raw = completion.text;
  result.action.name = action.name;

  for (const auto& line : llm::block_lines(sections["Parameters"])) {
    pddl::TypedName param;
    if (!parse_parameter_line(line, param)) {
      result.warnings.push_back("skipped parameter line: " + line);
      continue;
    }
    bool dup = false;
    for (const auto& p : result.action.params) dup = dup || p.name == param.name;
    if (dup)
      result.warnings.push_back("duplicate parameter " + param.name);
    else
      result.action.params.push_back(param);
  }

  result.action.preconditions = parse_condition_block(sections["Preconditions"]);
  result.action.effects = parse_condition_block(sections["Effects"]);
  result.new_predicates = parse_predicate_lines(sections["New Predicates"], result.warnings);

  // Vocabulary hygiene: drop proposals that only restate known predicates.
  std::set<std::string> known;
  for (const auto& p : predicates) known.insert(p.name);
  std::erase_if(result.new_predicates, [&](const pddl::Predicate& p) {
    return known.count(p.name) > 0;
  });

  std::set<std::string> params;
  for (const auto& p : result.action.params) params.insert(p.name);
  std::set<std::string> flagged;
  auto check_bound = [&](const std::vector<pddl::Literal>& lits, const char* where) {
    for (const auto& lit : lits)
      for (const auto& arg : lit.atom.args)
        if (!params.count(arg) && flagged.insert(arg).second)
          result.diagnostics.push_back(diag::make_diagnostic(
              diag::Code::UnboundVariable, "", "action " + action.name,
              arg + " in " + where + " " + lit.atom.to_string() +
                  " is not a declared parameter",
              "add " + arg + " to the parameter list"));
  };
  check_bound(result.action.preconditions, "precondition");
  check_bound(result.action.effects, "effect");
  return result;
}

DomainBuildResult build_domain_action_by_action(llm::LLMClient& client,
                                                const llm::PromptTemplate& tmpl,
                                                const ExtractContext& ctx,
                                                const NLActionModel& model,
                                                int max_iter,
                                                const std::string& key_prefix) {
  if (max_iter < 1) throw Error(Errc::ConfigError, "max_iter must be >= 1");
  DomainBuildResult result;
  std::vector<pddl::Predicate> pool;

  for (int sweep = 1; sweep <= max_iter; ++sweep) {
    std::vector<pddl::Action> actions;
    result.diagnostics.clear();
    result.warnings.clear();
    for (const auto& nl : model.actions) {
      std::string key = key_prefix + nl.name + "/round" + std::to_string(sweep);
      try {
        ExtractedAction ex =
            extract_action(client, tmpl, ctx, nl, actions, pool, key);
        actions.push_back(ex.action);
        for (auto& p : ex.new_predicates) pool.push_back(std::move(p));
        for (auto& d : ex.diagnostics) result.diagnostics.push_back(std::move(d));
        for (auto& w : ex.warnings) result.warnings.push_back(std::move(w));
      } catch (const Error& e) {
        throw Error(e.code(), "sweep " + std::to_string(sweep) + ", action " +
                                  nl.name + ": " + e.what());
      }
    }
    pool = diag::prune_predicates(pool, actions);
    result.actions = std::move(actions);
    result.sweeps_run = sweep;
  }
  result.predicates = std::move(pool);
  return result;
}

AssembledDomain assemble_domain(const std::string& name,
                                const std::vector<std::string>& requirements,
                                const TypeHierarchy& types,
                                std::vector<pddl::Predicate> predicates,
                                std::vector<pddl::Action> actions) {
  std::set<std::string> seen;
  for (const auto& p : predicates)
    if (!seen.insert(p.name).second)
      throw Error(Errc::DuplicateName, "predicate " + p.name + " declared twice");
  seen.clear();
  for (const auto& a : actions)
    if (!seen.insert(a.name).second)
      throw Error(Errc::DuplicateName, "action " + a.name + " declared twice");

  AssembledDomain out;
  out.domain.name = lower(name);
  for (const auto& r : requirements) out.domain.requirements.push_back(lower(r));
  out.domain.types = types.to_domain_types();
  out.domain.predicates = std::move(predicates);
  out.domain.actions = std::move(actions);
  out.diagnostics = diag::check_domain(out.domain);
  return out;
}

}  // namespace planforge::builder
