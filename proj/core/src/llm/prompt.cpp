#include "planforge/llm/prompt.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "planforge/error.hpp"

namespace planforge::llm {

const char* const kEmptyPredicateSentinel = "\nNo predicate has been defined yet";

std::string format_predicate_list(const std::vector<pddl::Predicate>& predicates) {
  if (predicates.empty()) return kEmptyPredicateSentinel;
  std::string out;
  for (std::size_t i = 0; i < predicates.size(); ++i)
    out += "\n" + std::to_string(i + 1) + ". " + predicates[i].raw;
  return out;
}

const std::set<std::string>& PromptTemplate::known_placeholders() {
  static const std::set<std::string> known = {
      "domain_desc", "types",       "predicates", "action_name",
      "action_desc", "action_list", "problem_desc"};
  return known;
}

PromptTemplate PromptTemplate::from_text(std::string body, std::vector<std::string> required) {
  return PromptTemplate{std::move(body), std::move(required)};
}

PromptTemplate PromptTemplate::load(const std::filesystem::path& file,
                                    std::vector<std::string> required) {
  std::ifstream in(file);
  if (!in) throw Error(Errc::IoError, "cannot read template " + file.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_text(buf.str(), std::move(required));
}

Bindings& Bindings::text(const std::string& name, std::string value) {
  values[name] = std::move(value);
  return *this;
}

Bindings& Bindings::predicates(const std::string& name,
                               const std::vector<pddl::Predicate>& preds) {
  values[name] = format_predicate_list(preds);
  return *this;
}

namespace {

bool placeholder_name(const std::string& body, std::size_t open, std::string& name,
                      std::size_t& close) {
  close = body.find('}', open + 1);
  if (close == std::string::npos) return false;
  name = body.substr(open + 1, close - open - 1);
  if (name.empty()) return false;
  for (char c : name)
    if (!std::islower(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

}  // namespace

std::string render_prompt(const PromptTemplate& tmpl, const Bindings& bindings) {
  for (const auto& req : tmpl.required)
    if (!bindings.values.count(req))
      throw Error(Errc::MissingPlaceholder, "no binding for required placeholder " + req);

  std::string out;
  out.reserve(tmpl.body.size());
  std::size_t i = 0;
  while (i < tmpl.body.size()) {
    char c = tmpl.body[i];
    if (c != '{') {
      out += c;
      ++i;
      continue;
    }
    std::string name;
    std::size_t close;
    if (!placeholder_name(tmpl.body, i, name, close)) {
      out += c;  // a brace that is not a placeholder, leave it alone
      ++i;
      continue;
    }
    if (!PromptTemplate::known_placeholders().count(name))
      throw Error(Errc::UnknownPlaceholder, "unknown placeholder {" + name + "}");
    auto it = bindings.values.find(name);
    if (it == bindings.values.end())
      throw Error(Errc::MissingPlaceholder, "no binding for placeholder {" + name + "}");
    out += it->second;
    i = close + 1;
  }
  return out;
}

}  // namespace planforge::llm
