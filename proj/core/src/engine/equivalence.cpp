#include "planforge/engine/equivalence.hpp"

#include <nlohmann/json.hpp>
#include <random>

#include "planforge/error.hpp"

namespace planforge::engine {

std::string EquivalenceReport::to_json_string() const {
  nlohmann::json j;
  j["status"] = status == Status::AgreeOnSample ? "agree-on-sample" : "disagree";
  j["walks_run"] = walks_run;
  if (status == Status::Disagree) {
    j["sequence"] = sequence;
    j["step"] = step;
    j["detail"] = detail;
  }
  return j.dump(2);
}

namespace {

std::string mapped(const std::map<std::string, std::string>& m, const std::string& name) {
  auto it = m.find(name);
  return it == m.end() ? name : it->second;
}

void check_mapping(const pddl::Domain& a, const pddl::Domain& b, const NameMapping& nm) {
  if (a.predicates.size() != b.predicates.size())
    throw Error(Errc::VocabularyMismatch, "predicate counts differ");
  if (a.actions.size() != b.actions.size())
    throw Error(Errc::VocabularyMismatch, "action counts differ");
  for (const auto& p : a.predicates) {
    const pddl::Predicate* q = b.find_predicate(mapped(nm.predicates, p.name));
    if (!q)
      throw Error(Errc::VocabularyMismatch,
                  "predicate " + p.name + " has no counterpart");
    if (q->arity() != p.arity())
      throw Error(Errc::VocabularyMismatch, "predicate " + p.name + " arity differs");
  }
  for (const auto& act : a.actions) {
    const pddl::Action* other = b.find_action(mapped(nm.actions, act.name));
    if (!other)
      throw Error(Errc::VocabularyMismatch, "action " + act.name + " has no counterpart");
    if (other->params.size() != act.params.size())
      throw Error(Errc::VocabularyMismatch,
                  "action " + act.name + " parameter counts differ");
  }
}

pddl::Problem translate(const pddl::Problem& p, const NameMapping& nm) {
  pddl::Problem out = p;
  for (auto& atom : out.init) atom.predicate = mapped(nm.predicates, atom.predicate);
  for (auto& lit : out.goal) lit.atom.predicate = mapped(nm.predicates, lit.atom.predicate);
  return out;
}

}  // namespace

EquivalenceReport operational_equivalence(const pddl::Domain& reference,
                                          const pddl::Domain& candidate,
                                          const pddl::Problem& problem,
                                          const SamplerConfig& config,
                                          const NameMapping& mapping) {
  check_mapping(reference, candidate, mapping);

  GroundTask ta = ground(reference, problem);
  GroundTask tb = ground(candidate, translate(problem, mapping));

  // Align ground actions across the two tasks by (mapped schema, binding).
  // An action missing on one side simply counts as never applicable there.
  std::vector<int> a_to_b(ta.actions.size(), -1);
  std::vector<bool> b_covered(tb.actions.size(), false);
  {
    std::map<std::string, int> b_index;
    for (std::size_t i = 0; i < tb.actions.size(); ++i)
      b_index[tb.actions[i].text] = static_cast<int>(i);
    for (std::size_t i = 0; i < ta.actions.size(); ++i) {
      std::string key = "(" + mapped(mapping.actions, ta.actions[i].schema);
      for (const auto& arg : ta.actions[i].binding) key += " " + arg;
      key += ")";
      auto it = b_index.find(key);
      if (it != b_index.end()) {
        a_to_b[i] = it->second;
        b_covered[static_cast<std::size_t>(it->second)] = true;
      }
    }
  }

  std::mt19937_64 rng(config.seed);
  auto pick = [&rng](std::size_t n) { return static_cast<std::size_t>(rng() % n); };

  EquivalenceReport report;

  auto compare_state = [&](const State& sa, const State& sb,
                           const std::vector<std::string>& prefix) -> bool {
    bool ga = ta.goal_satisfied(sa);
    bool gb = tb.goal_satisfied(sb);
    if (ga != gb) {
      report.status = EquivalenceReport::Status::Disagree;
      report.sequence = prefix;
      report.step = static_cast<int>(prefix.size());
      report.detail = ga ? "goal satisfied only in reference domain"
                         : "goal satisfied only in candidate domain";
      return false;
    }
    for (std::size_t i = 0; i < ta.actions.size(); ++i) {
      bool in_a = is_applicable(sa, ta.actions[i]);
      bool in_b = a_to_b[i] >= 0 &&
                  is_applicable(sb, tb.actions[static_cast<std::size_t>(a_to_b[i])]);
      if (in_a == in_b) continue;
      report.status = EquivalenceReport::Status::Disagree;
      report.sequence = prefix;
      report.sequence.push_back(ta.actions[i].text);
      report.step = static_cast<int>(prefix.size());
      report.detail = in_a ? "applicable only in reference domain"
                           : "applicable only in candidate domain";
      return false;
    }
    for (std::size_t i = 0; i < tb.actions.size(); ++i) {
      if (b_covered[i]) continue;
      if (!is_applicable(sb, tb.actions[i])) continue;
      report.status = EquivalenceReport::Status::Disagree;
      report.sequence = prefix;
      report.sequence.push_back(tb.actions[i].text);
      report.step = static_cast<int>(prefix.size());
      report.detail = "applicable only in candidate domain (no reference counterpart)";
      return false;
    }
    return true;
  };

  for (int walk = 0; walk < config.n_walks; ++walk) {
    report.walks_run = walk + 1;
    State sa = ta.init;
    State sb = tb.init;
    std::vector<std::string> prefix;
    bool valid_walk = walk % 2 == 0;

    for (int step = 0; step < config.max_len; ++step) {
      if (!compare_state(sa, sb, prefix)) return report;
      if (ta.actions.empty()) break;

      std::size_t chosen;
      if (valid_walk) {
        std::vector<std::size_t> applicable;
        for (std::size_t i = 0; i < ta.actions.size(); ++i)
          if (is_applicable(sa, ta.actions[i])) applicable.push_back(i);
        if (applicable.empty()) break;
        chosen = applicable[pick(applicable.size())];
      } else {
        chosen = pick(ta.actions.size());
        if (!is_applicable(sa, ta.actions[chosen])) break;  // agreed inapplicable
      }
      prefix.push_back(ta.actions[chosen].text);
      sa = apply_unchecked(sa, ta.actions[chosen]);
      sb = apply_unchecked(sb, tb.actions[static_cast<std::size_t>(a_to_b[chosen])]);
    }
    if (!compare_state(sa, sb, prefix)) return report;
  }
  return report;
}

}  // namespace planforge::engine
