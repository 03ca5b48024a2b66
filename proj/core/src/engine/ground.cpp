#include "planforge/engine/ground.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "planforge/error.hpp"

namespace planforge::engine {

std::string GroundAtom::to_string() const {
  std::string out = "(" + predicate;
  for (const auto& a : args) out += " " + a;
  out += ")";
  return out;
}

bool State::contains(int id) const {
  return std::binary_search(atoms.begin(), atoms.end(), id);
}

std::size_t StateHash::operator()(const State& s) const {
  std::size_t h = 1469598103934665603ull;
  for (int id : s.atoms) {
    h ^= static_cast<std::size_t>(id) + 0x9e3779b97f4a7c15ull;
    h *= 1099511628211ull;
  }
  return h;
}

int GroundTask::atom_id(const std::string& text) const {
  auto it = atom_ids.find(text);
  return it == atom_ids.end() ? -1 : it->second;
}

std::string GroundTask::atom_text(int id) const {
  if (id < 0 || id >= static_cast<int>(atoms.size())) return "(?)";
  return atoms[static_cast<std::size_t>(id)].to_string();
}

int GroundTask::action_index(const std::string& text) const {
  for (std::size_t i = 0; i < actions.size(); ++i)
    if (actions[i].text == text) return static_cast<int>(i);
  return -1;
}

bool GroundTask::goal_satisfied(const State& s) const {
  for (const auto& [id, positive] : goal)
    if (s.contains(id) != positive) return false;
  return true;
}

bool type_compatible(const pddl::Domain& d, const std::string& obj_type,
                     const std::string& param_type) {
  if (param_type == "object" || obj_type == "object") return true;
  return d.is_subtype(obj_type, param_type);
}

namespace {

struct Builder {
  const pddl::Domain& d;
  const pddl::Problem& p;
  std::map<std::string, GroundAtom> universe;  // text -> atom, lexicographic

  struct PendingAction {
    std::string schema;
    std::vector<std::string> binding;
    std::string text;
    std::vector<std::string> pre_pos, pre_neg, add, del;  // atom texts
    std::vector<std::pair<std::string, bool>> pre_ordered;
  };
  std::vector<PendingAction> pending;

  void add_atom(const GroundAtom& atom) { universe.emplace(atom.to_string(), atom); }

  GroundAtom instantiate(const pddl::Atom& atom,
                         const std::map<std::string, std::string>& binding) const {
    GroundAtom g;
    g.predicate = atom.predicate;
    g.args.reserve(atom.args.size());
    for (const auto& arg : atom.args) {
      auto it = binding.find(arg);
      g.args.push_back(it == binding.end() ? arg : it->second);
    }
    return g;
  }

  void enumerate(const pddl::Action& schema) {
    std::vector<std::vector<std::string>> candidates;
    candidates.reserve(schema.params.size());
    std::vector<std::string> sorted_objects;
    for (const auto& o : p.objects) sorted_objects.push_back(o.name);
    std::sort(sorted_objects.begin(), sorted_objects.end());

    for (const auto& param : schema.params) {
      std::vector<std::string> fits;
      for (const auto& name : sorted_objects) {
        const pddl::TypedName* obj = p.find_object(name);
        if (type_compatible(d, obj->effective_type(), param.effective_type()))
          fits.push_back(name);
      }
      candidates.push_back(std::move(fits));
    }

    std::vector<std::size_t> idx(schema.params.size(), 0);
    std::vector<std::string> binding(schema.params.size());
    bool done = false;
    if (!candidates.empty())
      for (const auto& c : candidates)
        if (c.empty()) done = true;
    while (!done) {
      for (std::size_t i = 0; i < idx.size(); ++i) binding[i] = candidates[i][idx[i]];
      emit(schema, binding);
      std::size_t i = idx.size();
      while (i > 0) {
        --i;
        if (++idx[i] < candidates[i].size()) break;
        idx[i] = 0;
        if (i == 0) done = true;
      }
      if (idx.empty()) break;  // zero-parameter schema grounds exactly once
    }
  }

  void emit(const pddl::Action& schema, const std::vector<std::string>& binding) {
    std::map<std::string, std::string> env;
    for (std::size_t i = 0; i < schema.params.size(); ++i)
      env[schema.params[i].name] = binding[i];

    PendingAction pa;
    pa.schema = schema.name;
    pa.binding = binding;
    pa.text = "(" + schema.name;
    for (const auto& b : binding) pa.text += " " + b;
    pa.text += ")";

    for (const auto& lit : schema.preconditions) {
      if (lit.atom.predicate == "=") {
        const std::string& a = env.count(lit.atom.args[0]) ? env[lit.atom.args[0]] : lit.atom.args[0];
        const std::string& b = env.count(lit.atom.args[1]) ? env[lit.atom.args[1]] : lit.atom.args[1];
        if ((a == b) != lit.positive) return;  // statically false, drop the action
        continue;
      }
      GroundAtom g = instantiate(lit.atom, env);
      std::string text = g.to_string();
      add_atom(g);
      auto& bucket = lit.positive ? pa.pre_pos : pa.pre_neg;
      if (std::find(bucket.begin(), bucket.end(), text) == bucket.end()) {
        bucket.push_back(text);
        pa.pre_ordered.emplace_back(text, lit.positive);
      }
    }
    for (const auto& lit : schema.effects) {
      GroundAtom g = instantiate(lit.atom, env);
      std::string text = g.to_string();
      add_atom(g);
      auto& bucket = lit.positive ? pa.add : pa.del;
      if (std::find(bucket.begin(), bucket.end(), text) == bucket.end())
        bucket.push_back(text);
    }
    // apply() is (s \ del) union add, so a literal both added and deleted
    // behaves as a plain add; normalise to keep add/del disjoint.
    for (const auto& a : pa.add)
      std::erase(pa.del, a);
    pending.push_back(std::move(pa));
  }
};

}  // namespace

GroundTask ground(const pddl::Domain& d, const pddl::Problem& p) {
  for (const auto& o : p.objects)
    if (!o.type.empty() && !d.type_declared(o.type))
      throw Error(Errc::TypeMismatch,
                  "object " + o.name + " has undeclared type " + o.type);

  Builder b{d, p, {}, {}};
  for (const auto& atom : p.init)
    b.add_atom(GroundAtom{atom.predicate, atom.args});
  for (const auto& lit : p.goal)
    b.add_atom(GroundAtom{lit.atom.predicate, lit.atom.args});
  for (const auto& schema : d.actions) b.enumerate(schema);

  GroundTask task;
  task.domain = d;
  task.problem = p;
  task.atoms.reserve(b.universe.size());
  for (const auto& [text, atom] : b.universe) {
    task.atom_ids.emplace(text, static_cast<int>(task.atoms.size()));
    task.atoms.push_back(atom);
  }

  auto ids_of = [&task](const std::vector<std::string>& texts) {
    std::vector<int> ids;
    ids.reserve(texts.size());
    for (const auto& t : texts) ids.push_back(task.atom_ids.at(t));
    std::sort(ids.begin(), ids.end());
    return ids;
  };

  task.actions.reserve(b.pending.size());
  for (auto& pa : b.pending) {
    GroundAction ga;
    ga.schema = std::move(pa.schema);
    ga.binding = std::move(pa.binding);
    ga.text = std::move(pa.text);
    ga.pre_pos = ids_of(pa.pre_pos);
    ga.pre_neg = ids_of(pa.pre_neg);
    ga.add = ids_of(pa.add);
    ga.del = ids_of(pa.del);
    ga.pre_ordered.reserve(pa.pre_ordered.size());
    for (const auto& [text, positive] : pa.pre_ordered)
      ga.pre_ordered.emplace_back(task.atom_ids.at(text), positive);
    task.actions.push_back(std::move(ga));
  }

  std::set<int> init_ids;
  for (const auto& atom : p.init)
    init_ids.insert(task.atom_ids.at(GroundAtom{atom.predicate, atom.args}.to_string()));
  task.init.atoms.assign(init_ids.begin(), init_ids.end());

  for (const auto& lit : p.goal) {
    int id = task.atom_ids.at(GroundAtom{lit.atom.predicate, lit.atom.args}.to_string());
    task.goal.emplace_back(id, lit.positive);
  }
  return task;
}

namespace {

bool subset(const std::vector<int>& needle, const std::vector<int>& hay) {
  std::size_t j = 0;
  for (int id : needle) {
    while (j < hay.size() && hay[j] < id) ++j;
    if (j == hay.size() || hay[j] != id) return false;
  }
  return true;
}

bool disjoint(const std::vector<int>& a, const std::vector<int>& b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) ++i;
    else if (a[i] > b[j]) ++j;
    else return false;
  }
  return true;
}

}  // namespace

bool is_applicable(const State& s, const GroundAction& a) {
  return subset(a.pre_pos, s.atoms) && disjoint(a.pre_neg, s.atoms);
}

State apply_unchecked(const State& s, const GroundAction& a) {
  State out;
  out.atoms.reserve(s.atoms.size() + a.add.size());
  std::set_difference(s.atoms.begin(), s.atoms.end(), a.del.begin(), a.del.end(),
                      std::back_inserter(out.atoms));
  std::vector<int> merged;
  merged.reserve(out.atoms.size() + a.add.size());
  std::set_union(out.atoms.begin(), out.atoms.end(), a.add.begin(), a.add.end(),
                 std::back_inserter(merged));
  out.atoms = std::move(merged);
  return out;
}

State apply(const GroundTask& task, const State& s, const GroundAction& a) {
  for (const auto& [id, positive] : a.pre_ordered) {
    if (s.contains(id) == positive) continue;
    std::string text = task.atom_text(id);
    throw Error(Errc::Inapplicable, positive ? text : "(not " + text + ")");
  }
  return apply_unchecked(s, a);
}

}  // namespace planforge::engine
