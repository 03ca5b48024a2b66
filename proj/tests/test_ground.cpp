#include <algorithm>

#include "doctest.h"
#include "helpers.hpp"
#include "planforge/engine/ground.hpp"
#include "planforge/error.hpp"
#include "planforge/pddl/parser.hpp"

using namespace planforge;
using namespace planforge::engine;

namespace {

pddl::Domain bw() { return pddl::parse_domain(testutil::slurp_fixture("pddl/blocksworld.pddl")); }
pddl::Problem bwp() {
    return pddl::parse_problem(testutil::slurp_fixture("pddl/blocksworld_problem.pddl"));
}

std::size_t count_schema(const GroundTask& t, const std::string& name) {
    std::size_t n = 0;
    for (const auto& a : t.actions) n += a.schema == name;
    return n;
}

}  // namespace

TEST_CASE("ground action counts, three blocks") {
    GroundTask t = ground(bw(), bwp());
    CHECK(t.actions.size() == 24);
    CHECK(count_schema(t, "pickup") == 3);
    CHECK(count_schema(t, "putdown") == 3);
    CHECK(count_schema(t, "stack") == 9);
    CHECK(count_schema(t, "unstack") == 9);
}

TEST_CASE("static equality preconditions filter bindings") {
    pddl::Domain d = pddl::parse_domain(testutil::slurp_fixture("pddl/blocksworld_eq.pddl"));
    pddl::Problem p = bwp();
    p.domain_name = d.name;
    GroundTask t = ground(d, p);
    CHECK(t.actions.size() == 18);
    CHECK(count_schema(t, "stack") == 6);
    CHECK(count_schema(t, "unstack") == 6);
    // the equality literal itself is consumed during grounding
    for (const auto& a : t.actions) {
        CHECK(a.binding.size() == (a.schema == "stack" || a.schema == "unstack" ? 2 : 1));
        if (a.schema == "stack") CHECK(a.binding[0] != a.binding[1]);
    }
}

TEST_CASE("single-action domain grounds to one instance per object") {
    pddl::Domain d =
        pddl::parse_domain(testutil::slurp_fixture("pddl/blocksworld_appendix_domain.pddl"));
    pddl::Problem p = bwp();
    GroundTask t = ground(d, p);
    CHECK(t.actions.size() == 3);
}

TEST_CASE("typed logistics grounding") {
    pddl::Domain d = pddl::parse_domain(testutil::slurp_fixture("pddl/logistics.pddl"));
    pddl::Problem p = pddl::parse_problem(testutil::slurp_fixture("pddl/logistics_problem.pddl"));
    GroundTask t = ground(d, p);
    CHECK(t.actions.size() == 39);  // 3+3+3+3+18+9
    CHECK(count_schema(t, "drive_truck") == 18);
    CHECK(count_schema(t, "fly_plane") == 9);
}

TEST_CASE("atoms are interned in lexicographic text order") {
    GroundTask t = ground(bw(), bwp());
    for (std::size_t i = 1; i < t.atoms.size(); ++i)
        CHECK(t.atoms[i - 1].to_string() < t.atoms[i].to_string());
    for (std::size_t i = 0; i < t.atoms.size(); ++i)
        CHECK(t.atom_id(t.atoms[i].to_string()) == static_cast<int>(i));
    CHECK(t.atom_id("(no such atom)") == -1);
}

TEST_CASE("actions come out schema-major, bindings lexicographic") {
    GroundTask t = ground(bw(), bwp());
    std::vector<std::string> schemas;
    for (const auto& a : t.actions)
        if (schemas.empty() || schemas.back() != a.schema) schemas.push_back(a.schema);
    CHECK(schemas == std::vector<std::string>{"pickup", "putdown", "stack", "unstack"});
    // within one schema the binding tuples are sorted
    std::vector<std::vector<std::string>> stacks;
    for (const auto& a : t.actions)
        if (a.schema == "stack") stacks.push_back(a.binding);
    CHECK(std::is_sorted(stacks.begin(), stacks.end()));
    CHECK(t.action_index("(pickup a)") >= 0);
    CHECK(t.action_index("(pickup zz)") == -1);
}

TEST_CASE("unknown predicates in init and goal survive grounding inert") {
    pddl::Problem p = bwp();
    p.init.push_back(pddl::Atom{"mystery", {"a"}});
    p.goal.push_back(pddl::Literal{pddl::Atom{"mystery", {"a"}}, true});
    GroundTask t = ground(bw(), p);
    int id = t.atom_id("(mystery a)");
    REQUIRE(id >= 0);
    CHECK(t.init.contains(id));
    for (const auto& a : t.actions) {
        CHECK(std::find(a.add.begin(), a.add.end(), id) == a.add.end());
        CHECK(std::find(a.del.begin(), a.del.end(), id) == a.del.end());
    }
}

TEST_CASE("objects typed exactly object are wildcards") {
    pddl::Domain d = pddl::parse_domain(testutil::slurp_fixture("pddl/blocksworld_usage.pddl"));
    pddl::Problem p = pddl::parse_problem(
        "(define (problem q) (:domain blocksworld)\n"
        "  (:objects x - object y - object)\n"
        "  (:init (on_table x) (clear x))\n"
        "  (:goal (and (on_top x y))))");
    GroundTask t = ground(d, p);
    // both objects can fill the arm slot and the block slots
    CHECK(count_schema(t, "pickup") == 4);
    CHECK(count_schema(t, "stack") == 8);

    CHECK(type_compatible(d, "object", "arm"));
    CHECK(type_compatible(d, "arm", "object"));
    CHECK_FALSE(type_compatible(d, "arm", "block"));
}

TEST_CASE("undeclared object types are rejected") {
    pddl::Problem p = bwp();
    p.objects.push_back(pddl::TypedName{"d", "gadget"});
    try {
        ground(bw(), p);
        FAIL("expected TypeMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::TypeMismatch);
    }
}

TEST_CASE("apply is set difference then union") {
    GroundTask t = ground(bw(), bwp());
    int i = t.action_index("(unstack c a)");
    REQUIRE(i >= 0);
    State s1 = apply(t, t.init, t.actions[i]);
    CHECK(s1.contains(t.atom_id("(holding c)")));
    CHECK(s1.contains(t.atom_id("(clear a)")));
    CHECK_FALSE(s1.contains(t.atom_id("(on c a)")));
    CHECK_FALSE(s1.contains(t.atom_id("(arm-empty)")));
    CHECK(std::is_sorted(s1.atoms.begin(), s1.atoms.end()));
    // untouched atoms persist (frame property)
    CHECK(s1.contains(t.atom_id("(on-table a)")));
    CHECK(s1.contains(t.atom_id("(on-table b)")));
}

TEST_CASE("inapplicable actions report the first violated precondition") {
    GroundTask t = ground(bw(), bwp());
    // pickup c: (clear c) holds but (on-table c) does not; declaration
    // order is clear, on-table, arm-empty, so on-table must be named
    int i = t.action_index("(pickup c)");
    REQUIRE(i >= 0);
    try {
        apply(t, t.init, t.actions[i]);
        FAIL("expected Inapplicable");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::Inapplicable);
        CHECK(std::string(e.what()).find("(on-table c)") != std::string::npos);
    }
    CHECK_FALSE(is_applicable(t.init, t.actions[i]));
    CHECK(is_applicable(t.init, t.actions[t.action_index("(pickup b)")]));
}

TEST_CASE("negative preconditions are honored") {
    pddl::Domain d = pddl::parse_domain(
        "(define (domain d) (:requirements :strips :negative-preconditions)\n"
        "  (:predicates (wet ?x) (dry ?x))\n"
        "  (:action dry-off :parameters (?x)\n"
        "   :precondition (and (not (dry ?x))) :effect (and (dry ?x) (not (wet ?x)))))");
    pddl::Problem p = pddl::parse_problem(
        "(define (problem q) (:domain d) (:objects a b)\n"
        "  (:init (dry a) (wet b)) (:goal (and (dry b))))");
    GroundTask t = ground(d, p);
    int dry_a = t.action_index("(dry-off a)");
    int dry_b = t.action_index("(dry-off b)");
    CHECK_FALSE(is_applicable(t.init, t.actions[dry_a]));
    CHECK(is_applicable(t.init, t.actions[dry_b]));
    try {
        apply(t, t.init, t.actions[dry_a]);
        FAIL("expected Inapplicable");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("(not (dry a))") != std::string::npos);
    }
}

TEST_CASE("contradictory effects normalize to the add") {
    pddl::Domain d = pddl::parse_domain(
        "(define (domain d) (:predicates (p ?x))\n"
        "  (:action flip :parameters (?x)\n"
        "   :precondition (and) :effect (and (p ?x) (not (p ?x)))))");
    pddl::Problem p = pddl::parse_problem(
        "(define (problem q) (:domain d) (:objects a) (:init) (:goal (and (p a))))");
    GroundTask t = ground(d, p);
    REQUIRE(t.actions.size() == 1);
    CHECK(t.actions[0].add.size() == 1);
    CHECK(t.actions[0].del.empty());
    State s = apply(t, t.init, t.actions[0]);
    CHECK(s.contains(t.atom_id("(p a)")));
}

TEST_CASE("goal satisfaction, including negative goal literals") {
    pddl::Problem p = bwp();
    p.goal = {pddl::Literal{pddl::Atom{"on", {"c", "a"}}, true},
              pddl::Literal{pddl::Atom{"holding", {"b"}}, false}};
    GroundTask t = ground(bw(), p);
    CHECK(t.goal_satisfied(t.init));
    int i = t.action_index("(pickup b)");
    State s = apply(t, t.init, t.actions[i]);
    CHECK_FALSE(t.goal_satisfied(s));
}
