#include "doctest.h"
#include "helpers.hpp"
#include "planforge/error.hpp"
#include "planforge/pddl/parser.hpp"

using namespace planforge;
using namespace planforge::pddl;

TEST_CASE("published blocksworld domain parses to the expected shape") {
    Domain d = parse_domain(testutil::slurp_fixture("pddl/blocksworld_appendix_domain.pddl"));
    CHECK(d.name == "blocksworld");
    REQUIRE(d.requirements.size() == 1);
    CHECK(d.requirements[0] == ":strips");
    REQUIRE(d.predicates.size() == 5);
    CHECK(d.predicates[0].name == "clear");
    CHECK(d.predicates[1].name == "on-table");
    CHECK(d.predicates[2].name == "arm-empty");
    CHECK(d.predicates[2].arity() == 0);
    CHECK(d.predicates[4].name == "on");
    CHECK(d.predicates[4].arity() == 2);
    REQUIRE(d.actions.size() == 1);
    const Action& pickup = d.actions[0];
    CHECK(pickup.name == "pickup");
    REQUIRE(pickup.params.size() == 1);
    CHECK(pickup.params[0].name == "?ob");
    CHECK(pickup.params[0].type.empty());  // untyped in the source
    CHECK(pickup.params[0].effective_type() == "object");
    REQUIRE(pickup.preconditions.size() == 3);
    CHECK(pickup.preconditions[0].atom.predicate == "clear");
    REQUIRE(pickup.effects.size() == 4);
    CHECK(pickup.effects[0].positive);
    CHECK_FALSE(pickup.effects[1].positive);
}

TEST_CASE("published blocksworld problem parses to the expected shape") {
    Problem p = parse_problem(testutil::slurp_fixture("pddl/blocksworld_appendix_problem.pddl"));
    CHECK(p.name == "blocksworld-problem");
    CHECK(p.domain_name == "blocksworld");
    REQUIRE(p.objects.size() == 3);
    CHECK(p.objects[0].name == "a");  // folded to lower case
    CHECK(p.objects[0].type.empty());
    CHECK(p.init.size() == 5);
    REQUIRE(p.goal.size() == 2);
    CHECK(p.goal[0].atom.to_string() == "(on a b)");
    CHECK(p.goal[1].atom.to_string() == "(on b c)");
}

TEST_CASE("case folding and comments") {
    Domain d = parse_domain("(DEFINE (Domain FOO) ; shouting\n"
                            "  (:Requirements :STRIPS)\n"
                            "  (:predicates (P ?X)))");
    CHECK(d.name == "foo");
    CHECK(d.requirements[0] == ":strips");
    CHECK(d.predicates[0].name == "p");
    CHECK(d.predicates[0].params[0].name == "?x");
}

TEST_CASE("type forest parents are stored explicitly") {
    Domain d = parse_domain("(define (domain t) (:requirements :typing)\n"
                            "  (:types a b - object c - a)\n"
                            "  (:predicates (p ?x - c)))");
    REQUIRE(d.types.size() == 3);
    CHECK(d.types[0] == TypedName{"a", "object"});
    CHECK(d.types[1] == TypedName{"b", "object"});
    CHECK(d.types[2] == TypedName{"c", "a"});
    CHECK(d.is_subtype("c", "a"));
    CHECK(d.is_subtype("c", "object"));
    CHECK_FALSE(d.is_subtype("a", "c"));
    CHECK(d.is_subtype("object", "object"));
}

TEST_CASE("init atoms are deduplicated, goal keeps order") {
    Problem p = parse_problem("(define (problem q) (:domain d)\n"
                              "  (:objects a b)\n"
                              "  (:init (on a b) (on a b) (clear a))\n"
                              "  (:goal (and (clear a) (on a b))))");
    CHECK(p.init.size() == 2);
    CHECK(p.goal[0].atom.predicate == "clear");
}

TEST_CASE("goal without and-wrapper and negative goal literals") {
    Problem p = parse_problem("(define (problem q) (:domain d) (:objects a)\n"
                              "  (:init) (:goal (not (clear a))))");
    REQUIRE(p.goal.size() == 1);
    CHECK_FALSE(p.goal[0].positive);
}

TEST_CASE("unsupported features are named") {
    SUBCASE("requirement flag") {
        CHECK_THROWS_WITH_AS(parse_domain("(define (domain d) (:requirements :adl))"),
                             doctest::Contains(":adl"), Error);
        try {
            parse_domain("(define (domain d) (:requirements :adl))");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::UnsupportedFeature);
        }
    }
    SUBCASE("disjunction") {
        try {
            parse_domain("(define (domain d) (:predicates (p ?x))\n"
                         "  (:action a :parameters (?x)\n"
                         "   :precondition (or (p ?x)) :effect (and (p ?x))))");
            FAIL("expected UnsupportedFeature");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::UnsupportedFeature);
        }
    }
    SUBCASE("quantifier") {
        try {
            parse_domain("(define (domain d) (:predicates (p ?x))\n"
                         "  (:action a :parameters (?x)\n"
                         "   :precondition (forall (?y) (p ?y)) :effect (and (p ?x))))");
            FAIL("expected UnsupportedFeature");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::UnsupportedFeature);
        }
    }
    SUBCASE("object constant in an action body") {
        try {
            parse_domain("(define (domain d) (:predicates (p ?x))\n"
                         "  (:action a :parameters (?x)\n"
                         "   :precondition (and (p table)) :effect (and (p ?x))))");
            FAIL("expected UnsupportedFeature");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::UnsupportedFeature);
        }
    }
}

TEST_CASE("equality is precondition-only") {
    const char* ok =
        "(define (domain d) (:requirements :strips :equality)\n"
        "  (:predicates (p ?x ?y))\n"
        "  (:action a :parameters (?x ?y)\n"
        "   :precondition (and (not (= ?x ?y)) (p ?x ?y)) :effect (and (p ?y ?x))))";
    Domain d = parse_domain(ok);
    CHECK(d.actions[0].preconditions[0].atom.predicate == "=");

    const char* bad =
        "(define (domain d) (:predicates (p ?x ?y))\n"
        "  (:action a :parameters (?x ?y)\n"
        "   :precondition (and (p ?x ?y)) :effect (and (= ?x ?y))))";
    try {
        parse_domain(bad);
        FAIL("expected SyntaxError");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::SyntaxError);
    }

    try {
        parse_problem("(define (problem q) (:domain d) (:objects a)\n"
                      "  (:init (= a a)) (:goal (and (p a))))");
        FAIL("expected UnsupportedFeature");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::UnsupportedFeature);
    }
}

TEST_CASE("negative init literals are rejected, closed world") {
    try {
        parse_problem("(define (problem q) (:domain d) (:objects a)\n"
                      "  (:init (not (clear a))) (:goal (and (clear a))))");
        FAIL("expected SyntaxError");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::SyntaxError);
    }
}

TEST_CASE("syntax errors carry a position") {
    try {
        parse_domain("(define (domain d)\n  (:predicates (p ?x)");
        FAIL("expected SyntaxError");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::SyntaxError);
        CHECK(e.line() >= 1);
    }
    try {
        parse_domain("");
        FAIL("expected SyntaxError");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::SyntaxError);
    }
}

TEST_CASE("condition text parsing for builder output") {
    auto lits = parse_condition_text("(and (clear ?x) (not (on ?x ?y)))");
    REQUIRE(lits.size() == 2);
    CHECK(lits[0].positive);
    CHECK_FALSE(lits[1].positive);

    auto single = parse_condition_text("(clear ?x)");
    CHECK(single.size() == 1);

    auto ground = parse_ground_condition_text("(and (on a b))");
    REQUIRE(ground.size() == 1);
    CHECK(ground[0].atom.args == std::vector<std::string>{"a", "b"});
    CHECK_THROWS_AS(parse_ground_condition_text("(and (on ?x b))"), Error);
}

TEST_CASE("predicate signature lines") {
    Predicate p = parse_predicate_signature(
        "(truck-at ?t - truck ?l - location): true if the truck ?t is currently at location ?l");
    CHECK(p.name == "truck-at");
    REQUIRE(p.params.size() == 2);
    CHECK(p.params[0] == TypedName{"?t", "truck"});
    CHECK(p.params[1] == TypedName{"?l", "location"});
    CHECK(p.desc == "true if the truck ?t is currently at location ?l");
    CHECK(p.clean() ==
          "(truck-at ?t - truck ?l - location): true if the truck ?t is currently at location ?l");

    Predicate bare = parse_predicate_signature("(arm-empty)");
    CHECK(bare.arity() == 0);
    CHECK(bare.clean() == "(arm-empty)");

    Predicate untyped = parse_predicate_signature("(on ?x ?y)");
    CHECK(untyped.params[0].type.empty());
    CHECK(untyped.clean() == "(on ?x ?y)");

    CHECK_THROWS_AS(parse_predicate_signature("truck-at ?t"), Error);
    CHECK_THROWS_AS(parse_predicate_signature("(truck-at ?t - )"), Error);
    CHECK_THROWS_AS(parse_predicate_signature("(on ?x ?x)"), Error);
    try {
        parse_predicate_signature("(= ?x ?y)");
        FAIL("expected MalformedSignature");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::MalformedSignature);
    }
}

TEST_CASE("tokenize is whitespace and comment insensitive") {
    auto a = tokenize("(on A b) ; trailing");
    auto b = tokenize("( on\n  a   b )");
    CHECK(a == b);
    REQUIRE(a.size() == 5);
    CHECK(a[0] == "(");
    CHECK(a[1] == "on");
    CHECK(a[4] == ")");
}
