#include <benchmark/benchmark.h>

#include "planforge/engine/ground.hpp"
#include "planforge/engine/plan.hpp"
#include "planforge/engine/reachability.hpp"
#include "planforge/engine/search.hpp"
#include "planforge/engine/validate.hpp"
#include "planforge/pddl/formatter.hpp"
#include "planforge/pddl/parser.hpp"

namespace {

const char* kDomain = R"((define (domain blocksworld)
    (:requirements :strips)
    (:predicates (clear ?x) (on-table ?x) (arm-empty) (holding ?x) (on ?x ?y))
    (:action pickup
        :parameters (?ob)
        :precondition (and (clear ?ob) (on-table ?ob) (arm-empty))
        :effect (and (holding ?ob) (not (clear ?ob)) (not (on-table ?ob)) (not (arm-empty)))
    )
    (:action putdown
        :parameters (?ob)
        :precondition (and (holding ?ob))
        :effect (and (clear ?ob) (on-table ?ob) (arm-empty) (not (holding ?ob)))
    )
    (:action stack
        :parameters (?ob ?underob)
        :precondition (and (clear ?underob) (holding ?ob))
        :effect (and (arm-empty) (clear ?ob) (on ?ob ?underob) (not (clear ?underob)) (not (holding ?ob)))
    )
    (:action unstack
        :parameters (?ob ?underob)
        :precondition (and (on ?ob ?underob) (clear ?ob) (arm-empty))
        :effect (and (holding ?ob) (clear ?underob) (not (on ?ob ?underob)) (not (clear ?ob)) (not (arm-empty)))
    )
))";

const char* kProblem = R"((define (problem tower)
    (:domain blocksworld)
    (:objects a b c d)
    (:init (on-table a) (on-table b) (on c a) (on d c) (clear b) (clear d) (arm-empty))
    (:goal (and (on a b) (on b c) (on c d)))
))";

planforge::pddl::Domain domain() { return planforge::pddl::parse_domain(kDomain); }
planforge::pddl::Problem problem() { return planforge::pddl::parse_problem(kProblem); }

void BM_ParseDomain(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(planforge::pddl::parse_domain(kDomain));
}
BENCHMARK(BM_ParseDomain);

void BM_FormatDomain(benchmark::State& state) {
    auto d = domain();
    for (auto _ : state) benchmark::DoNotOptimize(planforge::pddl::format_domain(d));
}
BENCHMARK(BM_FormatDomain);

void BM_Ground(benchmark::State& state) {
    auto d = domain();
    auto p = problem();
    for (auto _ : state) benchmark::DoNotOptimize(planforge::engine::ground(d, p));
}
BENCHMARK(BM_Ground);

void BM_SolveBfs(benchmark::State& state) {
    auto task = planforge::engine::ground(domain(), problem());
    for (auto _ : state) {
        auto r = planforge::engine::solve(task, planforge::engine::SolveLimits{});
        benchmark::DoNotOptimize(r);
    }
}
BENCHMARK(BM_SolveBfs);

void BM_ReachableAtoms(benchmark::State& state) {
    auto task = planforge::engine::ground(domain(), problem());
    for (auto _ : state) benchmark::DoNotOptimize(planforge::engine::reachable_atoms(task));
}
BENCHMARK(BM_ReachableAtoms);

void BM_ValidatePlan(benchmark::State& state) {
    auto task = planforge::engine::ground(domain(), problem());
    auto r = planforge::engine::solve(task, planforge::engine::SolveLimits{});
    for (auto _ : state) benchmark::DoNotOptimize(planforge::engine::validate_plan(task, r.plan));
}
BENCHMARK(BM_ValidatePlan);

}  // namespace

BENCHMARK_MAIN();
