#include "mtdsim/attacker_planner.hpp"

#include <cmath>

#include "doctest.h"
#include "oracles.hpp"

using namespace mtdsim;

namespace {

AttackGraph chain(int length, double p = 0.9) {
  std::vector<std::vector<Exploit>> table(length);
  for (int s = 0; s + 1 < length; ++s) table[s] = {{s + 1, p}};
  return AttackGraph(length, std::move(table), 0, length - 1, {});
}

}  // namespace

TEST_CASE("planner MDP shape and the monitor rewrite") {
  AttackGraph g(3, {{{1, 0.9}, {2, 0.8}}, {{2, 0.9}}, {}}, 0, 2, {1, 2});
  PlannerMdp pm = build_planner_mdp(g, {1});
  CHECK(pm.graph_states == 3);
  CHECK(pm.sink_state == 3);
  CHECK(pm.mdp.state_count() == 4);
  // Wait self-loops and is never redirected.
  REQUIRE(pm.mdp.row(0, 0).size() == 1);
  CHECK(pm.mdp.row(0, 0)[0].next == 0);
  // Exploit into the monitored node 1 drops straight to the sink.
  REQUIRE(pm.mdp.row(0, 1).size() == 1);
  CHECK(pm.mdp.row(0, 1)[0].next == pm.sink_state);
  CHECK(pm.mdp.row(0, 1)[0].prob == 1.0);
  // Exploit into unmonitored node 2 keeps its success/failure split.
  REQUIRE(pm.mdp.row(0, 2).size() == 2);
  CHECK(pm.mdp.row(0, 2)[0].next == 2);
  CHECK(pm.mdp.row(0, 2)[0].prob == doctest::Approx(0.8));
  CHECK(pm.mdp.row(0, 2)[1].next == 0);
  // The sink only waits on itself.
  CHECK(pm.mdp.action_count(pm.sink_state) == 1);
  CHECK(pm.mdp.row(pm.sink_state, 0)[0].next == pm.sink_state);
  CHECK_THROWS_AS(build_planner_mdp(g, {7}), std::invalid_argument);
}

TEST_CASE("rewards are zero along the way and 1 on the target at the end") {
  AttackGraph g = chain(3);
  PlannerMdp pm = build_planner_mdp(g, {});
  PlanRewards r = make_rewards(pm, 4);
  CHECK(r.immediate.size() == 4);
  for (const auto& stage : r.immediate)
    for (const auto& row : stage)
      for (double v : row) CHECK(v == 0.0);
  CHECK(r.terminal[2] == 1.0);
  CHECK(r.terminal[0] == 0.0);
  CHECK(r.terminal[pm.sink_state] == 0.0);
}

TEST_CASE("plan_step greedy matches the hand value on the 2-chain") {
  AttackGraph g = chain(2);
  PlanningStep step =
      plan_step(g, {}, 0, 2, 1.0, PlanBackend::GreedyRecursion);
  CHECK(step.value ==
        doctest::Approx(0.99 * std::exp(1.0) + 0.01).epsilon(1e-12));
  CHECK(step.horizon == 2);
  CHECK(step.policy.action_probs[0][0][1] == 1.0);  // fire the exploit
}

TEST_CASE("both backends agree on plan value") {
  AttackGraph g(4, {{{1, 0.9}, {2, 0.7}}, {{3, 0.9}}, {{3, 0.6}}, {}}, 0, 3,
                {1, 2});
  for (std::vector<int> observed : {std::vector<int>{}, {1}, {2}, {1, 2}}) {
    PlanningStep greedy =
        plan_step(g, observed, 0, 3, 1.0, PlanBackend::GreedyRecursion);
    PlanningStep dual = plan_step(g, observed, 0, 3, 1.0, PlanBackend::DualLp);
    CHECK(dual.value == doctest::Approx(greedy.value).epsilon(1e-9));
  }
}

TEST_CASE("plan value agrees with brute-force policy enumeration") {
  AttackGraph g(3, {{{1, 0.9}, {2, 0.5}}, {{2, 0.9}}, {}}, 0, 2, {1});
  for (std::vector<int> observed : {std::vector<int>{}, {1}}) {
    FiniteHorizonProblem p = build_planning_problem(g, observed, 0, 3, 1.0);
    PlanningStep step =
        plan_step(g, observed, 0, 3, 1.0, PlanBackend::GreedyRecursion);
    CHECK(step.value ==
          doctest::Approx(oracle::enumerate_optimal(p)).epsilon(1e-12));
  }
}

TEST_CASE("target out of reach within the horizon gives plan value 1") {
  AttackGraph g = chain(5);  // four hops to the target
  PlanningStep step =
      plan_step(g, {}, 0, 3, 1.0, PlanBackend::GreedyRecursion);
  CHECK(step.value == 1.0);  // exactly: no path collects any reward
  PlanningStep dual = plan_step(g, {}, 0, 3, 1.0, PlanBackend::DualLp);
  CHECK(dual.value == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("planning from the target itself holds still") {
  AttackGraph g = chain(3);
  PlanningStep step =
      plan_step(g, {}, 2, 4, 1.0, PlanBackend::GreedyRecursion);
  CHECK(step.value == doctest::Approx(std::exp(1.0)).epsilon(1e-12));
}

TEST_CASE("a fully pinned attacker prefers Wait over lunging at the sink") {
  // Single outgoing exploit, permanently monitored: Waiting forever and
  // jumping into the monitor both score exp(0); the tie must go to Wait.
  AttackGraph g = chain(2);
  PlanningStep step =
      plan_step(g, {1}, 0, 5, 1.0, PlanBackend::GreedyRecursion);
  CHECK(step.value == 1.0);
  for (int k = 0; k < 5; ++k)
    CHECK(step.policy.action_probs[k][0][0] == 1.0);  // Wait, every stage
}

TEST_CASE("plan cache returns consistent plans across backends") {
  AttackGraph g(4, {{{1, 0.9}, {2, 0.7}}, {{3, 0.9}}, {{3, 0.6}}, {}}, 0, 3,
                {1, 2});
  for (PlanBackend backend :
       {PlanBackend::GreedyRecursion, PlanBackend::DualLp}) {
    PlanCache cache(g, 3, 1.0, backend);
    PlanCache::Lookup first = cache.plan_for({1}, 0);
    PlanCache::Lookup again = cache.plan_for({1}, 0);
    CHECK(first.first_step == again.first_step);  // same cached row
    PlanningStep fresh = plan_step(g, {1}, 0, 3, 1.0, backend);
    CHECK(first.value == doctest::Approx(fresh.value).epsilon(1e-9));
    // Greedy plans are shared across states; the value must still be the
    // state's own.
    PlanCache::Lookup other = cache.plan_for({1}, 1);
    PlanningStep fresh1 = plan_step(g, {1}, 1, 3, 1.0, backend);
    CHECK(other.value == doctest::Approx(fresh1.value).epsilon(1e-9));
  }
}

TEST_CASE("long lookaheads still designate motion despite saturated backups") {
  // Six hops at p = 0.9 under a 19-step lookahead: the retry slack is so
  // generous that "fire now" and "idle a step" round to the same double, and
  // a bare lowest-index rule replanned every step would idle forever.
  AttackGraph g = chain(7);
  PlanningStep step =
      plan_step(g, {}, 0, 19, 1.0, PlanBackend::GreedyRecursion);
  CHECK(step.value > 1.0);
  CHECK(step.policy.action_probs[0][0][1] == 1.0);  // fire, don't idle
  PlanCache cache(g, 19, 1.0, PlanBackend::GreedyRecursion);
  for (int node = 0; node + 1 < g.node_count(); ++node) {
    PlanCache::Lookup look = cache.plan_for({}, node);
    CHECK(look.value > 1.0);
    CHECK((*look.first_step)[1] == 1.0);
  }
}

TEST_CASE("the dual backend gets the same saturation tie handling") {
  AttackGraph g = chain(4);
  PlanningStep step = plan_step(g, {}, 0, 19, 1.0, PlanBackend::DualLp);
  CHECK(step.value > 1.0);
  CHECK(step.policy.action_probs[0][0][0] == 0.0);  // no weight left on Wait
  CHECK(step.policy.action_probs[0][0][1] == 1.0);
}

TEST_CASE("the motion preference never moves the plan off the target") {
  // Target with an outgoing exploit whose detour can re-reach it: at long
  // horizons the detour's backup can round up to exp(lam) as well, but the
  // plan row on the target must stay Wait.
  AttackGraph g(3, {{{1, 0.9}}, {{2, 0.9}}, {{0, 0.9}}}, 0, 2, {});
  PlanningStep step =
      plan_step(g, {}, 2, 19, 1.0, PlanBackend::GreedyRecursion);
  CHECK(step.value == doctest::Approx(std::exp(1.0)).epsilon(1e-12));
  for (int k = 0; k < 19; ++k)
    CHECK(step.policy.action_probs[k][2][0] == 1.0);
}

TEST_CASE("build_planning_problem wires the point mass and risk factor") {
  AttackGraph g = chain(3);
  FiniteHorizonProblem p = build_planning_problem(g, {}, 1, 2, 0.5);
  CHECK(p.risk_factor == 0.5);
  CHECK(p.initial_distribution[1] == 1.0);
  CHECK(p.horizon == 2);
  CHECK_THROWS_AS(build_planning_problem(g, {}, 9, 2, 1.0),
                  std::invalid_argument);
}
