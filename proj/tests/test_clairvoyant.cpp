#include "mtdsim/clairvoyant.hpp"

#include <cmath>

#include "doctest.h"
#include "oracles.hpp"

using namespace mtdsim;

namespace {

AttackGraph chain(int length, double p = 0.9) {
  std::vector<std::vector<Exploit>> table(length);
  for (int s = 0; s + 1 < length; ++s) table[s] = {{s + 1, p}};
  std::vector<int> cands;
  for (int s = 1; s < length; ++s) cands.push_back(s);
  return AttackGraph(length, std::move(table), 0, length - 1, cands);
}

IdsSchedule empty_schedule(int horizon) {
  IdsSchedule s;
  s.placements.assign(horizon + 1, {});
  return s;
}

}  // namespace

TEST_CASE("augmented transitions follow the case precedence") {
  AttackGraph g = chain(3, 1.0);
  IdsSchedule sched;
  sched.placements = {{}, {1}, {}, {}};
  AugmentedMdp aug = build_augmented(g, sched, 3);
  CHECK(aug.mdp.state_count() == 3 * 4 + 1);

  // Final layer: everything falls to the sink.
  for (int s = 0; s < 3; ++s)
    for (int a = 0; a < aug.mdp.action_count(aug.index_of(s, 3)); ++a)
      CHECK(aug.mdp.row(aug.index_of(s, 3), a)[0].next == aug.sink_state);
  // Target layer states sink too (reward already banked).
  CHECK(aug.mdp.row(aug.index_of(2, 1), 0)[0].next == aug.sink_state);
  // Exploit 0 -> 1 at t = 0 walks into the placement at t = 1: sink.
  CHECK(aug.mdp.row(aug.index_of(0, 0), 1)[0].next == aug.sink_state);
  // Same exploit at t = 1 is clear and advances a layer.
  CHECK(aug.mdp.row(aug.index_of(0, 1), 1)[0].next == aug.index_of(1, 2));
  // Wait advances time, nothing else.
  CHECK(aug.mdp.row(aug.index_of(0, 0), 0)[0].next == aug.index_of(0, 1));
  CHECK_THROWS_AS(build_augmented(g, sched, 9), std::invalid_argument);
}

TEST_CASE("clairvoyant value on an empty schedule equals the static plan") {
  AttackGraph g = chain(2);
  AugmentedMdp aug = build_augmented(g, empty_schedule(2), 2);
  OptimalSolution opt = solve_optimal(aug, 1.0, 0);
  const double expected = 0.99 * std::exp(1.0) + 0.01;
  CHECK(opt.value == doctest::Approx(expected).epsilon(1e-12));
  CHECK(opt.success_prob == doctest::Approx(0.99).epsilon(1e-12));
}

TEST_CASE("success probability identity is exact for policies") {
  AttackGraph g = chain(3);
  IdsSchedule sched = empty_schedule(4);
  AugmentedMdp aug = build_augmented(g, sched, 4);
  PlanCache cache(g, 4, 1.0, PlanBackend::GreedyRecursion);
  RiskPolicy online = induced_online_policy(aug, sched, cache);
  double value = evaluate_online(aug, 1.0, 0, online);
  double p_identity = success_probability_from_value(value, 1.0);

  // Independent forward computation of the success probability.
  std::vector<std::vector<std::vector<double>>> rows(
      4, std::vector<std::vector<double>>(g.node_count()));
  for (int t = 0; t < 4; ++t)
    for (int s = 0; s < g.node_count(); ++s)
      rows[t][s] = *cache.plan_for(sched.at(t), s).first_step;
  double p_forward = oracle::forward_success_probability(g, sched, 4, rows);
  CHECK(p_identity == doctest::Approx(p_forward).epsilon(1e-12));
}

TEST_CASE("optimal beats or matches the online attacker") {
  AttackGraph g(4, {{{1, 0.8}, {2, 0.6}}, {{3, 0.8}}, {{3, 0.7}}, {}}, 0, 3,
                {1, 2});
  DefenseConfig cfg;
  cfg.candidates = g.ids_candidates();
  cfg.ids_count = 1;
  cfg.resample_period = 2;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    IdsSchedule sched = build_schedule(cfg, 6, seed);
    RegretReport r = dynamic_regret(g, sched, 3, 1.0, 6,
                                    PlanBackend::GreedyRecursion);
    CHECK(r.optimal_value >= r.online_value - 1e-9);
    CHECK(r.regret >= 0.0);
    CHECK(r.optimal_success >= -1e-12);
    CHECK(r.optimal_success <= 1.0 + 1e-12);
    CHECK(r.online_success >= -1e-12);
    CHECK(r.online_success <= r.optimal_success + 1e-9);
  }
}

TEST_CASE("clairvoyant evades a fully known alternating schedule") {
  // Monitors alternate 1, 2, 1, 2...  The clairvoyant times its two hops to
  // stay a step behind the roamer; the myopic online attacker walks into it
  // more often.
  AttackGraph g = chain(3, 1.0);
  IdsSchedule sched;
  for (int t = 0; t <= 6; ++t)
    sched.placements.push_back(t % 2 == 0 ? std::vector<int>{1}
                                          : std::vector<int>{2});
  RegretReport r =
      dynamic_regret(g, sched, 4, 1.0, 6, PlanBackend::GreedyRecursion);
  // Timing the hops right reaches the target with certainty.
  CHECK(r.optimal_success == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(r.regret >= 0.0);
}

TEST_CASE("online value agrees with the trajectory-enumeration oracle") {
  AttackGraph g = chain(3);
  DefenseConfig cfg;
  cfg.candidates = g.ids_candidates();
  cfg.ids_count = 1;
  cfg.resample_period = 1;
  IdsSchedule sched = build_schedule(cfg, 4, 17);
  AugmentedMdp aug = build_augmented(g, sched, 4);
  PlanCache cache(g, 3, 1.0, PlanBackend::GreedyRecursion);
  RiskPolicy online = induced_online_policy(aug, sched, cache);
  FiniteHorizonProblem p = augmented_problem(aug, 1.0, 0);
  CHECK(evaluate_online(aug, 1.0, 0, online) ==
        doctest::Approx(oracle::enumerate_exp_utility(p, online))
            .epsilon(1e-12));
}

TEST_CASE("regret uses the shared truncation") {
  AttackGraph g = chain(4);
  DefenseConfig cfg;
  cfg.candidates = g.ids_candidates();
  cfg.ids_count = 1;
  cfg.resample_period = 3;
  IdsSchedule sched = build_schedule(cfg, 8, 3);
  RegretReport r =
      dynamic_regret(g, sched, 5, 1.0, 8, PlanBackend::GreedyRecursion);
  CHECK(r.eval_horizon == 8);
  CHECK(r.regret == doctest::Approx(std::abs(r.optimal_value -
                                             r.online_value)));
}
