#include "mtdsim/clairvoyant.hpp"

#include <cmath>
#include <stdexcept>

namespace mtdsim {

AugmentedMdp build_augmented(const AttackGraph& g, const IdsSchedule& schedule,
                             int steps) {
  if (steps < 1)
    throw std::invalid_argument("build_augmented: steps must be >= 1");
  if (schedule.horizon() < steps)
    throw std::invalid_argument("build_augmented: schedule too short");
  AugmentedMdp aug;
  aug.graph_states = g.node_count();
  aug.steps = steps;
  aug.sink_state = g.node_count() * (steps + 1);
  aug.target = g.target_node();
  aug.mdp.actions.resize(aug.sink_state + 1);
  for (int t = 0; t <= steps; ++t) {
    for (int s = 0; s < g.node_count(); ++s) {
      auto& acts = aug.mdp.actions[aug.index_of(s, t)];
      const int n_actions = g.action_count(s);
      if (t == steps || s == aug.target) {
        for (int a = 0; a < n_actions; ++a)
          acts.push_back({TransitionEntry{aug.sink_state, 1.0}});
        continue;
      }
      acts.push_back({TransitionEntry{aug.index_of(s, t + 1), 1.0}});  // Wait
      for (const Exploit& e : g.exploits_at(s)) {
        if (schedule.contains(t + 1, e.target)) {
          acts.push_back({TransitionEntry{aug.sink_state, 1.0}});
        } else if (e.success_prob >= 1.0) {
          acts.push_back({TransitionEntry{aug.index_of(e.target, t + 1), 1.0}});
        } else {
          acts.push_back(
              {TransitionEntry{aug.index_of(e.target, t + 1), e.success_prob},
               TransitionEntry{aug.index_of(s, t + 1), 1.0 - e.success_prob}});
        }
      }
    }
  }
  aug.mdp.actions[aug.sink_state].push_back(
      {TransitionEntry{aug.sink_state, 1.0}});
  return aug;
}

FiniteHorizonProblem augmented_problem(const AugmentedMdp& aug,
                                       double risk_factor, int start_node) {
  if (start_node < 0 || start_node >= aug.graph_states)
    throw std::invalid_argument("augmented_problem: bad start node");
  FiniteHorizonProblem p;
  p.mdp = aug.mdp;
  p.horizon = aug.steps;
  p.risk_factor = risk_factor;
  const int S = aug.mdp.state_count();
  std::vector<double> target_mark(S, 0.0);
  for (int t = 0; t <= aug.steps; ++t)
    target_mark[aug.index_of(aug.target, t)] = 1.0;
  p.immediate.assign(p.horizon, {});
  for (int k = 0; k < p.horizon; ++k) {
    p.immediate[k].resize(S);
    for (int s = 0; s < S; ++s)
      p.immediate[k][s].assign(aug.mdp.action_count(s), target_mark[s]);
  }
  p.terminal = target_mark;
  p.initial_distribution.assign(S, 0.0);
  p.initial_distribution[aug.index_of(start_node, 0)] = 1.0;
  return p;
}

double success_probability_from_value(double value, double risk_factor) {
  return (value - 1.0) / (std::exp(risk_factor) - 1.0);
}

OptimalSolution solve_optimal(const AugmentedMdp& aug, double risk_factor,
                              int start_node) {
  FiniteHorizonProblem p = augmented_problem(aug, risk_factor, start_node);
  OptimalSolution out;
  out.recursion = value_recursion(p);
  out.value = out.recursion.values[0][aug.index_of(start_node, 0)];
  out.success_prob = success_probability_from_value(out.value, risk_factor);
  return out;
}

RiskPolicy induced_online_policy(const AugmentedMdp& aug,
                                 const IdsSchedule& schedule,
                                 PlanCache& cache) {
  const int S = aug.mdp.state_count();
  std::vector<std::vector<double>> rows(S);
  rows[aug.sink_state] = {1.0};
  for (int t = 0; t <= aug.steps; ++t) {
    for (int s = 0; s < aug.graph_states; ++s) {
      const int x = aug.index_of(s, t);
      const int A = aug.mdp.action_count(x);
      if (t == aug.steps || s == aug.target) {
        rows[x].assign(A, 0.0);
        rows[x][0] = 1.0;  // never acted from; Wait keeps the row valid
        continue;
      }
      PlanCache::Lookup plan = cache.plan_for(schedule.at(t), s);
      rows[x] = *plan.first_step;
    }
  }
  RiskPolicy pi;
  pi.action_probs.assign(aug.steps, rows);  // same behaviour at every stage
  return pi;
}

double evaluate_online(const AugmentedMdp& aug, double risk_factor,
                       int start_node, const RiskPolicy& policy) {
  FiniteHorizonProblem p = augmented_problem(aug, risk_factor, start_node);
  return evaluate_policy(p, policy);
}

RegretReport dynamic_regret(const AttackGraph& g, const IdsSchedule& schedule,
                            int plan_horizon, double risk_factor,
                            int eval_horizon, PlanBackend backend,
                            PlanCache* cache) {
  AugmentedMdp aug = build_augmented(g, schedule, eval_horizon);
  std::optional<PlanCache> local;
  if (!cache) {
    local.emplace(g, plan_horizon, risk_factor, backend);
    cache = &*local;
  }
  RegretReport r;
  r.eval_horizon = eval_horizon;
  OptimalSolution opt = solve_optimal(aug, risk_factor, g.initial_node());
  RiskPolicy online = induced_online_policy(aug, schedule, *cache);
  r.optimal_value = opt.value;
  r.online_value =
      evaluate_online(aug, risk_factor, g.initial_node(), online);
  r.regret = std::abs(r.optimal_value - r.online_value);
  r.optimal_success = opt.success_prob;
  r.online_success = success_probability_from_value(r.online_value,
                                                    risk_factor);
  return r;
}

}  // namespace mtdsim
