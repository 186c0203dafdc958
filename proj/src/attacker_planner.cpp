#include "mtdsim/attacker_planner.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mtdsim {

namespace {

bool is_observed(const std::vector<int>& observed, int node) {
  return std::find(observed.begin(), observed.end(), node) != observed.end();
}

// Backup coefficient b(k, s, a) recomputed with the same loop order and the
// same expressions as value_recursion, so equal values compare equal under
// operator== on doubles.
double backup_coeff(const FiniteHorizonProblem& p,
                    const std::vector<std::vector<double>>& values,
                    const std::vector<double>& term, int k, int s, int a) {
  double sum = 0.0;
  if (k == p.horizon - 1) {
    for (const TransitionEntry& e : p.mdp.row(s, a)) sum += e.prob * term[e.next];
  } else {
    for (const TransitionEntry& e : p.mdp.row(s, a))
      sum += e.prob * values[k + 1][e.next];
  }
  return std::exp(p.risk_factor * p.immediate[k][s][a]) * sum;
}

// With long lookaheads the backups saturate: once the failure tail of "try
// the next hop now" drops below one ulp of the reachable optimum, acting and
// idling compare equal in double precision, so a plan can put weight on Wait
// -- which, replanned every step, never fires at all.  Under exact
// arithmetic an exploit strictly beats Wait at every non-target state whose
// value exceeds the idle utility exp(lam*0) = 1 (attempting a hop one step
// earlier only adds retry slack), so any Wait weight at such a state is
// moved onto the lowest-indexed exploit among the tied maximizers.  States
// worth exactly 1 (target out of reach, or every usable route monitored)
// keep Wait: a pinned attacker waits out the clock rather than walking into
// the IDS.  `values` must be the value_recursion table for `p`.
void prefer_motion_on_ties(const FiniteHorizonProblem& p, int target_state,
                           const std::vector<std::vector<double>>& values,
                           RiskPolicy& policy) {
  std::vector<double> term(p.terminal.size());
  for (size_t j = 0; j < p.terminal.size(); ++j)
    term[j] = std::exp(p.risk_factor * p.terminal[j]);
  for (int k = 0; k < p.horizon; ++k) {
    for (int s = 0; s < p.mdp.state_count(); ++s) {
      if (s == target_state) continue;
      auto& row = policy.action_probs[k][s];
      if (row[0] == 0.0) continue;        // no Wait weight: already moving
      if (!(values[k][s] > 1.0)) continue;  // idle-valued: Wait is right
      for (int a = 1; a < p.mdp.action_count(s); ++a) {
        if (backup_coeff(p, values, term, k, s, a) == values[k][s]) {
          std::fill(row.begin(), row.end(), 0.0);
          row[a] = 1.0;
          break;
        }
      }
    }
  }
}

}  // namespace

PlannerMdp build_planner_mdp(const AttackGraph& g,
                             const std::vector<int>& observed_ids) {
  for (int node : observed_ids)
    if (node < 0 || node >= g.node_count())
      throw std::invalid_argument("build_planner_mdp: observed node invalid");
  PlannerMdp pm;
  pm.graph_states = g.node_count();
  pm.sink_state = g.node_count();
  pm.target_state = g.target_node();
  pm.mdp.actions.resize(g.node_count() + 1);
  for (int s = 0; s < g.node_count(); ++s) {
    auto& acts = pm.mdp.actions[s];
    acts.push_back({TransitionEntry{s, 1.0}});  // Wait
    for (const Exploit& e : g.exploits_at(s)) {
      if (is_observed(observed_ids, e.target)) {
        acts.push_back({TransitionEntry{pm.sink_state, 1.0}});
      } else if (e.success_prob >= 1.0) {
        acts.push_back({TransitionEntry{e.target, 1.0}});
      } else {
        acts.push_back({TransitionEntry{e.target, e.success_prob},
                        TransitionEntry{s, 1.0 - e.success_prob}});
      }
    }
  }
  pm.mdp.actions[pm.sink_state].push_back(
      {TransitionEntry{pm.sink_state, 1.0}});
  return pm;
}

PlanRewards make_rewards(const PlannerMdp& pm, int horizon) {
  if (horizon < 1)
    throw std::invalid_argument("make_rewards: horizon must be >= 1");
  PlanRewards r;
  const int S = pm.mdp.state_count();
  r.immediate.assign(horizon, {});
  for (int k = 0; k < horizon; ++k) {
    r.immediate[k].resize(S);
    for (int s = 0; s < S; ++s)
      r.immediate[k][s].assign(pm.mdp.action_count(s), 0.0);
  }
  r.terminal.assign(S, 0.0);
  r.terminal[pm.target_state] = 1.0;
  return r;
}

FiniteHorizonProblem build_planning_problem(
    const AttackGraph& g, const std::vector<int>& observed_ids,
    int current_state, int horizon, double risk_factor) {
  if (current_state < 0 || current_state >= g.node_count())
    throw std::invalid_argument("build_planning_problem: bad current state");
  PlannerMdp pm = build_planner_mdp(g, observed_ids);
  PlanRewards rw = make_rewards(pm, horizon);
  FiniteHorizonProblem p;
  p.mdp = std::move(pm.mdp);
  p.horizon = horizon;
  p.immediate = std::move(rw.immediate);
  p.terminal = std::move(rw.terminal);
  p.risk_factor = risk_factor;
  p.initial_distribution.assign(p.mdp.state_count(), 0.0);
  p.initial_distribution[current_state] = 1.0;
  return p;
}

PlanningStep plan_step(const AttackGraph& g,
                       const std::vector<int>& observed_ids, int current_state,
                       int horizon, double risk_factor, PlanBackend backend,
                       int time) {
  FiniteHorizonProblem p = build_planning_problem(g, observed_ids,
                                                  current_state, horizon,
                                                  risk_factor);
  p.start_time = time;
  PlanningStep step;
  step.observed_ids = observed_ids;
  step.time = time;
  step.horizon = horizon;
  if (backend == PlanBackend::GreedyRecursion) {
    ValueRecursionResult r = value_recursion(p);
    prefer_motion_on_ties(p, g.target_node(), r.values, r.policy);
    step.policy = std::move(r.policy);
    step.value = r.values[0][current_state];
  } else {
    LpSolution sol = solve(build_dual_lp(p));
    if (sol.status != LpStatus::Optimal)
      throw std::runtime_error("plan_step: dual LP did not solve");
    step.policy = extract_policy(p.mdp, occupation_from_dual(p, sol));
    step.policy.start_time = time;
    step.value = sol.objective_value;
    // Same Wait handling as the greedy backend; the LP may still pick a
    // different exploit among equally good ones, but it must not stall.
    ValueRecursionResult r = value_recursion(p);
    prefer_motion_on_ties(p, g.target_node(), r.values, step.policy);
  }
  return step;
}

PlanCache::PlanCache(AttackGraph g, int horizon, double risk_factor,
                     PlanBackend backend)
    : graph_(std::move(g)),
      horizon_(horizon),
      risk_factor_(risk_factor),
      backend_(backend) {}

PlanCache::Lookup PlanCache::plan_for(const std::vector<int>& placement,
                                      int state) {
  if (backend_ == PlanBackend::GreedyRecursion) {
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = greedy_.find(placement);
      if (it != greedy_.end())
        return {&it->second->policy.action_probs[0][state],
                it->second->initial_values[state]};
    }
    FiniteHorizonProblem p =
        build_planning_problem(graph_, placement, graph_.initial_node(),
                               horizon_, risk_factor_);
    ValueRecursionResult r = value_recursion(p);
    prefer_motion_on_ties(p, graph_.target_node(), r.values, r.policy);
    auto plan = std::make_shared<GreedyPlan>();
    plan->policy = std::move(r.policy);
    plan->initial_values = std::move(r.values[0]);
    std::lock_guard<std::mutex> lock(mu_);
    auto [it, inserted] = greedy_.emplace(placement, std::move(plan));
    return {&it->second->policy.action_probs[0][state],
            it->second->initial_values[state]};
  }
  const auto key = std::make_pair(placement, state);
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = dual_.find(key);
    if (it != dual_.end())
      return {&it->second->policy.action_probs[0][state], it->second->value};
  }
  auto plan = std::make_shared<PlanningStep>(
      plan_step(graph_, placement, state, horizon_, risk_factor_, backend_));
  std::lock_guard<std::mutex> lock(mu_);
  auto [it, inserted] = dual_.emplace(key, std::move(plan));
  return {&it->second->policy.action_probs[0][state], it->second->value};
}

}  // namespace mtdsim
