#pragma once

#include <vector>

#include "mtdsim/attack_graph.hpp"
#include "mtdsim/attacker_planner.hpp"
#include "mtdsim/defense.hpp"
#include "mtdsim/risk_solver.hpp"

namespace mtdsim {

// Time-augmented MDP for a *known* monitor schedule: states are (node, t)
// for t = 0..steps plus one absorbing sink.  The reward of 1 for reaching
// the target is paid exactly once -- as an immediate reward when acting at a
// target state (which then drops to the sink) or as a terminal reward when
// the run ends on the target -- so the exponential utility J of any policy
// obeys J = 1 + (e^lambda - 1) * P(success), and success probabilities fall
// out of values exactly.
//
// Transitions from (s, t), first matching case wins:
//   1. t = steps           -> sink (episode over)
//   2. s = target          -> sink (success banked)
//   3. exploit whose target is monitored at t+1 -> sink (detection)
//   4. otherwise Wait -> (s, t+1); an exploit succeeds to (target, t+1) or
//      fails in place to (s, t+1).
struct AugmentedMdp {
  Mdp mdp;
  int graph_states = 0;
  int steps = 0;       // layers 0..steps
  int sink_state = 0;
  int target = 0;

  int index_of(int node, int t) const { return t * graph_states + node; }
};

// Requires schedule coverage of 0..steps.
AugmentedMdp build_augmented(const AttackGraph& g, const IdsSchedule& schedule,
                             int steps);

// The augmented MDP as a finite-horizon risk problem (horizon = steps),
// started from (start_node, 0).
FiniteHorizonProblem augmented_problem(const AugmentedMdp& aug,
                                       double risk_factor, int start_node);

// P(success) recovered from an exponential utility via the affine identity.
double success_probability_from_value(double value, double risk_factor);

struct OptimalSolution {
  double value = 0.0;         // from (start_node, 0)
  double success_prob = 0.0;
  ValueRecursionResult recursion;
};

// Clairvoyant benchmark: optimal attacker against the full schedule.
OptimalSolution solve_optimal(const AugmentedMdp& aug, double risk_factor,
                              int start_node);

// The receding-horizon attacker as a stationary-in-stage policy over
// augmented states: at (s, t) it acts by the first step of its plan against
// the placement it observes at t.  Rows at states the attacker never acts
// from (target reached, final layer, sink) are Wait.
RiskPolicy induced_online_policy(const AugmentedMdp& aug,
                                 const IdsSchedule& schedule,
                                 PlanCache& cache);

// Exponential utility of `policy` on the augmented problem from
// (start_node, 0) -- backward policy evaluation, no sampling.
double evaluate_online(const AugmentedMdp& aug, double risk_factor,
                       int start_node, const RiskPolicy& policy);

struct RegretReport {
  int eval_horizon = 0;
  double optimal_value = 0.0;
  double online_value = 0.0;
  double regret = 0.0;  // |optimal - online|; optimal dominates by design
  double optimal_success = 0.0;
  double online_success = 0.0;
};

// Dynamic regret of the receding-horizon attacker (plan lookahead
// `plan_horizon`) against the clairvoyant optimum, both scored on the same
// eval_horizon-step augmented problem; that shared truncation is what makes
// the regret nonnegative up to round-off.
RegretReport dynamic_regret(const AttackGraph& g, const IdsSchedule& schedule,
                            int plan_horizon, double risk_factor,
                            int eval_horizon, PlanBackend backend,
                            PlanCache* cache = nullptr);

}  // namespace mtdsim
