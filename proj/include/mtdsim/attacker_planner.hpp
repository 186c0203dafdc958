#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "mtdsim/attack_graph.hpp"
#include "mtdsim/risk_solver.hpp"

namespace mtdsim {

// How a plan is computed.  Both backends optimize the same objective; the
// dual LP additionally yields an occupation measure (and thus a randomized
// policy), the recursion is orders of magnitude faster.
enum class PlanBackend { DualLp, GreedyRecursion };

// Planning MDP induced by a graph and an observed monitor placement:
// states are the graph nodes plus one absorbing `sink` (= caught).  Action 0
// is Wait (stay put, deterministic); action 1+i is the node's i-th exploit.
// An exploit whose target is currently monitored leads to the sink with
// probability one -- the rewrite that encodes "touching a monitor means
// detection".  Wait is never rewritten.
struct PlannerMdp {
  Mdp mdp;
  int graph_states = 0;
  int sink_state = 0;
  int target_state = 0;
};

PlannerMdp build_planner_mdp(const AttackGraph& g,
                             const std::vector<int>& observed_ids);

// Stage rewards for the reach-the-target objective: nothing along the way,
// 1 exactly on the target at the end of the lookahead.
struct PlanRewards {
  std::vector<std::vector<std::vector<double>>> immediate;  // all zero
  std::vector<double> terminal;                             // 1 at target
};

PlanRewards make_rewards(const PlannerMdp& pm, int horizon);

// Full per-step planning problem: planner MDP + reach rewards + risk factor,
// started from a point mass at `current_state`.
FiniteHorizonProblem build_planning_problem(const AttackGraph& g,
                                            const std::vector<int>& observed_ids,
                                            int current_state, int horizon,
                                            double risk_factor);

// One receding-horizon planning call.  `policy` covers every planner state;
// under the dual backend only states actually reachable from current_state
// carry optimized rows (unreached rows fall back to uniform), so callers
// must read the row of the state they planned for.
//
// Both backends designate actions by lowest index among the backup
// maximizers, with one refinement: a non-target state whose value exceeds
// the idle utility 1 never keeps weight on Wait when an exploit ties it.
// Long lookaheads make such ties ubiquitous in double precision (the
// failure tail vanishes below one ulp) and idling there would stall
// replanning forever; a value of exactly 1 still designates Wait, so a
// pinned attacker times out instead of walking into a monitor.
struct PlanningStep {
  std::vector<int> observed_ids;
  int time = 0;
  int horizon = 0;
  RiskPolicy policy;
  double value = 0.0;  // optimal exponential utility from current_state
};

PlanningStep plan_step(const AttackGraph& g,
                       const std::vector<int>& observed_ids, int current_state,
                       int horizon, double risk_factor, PlanBackend backend,
                       int time = 0);

// Memo for receding-horizon planning.  The per-step problem depends only on
// the observed placement (and, for the dual backend, the start state), never
// on wall-clock time, so plans are shared across steps and episodes.
// Thread-safe; entries live as long as the cache.
class PlanCache {
 public:
  PlanCache(AttackGraph g, int horizon, double risk_factor,
            PlanBackend backend);

  struct Lookup {
    const std::vector<double>* first_step;  // action distribution at `state`
    double value;                           // plan value from `state`
  };
  Lookup plan_for(const std::vector<int>& placement, int state);

  PlanBackend backend() const { return backend_; }
  const AttackGraph& graph() const { return graph_; }
  int horizon() const { return horizon_; }
  double risk_factor() const { return risk_factor_; }

 private:
  struct GreedyPlan {
    RiskPolicy policy;
    std::vector<double> initial_values;  // u_0 per state
  };

  AttackGraph graph_;
  int horizon_;
  double risk_factor_;
  PlanBackend backend_;
  std::mutex mu_;
  std::map<std::vector<int>, std::shared_ptr<const GreedyPlan>> greedy_;
  std::map<std::pair<std::vector<int>, int>,
           std::shared_ptr<const PlanningStep>>
      dual_;
};

}  // namespace mtdsim
