#pragma once

#include <vector>

#include "mtdsim/lp_solver.hpp"

namespace mtdsim {

struct TransitionEntry {
  int next = 0;
  double prob = 0.0;
};

// Sparse finite MDP: actions[s][a] lists the successor distribution of
// action a at state s.  Action sets may differ per state.
struct Mdp {
  std::vector<std::vector<std::vector<TransitionEntry>>> actions;

  int state_count() const { return static_cast<int>(actions.size()); }
  int action_count(int s) const {
    return static_cast<int>(actions[s].size());
  }
  const std::vector<TransitionEntry>& row(int s, int a) const {
    return actions[s][a];
  }

  // Throws std::invalid_argument on dangling targets, non-positive
  // probabilities, rows off unit mass (1e-9), or states with no action.
  void validate() const;
};

// Finite-horizon risk-sensitive problem: maximize
//   E[ exp( risk_factor * (sum of stage rewards + terminal reward) ) ].
// Stage k = 0..horizon-1 corresponds to decision epoch start_time + k.
// Rewards are stored unscaled; solvers fold risk_factor in on use, so the
// same problem can be re-solved under a different risk appetite.
struct FiniteHorizonProblem {
  Mdp mdp;
  int horizon = 1;
  int start_time = 0;
  // immediate[k][s][a], terminal[s].
  std::vector<std::vector<std::vector<double>>> immediate;
  std::vector<double> terminal;
  double risk_factor = 1.0;
  std::vector<double> initial_distribution;

  void validate() const;
};

// Randomized time-indexed policy; action_probs[k][s][a].
struct RiskPolicy {
  int start_time = 0;
  std::vector<std::vector<std::vector<double>>> action_probs;
};

// Occupation measure from the dual LP; values[k][s][a].
struct OccupationMeasure {
  int start_time = 0;
  std::vector<std::vector<std::vector<double>>> values;
};

struct ValueRecursionResult {
  // values[k][s] = optimal exponential utility-to-go from s at stage k.
  std::vector<std::vector<double>> values;
  // greedy_action[k][s]: lowest-index maximizer.
  std::vector<std::vector<int>> greedy_action;
  // The same maximizers as a deterministic RiskPolicy.
  RiskPolicy policy;
};

// Backward induction on the exponential utility.  The last stage folds the
// terminal reward into its stage value; ties pick the lowest action index.
ValueRecursionResult value_recursion(const FiniteHorizonProblem& p);

// Linear programs for the same optimum.  The primal has one variable per
// (stage, state) carrying the utility-to-go; the dual has one variable per
// (stage, state, action) carrying occupation mass.  Variable layouts are
// exposed so solutions can be read back field by field.
StandardLp build_primal_lp(const FiniteHorizonProblem& p);
StandardLp build_dual_lp(const FiniteHorizonProblem& p);
int primal_variable_index(const FiniteHorizonProblem& p, int stage, int state);
int dual_variable_index(const FiniteHorizonProblem& p, int stage, int state,
                        int action);

// Reshape a solved dual into per-stage occupation tables.
OccupationMeasure occupation_from_dual(const FiniteHorizonProblem& p,
                                       const LpSolution& sol);

// Normalize occupation rows into a policy.  Rows with (numerically) no mass
// get the uniform distribution over the state's actions.
RiskPolicy extract_policy(const Mdp& mdp, const OccupationMeasure& m);

// Exact exponential utility of a (randomized) policy from the problem's
// initial distribution.
double evaluate_policy(const FiniteHorizonProblem& p, const RiskPolicy& pi);

}  // namespace mtdsim
