#pragma once

// Slow, independent reference implementations used only by the test suites.
// Everything here re-derives results by brute force (trajectory/policy
// enumeration, resampling, all-pairs relaxation) without touching the
// library's solvers, so agreement is meaningful evidence.

#include <cstdint>
#include <vector>

#include "mtdsim/attack_graph.hpp"
#include "mtdsim/defense.hpp"
#include "mtdsim/risk_solver.hpp"

namespace mtdsim::oracle {

// Exact exponential utility of a policy by enumerating every trajectory.
// Throws std::runtime_error if the term budget (1e7 leaves) is exceeded.
double enumerate_exp_utility(const FiniteHorizonProblem& p,
                             const RiskPolicy& pi);

// Optimal exponential utility by enumerating every deterministic
// time-varying Markov policy and scoring each via enumerate_exp_utility.
// Policy count is budgeted at 1e6.
double enumerate_optimal(const FiniteHorizonProblem& p);

// All-pairs hop distances by Floyd-Warshall (-1 = unreachable).
std::vector<std::vector<int>> floyd_warshall_distances(const AttackGraph& g);

// P(attacker reaches the target within `steps` steps) for a behaviour given
// as per-time-per-state action rows (rows[t][s], t = 0..steps-1), by exact
// forward propagation of the state distribution.  Detection uses the next
// step's placement, matching the episode loop.
double forward_success_probability(
    const AttackGraph& g, const IdsSchedule& schedule, int steps,
    const std::vector<std::vector<std::vector<double>>>& rows);

// Permutation test of independence on an r x c table: p-value of the
// Pearson statistic under random relabelling (margins preserved), with the
// add-one correction (1 + #{perm >= obs}) / (1 + iterations).
double permutation_p_value(const std::vector<std::vector<long long>>& table,
                           int iterations, std::uint64_t seed);

}  // namespace mtdsim::oracle
