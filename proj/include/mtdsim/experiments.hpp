#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mtdsim/attack_graph.hpp"
#include "mtdsim/clairvoyant.hpp"
#include "mtdsim/defense.hpp"
#include "mtdsim/sim_engine.hpp"
#include "mtdsim/stats.hpp"

namespace mtdsim {

struct SweepRow {
  double frequency = 0.0;  // 0 for static, else 1/resample_period
  int ids_count = 0;
  std::optional<int> resample_period;
  std::uint64_t seed = 0;  // master seed of this row's Monte Carlo run
  MonteCarloStats stats;
};

struct SweepResult {
  std::vector<SweepRow> rows;
};

// One Monte Carlo run per roaming period (nullopt = static placement).
// Row i runs under master seed derive_seed(seed, i), so rows are mutually
// independent and the whole sweep is reproducible from one seed.
SweepResult sweep_frequency(const AttackGraph& g, int ids_count,
                            const std::vector<std::optional<int>>& periods,
                            const SimParams& sim, long long trials,
                            std::uint64_t seed);

// One Monte Carlo run per monitor count, fixed roaming period.
SweepResult sweep_ids_count(const AttackGraph& g,
                            const std::vector<int>& counts,
                            std::optional<int> period, const SimParams& sim,
                            long long trials, std::uint64_t seed);

struct RegretStudyRow {
  int initial_state = 0;
  std::optional<int> distance;  // hops to target, nullopt if unreachable
  int schedule_index = 0;
  RegretReport report;
};

// Regret of the receding-horizon attacker from each given start, against
// `schedule_count` schedules drawn from derive_seed(seed, j).  The same
// schedules are reused across starts so rows are comparable; one plan cache
// serves the whole study.
std::vector<RegretStudyRow> distance_regret_study(
    const AttackGraph& g, const std::vector<int>& initial_states,
    const DefenseConfig& cfg, int plan_horizon, double risk_factor,
    int eval_horizon, PlanBackend backend, int schedule_count,
    std::uint64_t seed);

// Success/failure counts per start state from independent Monte Carlo runs;
// the table feeds chi-squared tests of "does outcome depend on where the
// attacker starts".
struct SuccessTable {
  std::vector<int> initial_states;
  std::vector<std::optional<int>> distances;
  std::vector<std::vector<long long>> counts;  // rows: state; cols: win, lose
};

SuccessTable success_by_initial(const AttackGraph& g, const DefenseConfig& cfg,
                                const std::vector<int>& initial_states,
                                const MonteCarloParams& params);

}  // namespace mtdsim
