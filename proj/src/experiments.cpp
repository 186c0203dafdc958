#include "mtdsim/experiments.hpp"

#include <algorithm>
#include <stdexcept>

namespace mtdsim {

namespace {

SweepRow run_sweep_row(const AttackGraph& g, int ids_count,
                       std::optional<int> period, const SimParams& sim,
                       long long trials, std::uint64_t row_seed) {
  DefenseConfig cfg;
  cfg.ids_count = ids_count;
  cfg.resample_period = period;
  cfg.candidates = g.ids_candidates();
  SweepRow row;
  row.frequency = cfg.frequency();
  row.ids_count = ids_count;
  row.resample_period = period;
  row.seed = row_seed;
  MonteCarloParams mc;
  mc.sim = sim;
  mc.trials = trials;
  mc.seed = row_seed;
  row.stats = run_monte_carlo(g, cfg, mc);
  return row;
}

}  // namespace

SweepResult sweep_frequency(const AttackGraph& g, int ids_count,
                            const std::vector<std::optional<int>>& periods,
                            const SimParams& sim, long long trials,
                            std::uint64_t seed) {
  SweepResult out;
  for (size_t i = 0; i < periods.size(); ++i)
    out.rows.push_back(run_sweep_row(g, ids_count, periods[i], sim, trials,
                                     derive_seed(seed, i)));
  return out;
}

SweepResult sweep_ids_count(const AttackGraph& g,
                            const std::vector<int>& counts,
                            std::optional<int> period, const SimParams& sim,
                            long long trials, std::uint64_t seed) {
  SweepResult out;
  for (size_t i = 0; i < counts.size(); ++i)
    out.rows.push_back(run_sweep_row(g, counts[i], period, sim, trials,
                                     derive_seed(seed, i)));
  return out;
}

std::vector<RegretStudyRow> distance_regret_study(
    const AttackGraph& g, const std::vector<int>& initial_states,
    const DefenseConfig& cfg, int plan_horizon, double risk_factor,
    int eval_horizon, PlanBackend backend, int schedule_count,
    std::uint64_t seed) {
  cfg.validate();
  if (schedule_count < 1)
    throw std::invalid_argument("distance_regret_study: need >= 1 schedule");
  for (int s : initial_states)
    if (s < 0 || s >= g.node_count())
      throw std::invalid_argument("distance_regret_study: bad initial state");
  PlanCache cache(g, plan_horizon, risk_factor, backend);
  std::vector<IdsSchedule> schedules;
  schedules.reserve(schedule_count);
  for (int j = 0; j < schedule_count; ++j)
    schedules.push_back(
        build_schedule(cfg, eval_horizon, derive_seed(seed, j)));
  std::vector<RegretStudyRow> rows;
  for (int s0 : initial_states) {
    AttackGraph from_s0 = g.with_initial(s0);
    std::optional<int> dist = hop_distance(g, s0, g.target_node());
    for (int j = 0; j < schedule_count; ++j) {
      RegretStudyRow row;
      row.initial_state = s0;
      row.distance = dist;
      row.schedule_index = j;
      row.report = dynamic_regret(from_s0, schedules[j], plan_horizon,
                                  risk_factor, eval_horizon, backend, &cache);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

SuccessTable success_by_initial(const AttackGraph& g, const DefenseConfig& cfg,
                                const std::vector<int>& initial_states,
                                const MonteCarloParams& params) {
  SuccessTable out;
  for (size_t i = 0; i < initial_states.size(); ++i) {
    int s0 = initial_states[i];
    if (s0 < 0 || s0 >= g.node_count())
      throw std::invalid_argument("success_by_initial: bad initial state");
    MonteCarloParams row_params = params;
    row_params.seed = derive_seed(params.seed, i);
    MonteCarloStats stats =
        run_monte_carlo(g.with_initial(s0), cfg, row_params);
    out.initial_states.push_back(s0);
    out.distances.push_back(hop_distance(g, s0, g.target_node()));
    out.counts.push_back({stats.successes, stats.trials - stats.successes});
  }
  return out;
}

}  // namespace mtdsim
