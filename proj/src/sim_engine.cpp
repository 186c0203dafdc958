#include "mtdsim/sim_engine.hpp"

#include <sstream>
#include <stdexcept>
#include <thread>

#include "mtdsim/stats.hpp"

namespace mtdsim {

namespace {

int sample_index(const std::vector<double>& probs, Rng& rng) {
  double u = rng.next_unit();
  double cum = 0.0;
  for (size_t i = 0; i < probs.size(); ++i) {
    cum += probs[i];
    if (u < cum) return static_cast<int>(i);
  }
  return static_cast<int>(probs.size()) - 1;  // guards fp round-off
}

}  // namespace

EpisodeResult run_episode(const AttackGraph& g, const IdsSchedule& schedule,
                          const SimParams& params, Rng rng, PlanCache* cache) {
  if (params.t_max < 0)
    throw std::invalid_argument("run_episode: t_max must be >= 0");
  if (schedule.horizon() < params.t_max)
    throw std::invalid_argument("run_episode: schedule too short");
  std::optional<PlanCache> local;
  if (!cache) {
    local.emplace(g, params.horizon, params.risk_factor, params.backend);
    cache = &*local;
  }

  EpisodeResult ep;
  ep.seed = rng.state();
  int s = g.initial_node();
  int t = 0;
  for (;;) {
    if (s == g.target_node()) {
      ep.outcome = Outcome::Success;
      ep.outcome_time = t;
      ep.trajectory.push_back(
          TrajectoryStep{t, s, std::nullopt, std::nullopt, schedule.at(t)});
      return ep;
    }
    if (t >= params.t_max) {
      ep.outcome = Outcome::Timeout;
      ep.outcome_time = t;
      ep.trajectory.push_back(
          TrajectoryStep{t, s, std::nullopt, std::nullopt, schedule.at(t)});
      return ep;
    }
    const std::vector<int>& placement = schedule.at(t);
    PlanCache::Lookup plan = cache->plan_for(placement, s);
    int a = sample_index(*plan.first_step, rng);
    ActionRef act = ActionRef::from_index(a);
    if (act.is_wait) {
      ep.trajectory.push_back(
          TrajectoryStep{t, s, act, std::nullopt, placement});
      ++t;
      continue;
    }
    const Exploit& e = g.exploits_at(s)[act.exploit_index];
    ep.trajectory.push_back(TrajectoryStep{t, s, act, e.target, placement});
    if (schedule.contains(t + 1, e.target)) {
      ep.outcome = Outcome::Detected;
      ep.outcome_time = t;
      return ep;
    }
    if (rng.bernoulli(e.success_prob)) s = e.target;
    ++t;
  }
}

std::string format_trajectory(const EpisodeResult& episode) {
  std::ostringstream out;
  out << "# t\tstate\taction\tintended_target\tplacement\toutcome\n";
  const size_t last = episode.trajectory.size() - 1;
  for (size_t i = 0; i < episode.trajectory.size(); ++i) {
    const TrajectoryStep& step = episode.trajectory[i];
    out << step.time << '\t' << step.state << '\t';
    if (!step.action)
      out << '-';
    else if (step.action->is_wait)
      out << "wait";
    else
      out << 'e' << step.action->exploit_index;
    out << '\t';
    if (step.intended_target)
      out << *step.intended_target;
    else
      out << '-';
    out << '\t';
    if (step.placement.empty()) {
      out << '-';
    } else {
      for (size_t j = 0; j < step.placement.size(); ++j) {
        if (j) out << ',';
        out << step.placement[j];
      }
    }
    out << '\t';
    if (i != last) {
      out << '.';
    } else {
      switch (episode.outcome) {
        case Outcome::Success: out << "success"; break;
        case Outcome::Detected: out << "detected"; break;
        case Outcome::Timeout: out << "timeout"; break;
      }
    }
    out << '\n';
  }
  return out.str();
}

MonteCarloStats run_monte_carlo(const AttackGraph& g, const DefenseConfig& cfg,
                                const MonteCarloParams& params) {
  cfg.validate();
  if (params.trials < 1)
    throw std::invalid_argument("run_monte_carlo: trials must be >= 1");
  for (int c : cfg.candidates)
    if (c < 0 || c >= g.node_count())
      throw std::invalid_argument("run_monte_carlo: candidate out of range");

  PlanCache cache(g, params.sim.horizon, params.sim.risk_factor,
                  params.sim.backend);
  int threads = params.threads > 0
                    ? params.threads
                    : static_cast<int>(std::thread::hardware_concurrency());
  if (threads < 1) threads = 1;
  if (static_cast<long long>(threads) > params.trials)
    threads = static_cast<int>(params.trials);

  std::vector<long long> succ(threads, 0), det(threads, 0), tout(threads, 0);
  auto worker = [&](int w) {
    for (long long i = w; i < params.trials; i += threads) {
      IdsSchedule sched =
          build_schedule(cfg, params.sim.t_max,
                         derive_seed(params.seed, static_cast<std::uint64_t>(i)));
      Rng rng(derive_seed(params.seed,
                          static_cast<std::uint64_t>(i) + kAttackerStreamOffset));
      EpisodeResult ep = run_episode(g, sched, params.sim, rng, &cache);
      switch (ep.outcome) {
        case Outcome::Success: ++succ[w]; break;
        case Outcome::Detected: ++det[w]; break;
        case Outcome::Timeout: ++tout[w]; break;
      }
    }
  };
  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int w = 0; w < threads; ++w) pool.emplace_back(worker, w);
    for (std::thread& th : pool) th.join();
  }

  MonteCarloStats stats;
  stats.trials = params.trials;
  for (int w = 0; w < threads; ++w) {
    stats.successes += succ[w];
    stats.detections += det[w];
    stats.timeouts += tout[w];
  }
  stats.success_rate =
      static_cast<double>(stats.successes) / static_cast<double>(stats.trials);
  auto [lo, hi] = wilson_interval(stats.successes, stats.trials);
  stats.ci_low = lo;
  stats.ci_high = hi;
  return stats;
}

}  // namespace mtdsim
