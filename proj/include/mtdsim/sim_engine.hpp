#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mtdsim/attack_graph.hpp"
#include "mtdsim/attacker_planner.hpp"
#include "mtdsim/defense.hpp"
#include "mtdsim/rng.hpp"

namespace mtdsim {

// Simulation knobs shared by every episode: attacker lookahead + risk
// appetite, episode cap, and which planning backend to use.
struct SimParams {
  int horizon = 19;
  double risk_factor = 1.0;
  int t_max = 100;
  PlanBackend backend = PlanBackend::DualLp;
};

enum class Outcome { Success, Detected, Timeout };

struct TrajectoryStep {
  int time = 0;
  int state = 0;
  // nullopt on the final bookkeeping row of Success/Timeout episodes.
  std::optional<ActionRef> action;
  std::optional<int> intended_target;  // set iff action is an exploit
  std::vector<int> placement;          // monitors during this step
};

struct EpisodeResult {
  Outcome outcome = Outcome::Timeout;
  int outcome_time = 0;
  std::vector<TrajectoryStep> trajectory;
  std::uint64_t seed = 0;  // attacker stream seed the episode consumed
};

// One episode of the cat-and-mouse loop.  Each step: declare success if the
// attacker sits on the target; give up at t_max; otherwise observe the
// current placement, plan (through `cache` if given), sample an action, and
// resolve it.  An exploit is checked against the *next* step's placement
// first -- defender and attacker move together, and walking into a freshly
// placed monitor is detection regardless of whether the exploit would have
// landed -- and only then rolls its success.
// The schedule must cover steps 0..t_max.
EpisodeResult run_episode(const AttackGraph& g, const IdsSchedule& schedule,
                          const SimParams& params, Rng rng,
                          PlanCache* cache = nullptr);

// Tab-separated trajectory dump; see docs/file-formats.md.
std::string format_trajectory(const EpisodeResult& episode);

struct MonteCarloStats {
  long long trials = 0;
  long long successes = 0;
  long long detections = 0;
  long long timeouts = 0;
  double success_rate = 0.0;
  double ci_low = 0.0;   // Wilson 95%
  double ci_high = 0.0;
};

struct MonteCarloParams {
  SimParams sim;
  long long trials = 1000;
  std::uint64_t seed = 0;
  int threads = 0;  // 0 = hardware concurrency
};

// Independent episodes i = 0..trials-1.  Episode i draws its schedule from
// stream derive_seed(seed, i) and its attacker randomness from stream
// derive_seed(seed, i + kAttackerStreamOffset), so results do not depend on
// thread count or completion order.
MonteCarloStats run_monte_carlo(const AttackGraph& g, const DefenseConfig& cfg,
                                const MonteCarloParams& params);

}  // namespace mtdsim
