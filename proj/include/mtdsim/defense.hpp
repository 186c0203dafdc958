#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mtdsim/attack_graph.hpp"
#include "mtdsim/rng.hpp"

namespace mtdsim {

// Roaming-monitor configuration.  `resample_period` is the number of steps a
// placement stays put: nullopt means never move (static placement,
// frequency 0), value r >= 1 means redraw every r steps (frequency 1/r).
struct DefenseConfig {
  int ids_count = 1;
  std::optional<int> resample_period;
  std::vector<int> candidates;

  double frequency() const {
    return resample_period ? 1.0 / *resample_period : 0.0;
  }

  void validate() const;
};

// Monitor placements for every step 0..horizon of one episode; placements
// are sorted node-id vectors.  Where the monitors sit is pinned per step
// up front, which is what makes an episode a pure function of its seeds.
struct IdsSchedule {
  std::vector<std::vector<int>> placements;

  int horizon() const { return static_cast<int>(placements.size()) - 1; }
  const std::vector<int>& at(int t) const { return placements.at(t); }
  bool contains(int t, int node) const;
};

// Uniform k-subset of `candidates` via a partial Fisher-Yates pass in
// canonical (stored) candidate order.  Consumes exactly k draws from `rng`;
// result is sorted.  k must be in [0, |candidates|].
std::vector<int> sample_placement(const std::vector<int>& candidates, int k,
                                  Rng& rng);

// Placement sequence for steps 0..horizon.  Epoch e = t / resample_period
// (epoch 0 covers everything when the period is null); each epoch draws its
// placement from an independent child stream derive_seed(seed, e), so
// extending the horizon never disturbs earlier epochs.
IdsSchedule build_schedule(const DefenseConfig& cfg, int horizon,
                           std::uint64_t seed);

}  // namespace mtdsim
