#include "mtdsim/defense.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace mtdsim {

void DefenseConfig::validate() const {
  if (ids_count < 0)
    throw std::invalid_argument("defense: ids_count must be >= 0");
  if (ids_count > static_cast<int>(candidates.size()))
    throw std::invalid_argument("defense: ids_count exceeds candidate pool");
  if (resample_period && *resample_period < 1)
    throw std::invalid_argument("defense: resample_period must be >= 1");
  std::set<int> seen(candidates.begin(), candidates.end());
  if (seen.size() != candidates.size())
    throw std::invalid_argument("defense: duplicate candidate");
}

bool IdsSchedule::contains(int t, int node) const {
  const std::vector<int>& p = placements.at(t);
  return std::binary_search(p.begin(), p.end(), node);
}

std::vector<int> sample_placement(const std::vector<int>& candidates, int k,
                                  Rng& rng) {
  if (k < 0 || k > static_cast<int>(candidates.size()))
    throw std::invalid_argument("sample_placement: k out of range");
  std::vector<int> pool = candidates;
  const int m = static_cast<int>(pool.size());
  for (int i = 0; i < k; ++i) {
    int j = i + static_cast<int>(rng.next_below(m - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  std::sort(pool.begin(), pool.end());
  return pool;
}

IdsSchedule build_schedule(const DefenseConfig& cfg, int horizon,
                           std::uint64_t seed) {
  cfg.validate();
  if (horizon < 0)
    throw std::invalid_argument("build_schedule: horizon must be >= 0");
  IdsSchedule sched;
  sched.placements.resize(horizon + 1);
  std::vector<int> current;
  int current_epoch = -1;
  for (int t = 0; t <= horizon; ++t) {
    int epoch = cfg.resample_period ? t / *cfg.resample_period : 0;
    if (epoch != current_epoch) {
      Rng rng(derive_seed(seed, static_cast<std::uint64_t>(epoch)));
      current = sample_placement(cfg.candidates, cfg.ids_count, rng);
      current_epoch = epoch;
    }
    sched.placements[t] = current;
  }
  return sched;
}

}  // namespace mtdsim
