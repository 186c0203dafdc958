#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mtdsim/rng.hpp"

namespace mtdsim::oracle {

namespace {

struct TrajectoryWalker {
  const FiniteHorizonProblem& p;
  const RiskPolicy& pi;
  long long leaves = 0;
  double total = 0.0;

  void walk(int stage, int state, double reward, double prob) {
    if (stage == p.horizon) {
      if (++leaves > 10'000'000)
        throw std::runtime_error("oracle: trajectory budget exceeded");
      total += prob * std::exp(p.risk_factor *
                               (reward + p.terminal[state]));
      return;
    }
    for (int a = 0; a < p.mdp.action_count(state); ++a) {
      double q = pi.action_probs[stage][state][a];
      if (q <= 0.0) continue;
      double r = reward + p.immediate[stage][state][a];
      for (const TransitionEntry& e : p.mdp.row(state, a))
        walk(stage + 1, e.next, r, prob * q * e.prob);
    }
  }
};

}  // namespace

double enumerate_exp_utility(const FiniteHorizonProblem& p,
                             const RiskPolicy& pi) {
  TrajectoryWalker w{p, pi};
  for (int s = 0; s < p.mdp.state_count(); ++s)
    if (p.initial_distribution[s] > 0.0)
      w.walk(0, s, 0.0, p.initial_distribution[s]);
  return w.total;
}

double enumerate_optimal(const FiniteHorizonProblem& p) {
  const int S = p.mdp.state_count();
  const int T = p.horizon;
  // One decision per (stage, state); odometer over all combinations.
  double policy_count = 1.0;
  for (int k = 0; k < T; ++k)
    for (int s = 0; s < S; ++s) {
      policy_count *= p.mdp.action_count(s);
      if (policy_count > 1e6)
        throw std::runtime_error("oracle: policy budget exceeded");
    }
  std::vector<int> choice(T * S, 0);
  RiskPolicy pi;
  pi.action_probs.assign(T, {});
  for (int k = 0; k < T; ++k) {
    pi.action_probs[k].resize(S);
    for (int s = 0; s < S; ++s)
      pi.action_probs[k][s].assign(p.mdp.action_count(s), 0.0);
  }
  double best = -1.0;
  for (;;) {
    for (int k = 0; k < T; ++k)
      for (int s = 0; s < S; ++s) {
        auto& row = pi.action_probs[k][s];
        std::fill(row.begin(), row.end(), 0.0);
        row[choice[k * S + s]] = 1.0;
      }
    best = std::max(best, enumerate_exp_utility(p, pi));
    int pos = 0;
    while (pos < T * S) {
      int s = pos % S;
      if (++choice[pos] < p.mdp.action_count(s)) break;
      choice[pos] = 0;
      ++pos;
    }
    if (pos == T * S) break;
  }
  return best;
}

std::vector<std::vector<int>> floyd_warshall_distances(const AttackGraph& g) {
  const int n = g.node_count();
  const int inf = 1 << 28;
  std::vector<std::vector<int>> d(n, std::vector<int>(n, inf));
  for (int s = 0; s < n; ++s) {
    d[s][s] = 0;
    for (const Exploit& e : g.exploits_at(s))
      d[s][e.target] = std::min(d[s][e.target], 1);
  }
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (d[i][j] >= inf) d[i][j] = -1;
  return d;
}

double forward_success_probability(
    const AttackGraph& g, const IdsSchedule& schedule, int steps,
    const std::vector<std::vector<std::vector<double>>>& rows) {
  const int n = g.node_count();
  std::vector<double> mass(n, 0.0);
  mass[g.initial_node()] = 1.0;
  double success = 0.0;
  for (int t = 0; t < steps; ++t) {
    std::vector<double> next(n, 0.0);
    for (int s = 0; s < n; ++s) {
      double m = mass[s];
      if (m <= 0.0) continue;
      if (s == g.target_node()) {
        success += m;
        continue;
      }
      const std::vector<double>& row = rows[t][s];
      next[s] += m * row[0];  // Wait
      for (size_t i = 0; i < g.exploits_at(s).size(); ++i) {
        double q = row[1 + i];
        if (q <= 0.0) continue;
        const Exploit& e = g.exploits_at(s)[i];
        if (schedule.contains(t + 1, e.target)) continue;  // caught
        next[e.target] += m * q * e.success_prob;
        next[s] += m * q * (1.0 - e.success_prob);
      }
    }
    mass = std::move(next);
  }
  success += mass[g.target_node()];
  return success;
}

namespace {

double pearson_statistic(const std::vector<std::vector<long long>>& t,
                         const std::vector<long long>& row_sum,
                         const std::vector<long long>& col_sum,
                         long long total) {
  double stat = 0.0;
  for (size_t i = 0; i < t.size(); ++i)
    for (size_t j = 0; j < t[i].size(); ++j) {
      double expected =
          static_cast<double>(row_sum[i]) * col_sum[j] / total;
      double diff = t[i][j] - expected;
      stat += diff * diff / expected;
    }
  return stat;
}

}  // namespace

double permutation_p_value(const std::vector<std::vector<long long>>& table,
                           int iterations, std::uint64_t seed) {
  const int r = static_cast<int>(table.size());
  const int c = static_cast<int>(table[0].size());
  std::vector<long long> row_sum(r, 0), col_sum(c, 0);
  long long total = 0;
  std::vector<int> row_label, col_label;
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) {
      row_sum[i] += table[i][j];
      col_sum[j] += table[i][j];
      total += table[i][j];
      for (long long k = 0; k < table[i][j]; ++k) {
        row_label.push_back(i);
        col_label.push_back(j);
      }
    }
  const double observed = pearson_statistic(table, row_sum, col_sum, total);
  Rng rng(seed);
  int at_least = 0;
  std::vector<std::vector<long long>> perm(r, std::vector<long long>(c, 0));
  for (int it = 0; it < iterations; ++it) {
    for (size_t i = col_label.size() - 1; i > 0; --i) {
      size_t j = rng.next_below(i + 1);
      std::swap(col_label[i], col_label[j]);
    }
    for (auto& row : perm) std::fill(row.begin(), row.end(), 0);
    for (size_t k = 0; k < row_label.size(); ++k)
      ++perm[row_label[k]][col_label[k]];
    if (pearson_statistic(perm, row_sum, col_sum, total) >= observed - 1e-9)
      ++at_least;
  }
  return (1.0 + at_least) / (1.0 + iterations);
}

}  // namespace mtdsim::oracle
