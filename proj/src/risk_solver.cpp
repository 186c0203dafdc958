#include "mtdsim/risk_solver.hpp"

#include <cmath>
#include <stdexcept>

namespace mtdsim {

void Mdp::validate() const {
  for (int s = 0; s < state_count(); ++s) {
    if (actions[s].empty())
      throw std::invalid_argument("mdp: state " + std::to_string(s) +
                                  " has no actions");
    for (const auto& row : actions[s]) {
      double mass = 0.0;
      for (const TransitionEntry& e : row) {
        if (e.next < 0 || e.next >= state_count())
          throw std::invalid_argument("mdp: transition target out of range");
        if (!(e.prob > 0.0))
          throw std::invalid_argument("mdp: non-positive probability");
        mass += e.prob;
      }
      if (std::abs(mass - 1.0) > 1e-9)
        throw std::invalid_argument("mdp: transition row does not sum to 1");
    }
  }
}

void FiniteHorizonProblem::validate() const {
  mdp.validate();
  const int S = mdp.state_count();
  if (horizon < 1) throw std::invalid_argument("problem: horizon must be >= 1");
  if (!(risk_factor > 0.0))
    throw std::invalid_argument("problem: risk_factor must be positive");
  if (static_cast<int>(immediate.size()) != horizon)
    throw std::invalid_argument("problem: immediate reward stages != horizon");
  for (const auto& stage : immediate) {
    if (static_cast<int>(stage.size()) != S)
      throw std::invalid_argument("problem: immediate reward state mismatch");
    for (int s = 0; s < S; ++s)
      if (static_cast<int>(stage[s].size()) != mdp.action_count(s))
        throw std::invalid_argument(
            "problem: immediate reward action mismatch");
  }
  if (static_cast<int>(terminal.size()) != S)
    throw std::invalid_argument("problem: terminal reward size mismatch");
  if (static_cast<int>(initial_distribution.size()) != S)
    throw std::invalid_argument("problem: initial distribution size mismatch");
  double mass = 0.0;
  for (double v : initial_distribution) {
    if (v < 0.0)
      throw std::invalid_argument("problem: negative initial probability");
    mass += v;
  }
  if (std::abs(mass - 1.0) > 1e-9)
    throw std::invalid_argument("problem: initial distribution must sum to 1");
}

namespace {

// exp(risk_factor * terminal) per state.
std::vector<double> terminal_factors(const FiniteHorizonProblem& p) {
  std::vector<double> f(p.terminal.size());
  for (size_t s = 0; s < p.terminal.size(); ++s)
    f[s] = std::exp(p.risk_factor * p.terminal[s]);
  return f;
}

// Last-stage coefficient b(s,a) = e^{lam r(s,a)} sum_s' P(s'|s,a) e^{lam g(s')}.
double last_stage_coeff(const FiniteHorizonProblem& p,
                        const std::vector<double>& term, int s, int a) {
  double sum = 0.0;
  for (const TransitionEntry& e : p.mdp.row(s, a)) sum += e.prob * term[e.next];
  return std::exp(p.risk_factor * p.immediate[p.horizon - 1][s][a]) * sum;
}

}  // namespace

ValueRecursionResult value_recursion(const FiniteHorizonProblem& p) {
  p.validate();
  const int S = p.mdp.state_count();
  const int T = p.horizon;
  ValueRecursionResult out;
  out.values.assign(T, std::vector<double>(S, 0.0));
  out.greedy_action.assign(T, std::vector<int>(S, 0));
  const std::vector<double> term = terminal_factors(p);
  for (int k = T - 1; k >= 0; --k) {
    for (int s = 0; s < S; ++s) {
      double best = -1.0;
      int best_a = 0;
      for (int a = 0; a < p.mdp.action_count(s); ++a) {
        double q;
        if (k == T - 1) {
          q = last_stage_coeff(p, term, s, a);
        } else {
          double sum = 0.0;
          for (const TransitionEntry& e : p.mdp.row(s, a))
            sum += e.prob * out.values[k + 1][e.next];
          q = std::exp(p.risk_factor * p.immediate[k][s][a]) * sum;
        }
        if (q > best) {  // strict: ties keep the lowest action index
          best = q;
          best_a = a;
        }
      }
      out.values[k][s] = best;
      out.greedy_action[k][s] = best_a;
    }
  }
  out.policy.start_time = p.start_time;
  out.policy.action_probs.assign(T, {});
  for (int k = 0; k < T; ++k) {
    out.policy.action_probs[k].resize(S);
    for (int s = 0; s < S; ++s) {
      out.policy.action_probs[k][s].assign(p.mdp.action_count(s), 0.0);
      out.policy.action_probs[k][s][out.greedy_action[k][s]] = 1.0;
    }
  }
  return out;
}

int primal_variable_index(const FiniteHorizonProblem& p, int stage,
                          int state) {
  if (stage < 0 || stage >= p.horizon || state < 0 ||
      state >= p.mdp.state_count())
    throw std::invalid_argument("primal_variable_index: out of range");
  return stage * p.mdp.state_count() + state;
}

StandardLp build_primal_lp(const FiniteHorizonProblem& p) {
  p.validate();
  const int S = p.mdp.state_count();
  const int T = p.horizon;
  StandardLp lp(LpSense::Minimize, T * S);
  for (int s = 0; s < S; ++s)
    lp.costs[primal_variable_index(p, 0, s)] = p.initial_distribution[s];
  const std::vector<double> term = terminal_factors(p);
  for (int k = 0; k < T; ++k) {
    for (int s = 0; s < S; ++s) {
      for (int a = 0; a < p.mdp.action_count(s); ++a) {
        std::vector<double> row(T * S, 0.0);
        row[primal_variable_index(p, k, s)] = 1.0;
        double rhs = 0.0;
        if (k == T - 1) {
          rhs = last_stage_coeff(p, term, s, a);
        } else {
          double w = std::exp(p.risk_factor * p.immediate[k][s][a]);
          for (const TransitionEntry& e : p.mdp.row(s, a))
            row[primal_variable_index(p, k + 1, e.next)] -= w * e.prob;
        }
        lp.add_row(std::move(row), LpRelation::GreaterEq, rhs);
      }
    }
  }
  return lp;
}

namespace {

// Column layout of the dual: stage-major, then state-major, one column per
// action.  Stride = total (state, action) pairs.
std::vector<int> state_offsets(const Mdp& mdp) {
  std::vector<int> off(mdp.state_count() + 1, 0);
  for (int s = 0; s < mdp.state_count(); ++s)
    off[s + 1] = off[s] + mdp.action_count(s);
  return off;
}

}  // namespace

int dual_variable_index(const FiniteHorizonProblem& p, int stage, int state,
                        int action) {
  if (stage < 0 || stage >= p.horizon || state < 0 ||
      state >= p.mdp.state_count() || action < 0 ||
      action >= p.mdp.action_count(state))
    throw std::invalid_argument("dual_variable_index: out of range");
  const std::vector<int> off = state_offsets(p.mdp);
  return stage * off.back() + off[state] + action;
}

StandardLp build_dual_lp(const FiniteHorizonProblem& p) {
  p.validate();
  const int S = p.mdp.state_count();
  const int T = p.horizon;
  const std::vector<int> off = state_offsets(p.mdp);
  const int stride = off.back();
  StandardLp lp(LpSense::Maximize, T * stride);
  const std::vector<double> term = terminal_factors(p);
  for (int s = 0; s < S; ++s)
    for (int a = 0; a < p.mdp.action_count(s); ++a)
      lp.costs[(T - 1) * stride + off[s] + a] = last_stage_coeff(p, term, s, a);
  // Stage 0 rows pin the state marginals to the initial distribution; later
  // rows push reward-weighted flow forward one stage at a time.
  for (int k = 0; k < T; ++k) {
    for (int sp = 0; sp < S; ++sp) {
      std::vector<double> row(T * stride, 0.0);
      for (int a = 0; a < p.mdp.action_count(sp); ++a)
        row[k * stride + off[sp] + a] = 1.0;
      double rhs = 0.0;
      if (k == 0) {
        rhs = p.initial_distribution[sp];
      } else {
        for (int s = 0; s < S; ++s) {
          for (int a = 0; a < p.mdp.action_count(s); ++a) {
            double w = std::exp(p.risk_factor * p.immediate[k - 1][s][a]);
            for (const TransitionEntry& e : p.mdp.row(s, a))
              if (e.next == sp)
                row[(k - 1) * stride + off[s] + a] -= w * e.prob;
          }
        }
      }
      lp.add_row(std::move(row), LpRelation::Equal, rhs);
    }
  }
  return lp;
}

OccupationMeasure occupation_from_dual(const FiniteHorizonProblem& p,
                                       const LpSolution& sol) {
  if (sol.status != LpStatus::Optimal)
    throw std::invalid_argument("occupation_from_dual: solution not optimal");
  const int S = p.mdp.state_count();
  OccupationMeasure m;
  m.start_time = p.start_time;
  m.values.assign(p.horizon, {});
  for (int k = 0; k < p.horizon; ++k) {
    m.values[k].resize(S);
    for (int s = 0; s < S; ++s) {
      m.values[k][s].resize(p.mdp.action_count(s));
      for (int a = 0; a < p.mdp.action_count(s); ++a)
        m.values[k][s][a] =
            sol.primal_values[dual_variable_index(p, k, s, a)];
    }
  }
  return m;
}

RiskPolicy extract_policy(const Mdp& mdp, const OccupationMeasure& m) {
  RiskPolicy pi;
  pi.start_time = m.start_time;
  pi.action_probs.assign(m.values.size(), {});
  for (size_t k = 0; k < m.values.size(); ++k) {
    const int S = static_cast<int>(m.values[k].size());
    pi.action_probs[k].resize(S);
    for (int s = 0; s < S; ++s) {
      const std::vector<double>& occ = m.values[k][s];
      const int A = static_cast<int>(occ.size());
      if (A != mdp.action_count(s))
        throw std::invalid_argument("extract_policy: action count mismatch");
      double mass = 0.0;
      for (double y : occ) mass += y;
      pi.action_probs[k][s].resize(A);
      if (mass > 1e-12) {
        for (int a = 0; a < A; ++a) pi.action_probs[k][s][a] = occ[a] / mass;
      } else {
        // No occupation mass reaches (k, s); any behaviour there is
        // value-irrelevant, so hand back the uniform distribution.
        for (int a = 0; a < A; ++a) pi.action_probs[k][s][a] = 1.0 / A;
      }
    }
  }
  return pi;
}

double evaluate_policy(const FiniteHorizonProblem& p, const RiskPolicy& pi) {
  p.validate();
  const int S = p.mdp.state_count();
  const int T = p.horizon;
  if (static_cast<int>(pi.action_probs.size()) != T)
    throw std::invalid_argument("evaluate_policy: stage count mismatch");
  for (int k = 0; k < T; ++k) {
    if (static_cast<int>(pi.action_probs[k].size()) != S)
      throw std::invalid_argument("evaluate_policy: state count mismatch");
    for (int s = 0; s < S; ++s) {
      const auto& row = pi.action_probs[k][s];
      if (static_cast<int>(row.size()) != p.mdp.action_count(s))
        throw std::invalid_argument("evaluate_policy: action count mismatch");
      double mass = 0.0;
      for (double q : row) {
        if (q < 0.0)
          throw std::invalid_argument("evaluate_policy: negative probability");
        mass += q;
      }
      if (std::abs(mass - 1.0) > 1e-9)
        throw std::invalid_argument("evaluate_policy: row does not sum to 1");
    }
  }
  std::vector<double> w = terminal_factors(p);
  for (int k = T - 1; k >= 0; --k) {
    std::vector<double> wk(S, 0.0);
    for (int s = 0; s < S; ++s) {
      double v = 0.0;
      for (int a = 0; a < p.mdp.action_count(s); ++a) {
        double q = pi.action_probs[k][s][a];
        if (q == 0.0) continue;
        double sum = 0.0;
        for (const TransitionEntry& e : p.mdp.row(s, a))
          sum += e.prob * w[e.next];
        v += q * std::exp(p.risk_factor * p.immediate[k][s][a]) * sum;
      }
      wk[s] = v;
    }
    w = std::move(wk);
  }
  double total = 0.0;
  for (int s = 0; s < S; ++s) total += p.initial_distribution[s] * w[s];
  return total;
}

}  // namespace mtdsim
