#pragma once

#include <optional>
#include <vector>

namespace mtdsim {

enum class LpSense { Minimize, Maximize };
enum class LpRelation { LessEq, Equal, GreaterEq };
enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpRow {
  std::vector<double> coeffs;  // one per variable
  LpRelation rel = LpRelation::LessEq;
  double rhs = 0.0;
};

// Dense LP in natural form: optimize costs.x subject to rows and per-variable
// bounds.  Defaults are x >= 0 with no upper bound.
struct StandardLp {
  LpSense sense = LpSense::Minimize;
  std::vector<double> costs;
  std::vector<LpRow> rows;
  std::vector<double> lower;
  std::vector<std::optional<double>> upper;

  StandardLp(LpSense s, int variable_count)
      : sense(s),
        costs(variable_count, 0.0),
        lower(variable_count, 0.0),
        upper(variable_count) {}

  int variable_count() const { return static_cast<int>(costs.size()); }

  void add_row(std::vector<double> coeffs, LpRelation rel, double rhs) {
    rows.push_back(LpRow{std::move(coeffs), rel, rhs});
  }
};

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  double objective_value = 0.0;          // in the problem's native sense
  std::vector<double> primal_values;     // empty unless Optimal
};

// Two-phase dense simplex with Bland's rule (so it never cycles) and a final
// solve of the optimal basis against the original data to squeeze out
// accumulated pivot error.  Deterministic: identical input bytes give
// identical output bytes.  `tolerance` is the feasibility/pivot tolerance.
// Malformed input (row width mismatch, crossed bounds, non-finite data)
// throws std::invalid_argument.
LpSolution solve(const StandardLp& lp, double tolerance = 1e-9);

}  // namespace mtdsim
