#include "mtdsim/lp_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mtdsim {

namespace {

struct Tableau {
  // rows[i] has ncols coefficient entries plus rhs at index ncols.
  std::vector<std::vector<double>> rows;
  std::vector<int> basis;  // basic column per row
  int ncols = 0;

  double& rhs(int i) { return rows[i][ncols]; }
};

// One Gauss-Jordan pivot on (prow, pcol), cost row included.
void pivot(Tableau& t, std::vector<double>& cost_row, double& cost_rhs,
           int prow, int pcol) {
  std::vector<double>& pr = t.rows[prow];
  const double piv = pr[pcol];
  for (double& v : pr) v /= piv;
  for (int i = 0; i < static_cast<int>(t.rows.size()); ++i) {
    if (i == prow) continue;
    double f = t.rows[i][pcol];
    if (f == 0.0) continue;
    std::vector<double>& ri = t.rows[i];
    for (int j = 0; j <= t.ncols; ++j) ri[j] -= f * pr[j];
    ri[pcol] = 0.0;
  }
  double f = cost_row[pcol];
  if (f != 0.0) {
    for (int j = 0; j < t.ncols; ++j) cost_row[j] -= f * pr[j];
    cost_rhs -= f * pr[t.ncols];
    cost_row[pcol] = 0.0;
  }
  t.basis[prow] = pcol;
}

// Entering column by most-negative reduced cost, leaving row by minimum
// ratio with ties broken toward the largest pivot entry; after a long run of
// degenerate pivots the loop falls back to Bland's rule (lowest entering
// index, lowest basic index among ratio ties) until a pivot makes progress,
// which rules out cycling.  Long degenerate runs also make the incrementally
// updated reduced costs drift, so they are recomputed from `base_costs` and
// the current tableau every few dozen pivots.  When the caller knows the
// objective is bounded (phase 1: a sum of nonnegative artificials) a descent
// column without a blocking row is a rounding phantom rather than a ray, so
// it is retired instead of being reported as unbounded; each refresh
// un-retires columns so a clean reduced-cost row gets the final say.
bool simplex_loop(Tableau& t, std::vector<double>& cost_row, double& cost_rhs,
                  const std::vector<double>& base_costs,
                  std::vector<char> may_enter, double tol,
                  bool objective_bounded, bool* unbounded) {
  *unbounded = false;
  const int m = static_cast<int>(t.rows.size());
  const std::vector<char> enterable = may_enter;
  long long pivots = 0;
  int degenerate_streak = 0;
  const auto refresh = [&] {
    for (int j = 0; j < t.ncols; ++j) cost_row[j] = base_costs[j];
    cost_rhs = 0.0;
    for (int i = 0; i < m; ++i) {
      const double cb = base_costs[t.basis[i]];
      if (cb == 0.0) continue;
      for (int j = 0; j < t.ncols; ++j) cost_row[j] -= cb * t.rows[i][j];
      cost_rhs -= cb * t.rhs(i);
    }
    for (int i = 0; i < m; ++i) cost_row[t.basis[i]] = 0.0;
    may_enter = enterable;
  };
  for (;;) {
    if (pivots > 0 && pivots % 64 == 0) refresh();
    const bool bland = degenerate_streak > 50;
    int enter = -1;
    if (bland) {
      for (int j = 0; j < t.ncols; ++j) {
        if (may_enter[j] && cost_row[j] < -tol) {
          enter = j;
          break;
        }
      }
    } else {
      double most = -tol;
      for (int j = 0; j < t.ncols; ++j) {
        if (may_enter[j] && cost_row[j] < most) {
          most = cost_row[j];
          enter = j;
        }
      }
    }
    if (enter < 0) return true;
    int leave = -1;
    double best_ratio = 0.0;
    for (int i = 0; i < m; ++i) {
      double a = t.rows[i][enter];
      if (a > tol) {
        double ratio = t.rhs(i) / a;
        if (leave < 0 || ratio < best_ratio - 1e-12 ||
            (std::abs(ratio - best_ratio) <= 1e-12 &&
             (bland ? t.basis[i] < t.basis[leave]
                    : a > t.rows[leave][enter]))) {
          leave = i;
          best_ratio = ratio;
        }
      }
    }
    if (leave < 0) {
      if (objective_bounded) {
        may_enter[enter] = 0;
        continue;
      }
      *unbounded = true;
      return false;
    }
    degenerate_streak = best_ratio <= 1e-12 ? degenerate_streak + 1 : 0;
    ++pivots;
    pivot(t, cost_row, cost_rhs, leave, enter);
  }
}

// Dense LU with partial pivoting; returns false if numerically singular.
bool lu_factor(std::vector<double>& a, std::vector<int>& perm, int n) {
  perm.resize(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  for (int col = 0; col < n; ++col) {
    int best = col;
    double bestv = std::abs(a[perm[col] * n + col]);
    for (int r = col + 1; r < n; ++r) {
      double v = std::abs(a[perm[r] * n + col]);
      if (v > bestv) {
        bestv = v;
        best = r;
      }
    }
    if (bestv < 1e-300) return false;
    std::swap(perm[col], perm[best]);
    const double piv = a[perm[col] * n + col];
    for (int r = col + 1; r < n; ++r) {
      double f = a[perm[r] * n + col] / piv;
      a[perm[r] * n + col] = f;
      if (f == 0.0) continue;
      for (int j = col + 1; j < n; ++j)
        a[perm[r] * n + j] -= f * a[perm[col] * n + j];
    }
  }
  return true;
}

void lu_solve(const std::vector<double>& a, const std::vector<int>& perm,
              int n, std::vector<double>& x) {
  std::vector<double> y(n);
  for (int i = 0; i < n; ++i) {
    double s = x[perm[i]];
    for (int j = 0; j < i; ++j) s -= a[perm[i] * n + j] * y[j];
    y[i] = s;
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = y[i];
    for (int j = i + 1; j < n; ++j) s -= a[perm[i] * n + j] * x[j];
    x[i] = s / a[perm[i] * n + i];
  }
}

void validate(const StandardLp& lp) {
  const size_t n = lp.costs.size();
  if (lp.lower.size() != n || lp.upper.size() != n)
    throw std::invalid_argument("lp: bounds size mismatch");
  for (size_t j = 0; j < n; ++j) {
    if (!std::isfinite(lp.costs[j]) || !std::isfinite(lp.lower[j]))
      throw std::invalid_argument("lp: non-finite cost or lower bound");
    if (lp.upper[j]) {
      if (!std::isfinite(*lp.upper[j]))
        throw std::invalid_argument("lp: non-finite upper bound");
      if (*lp.upper[j] < lp.lower[j])
        throw std::invalid_argument("lp: upper bound below lower bound");
    }
  }
  for (const LpRow& r : lp.rows) {
    if (r.coeffs.size() != n)
      throw std::invalid_argument("lp: row width mismatch");
    if (!std::isfinite(r.rhs))
      throw std::invalid_argument("lp: non-finite rhs");
    for (double c : r.coeffs)
      if (!std::isfinite(c)) throw std::invalid_argument("lp: non-finite row");
  }
}

}  // namespace

LpSolution solve(const StandardLp& lp, double tolerance) {
  validate(lp);
  const double tol = tolerance;
  const int n = lp.variable_count();

  // Shift out lower bounds (x = lower + xs, xs >= 0) and turn upper bounds
  // into ordinary rows on the shifted variables.
  std::vector<LpRow> work_rows;
  work_rows.reserve(lp.rows.size() + n);
  for (const LpRow& r : lp.rows) {
    LpRow w = r;
    for (int j = 0; j < n; ++j) w.rhs -= r.coeffs[j] * lp.lower[j];
    work_rows.push_back(std::move(w));
  }
  for (int j = 0; j < n; ++j) {
    if (!lp.upper[j]) continue;
    LpRow w;
    w.coeffs.assign(n, 0.0);
    w.coeffs[j] = 1.0;
    w.rel = LpRelation::LessEq;
    w.rhs = *lp.upper[j] - lp.lower[j];
    work_rows.push_back(std::move(w));
  }

  const int m = static_cast<int>(work_rows.size());
  int n_slack = 0;
  for (const LpRow& r : work_rows)
    if (r.rel != LpRelation::Equal) ++n_slack;

  // Equality form A xs = b with slack/surplus columns, b >= 0.  eq_rows / b0
  // are kept untouched for the final basis re-solve.
  const int ncols_real = n + n_slack;
  std::vector<std::vector<double>> eq_rows(
      m, std::vector<double>(ncols_real, 0.0));
  std::vector<double> b0(m);
  {
    int slack = n;
    for (int i = 0; i < m; ++i) {
      const LpRow& r = work_rows[i];
      // Flipping a zero-rhs >= row turns its surplus column into a unit
      // column, so the row starts slack-basic instead of needing an
      // artificial -- phase 1 then only has to clear rows with genuinely
      // positive right-hand sides.
      double sign = (r.rhs < 0.0 ||
                     (r.rhs == 0.0 && r.rel == LpRelation::GreaterEq))
                        ? -1.0
                        : 1.0;
      for (int j = 0; j < n; ++j) eq_rows[i][j] = sign * r.coeffs[j];
      b0[i] = sign * r.rhs;
      if (r.rel != LpRelation::Equal) {
        double s = r.rel == LpRelation::LessEq ? 1.0 : -1.0;
        eq_rows[i][slack++] = sign * s;
      }
    }
  }

  // Internal sense is minimization.
  std::vector<double> min_costs(ncols_real, 0.0);
  for (int j = 0; j < n; ++j)
    min_costs[j] = lp.sense == LpSense::Maximize ? -lp.costs[j] : lp.costs[j];

  // Initial basis: unit slack columns where available, artificials elsewhere.
  Tableau t;
  std::vector<int> artificial_for;  // row -> artificial col (or -1)
  int ncols = ncols_real;
  {
    artificial_for.assign(m, -1);
    std::vector<int> basis(m, -1);
    for (int i = 0; i < m; ++i) {
      for (int j = n; j < ncols_real; ++j) {
        if (eq_rows[i][j] == 1.0) {
          bool unit = true;
          for (int i2 = 0; i2 < m && unit; ++i2)
            if (i2 != i && eq_rows[i2][j] != 0.0) unit = false;
          if (unit) {
            basis[i] = j;
            break;
          }
        }
      }
    }
    for (int i = 0; i < m; ++i)
      if (basis[i] < 0) artificial_for[i] = ncols++;
    t.ncols = ncols;
    t.basis = basis;
    t.rows.assign(m, std::vector<double>(ncols + 1, 0.0));
    for (int i = 0; i < m; ++i) {
      std::copy(eq_rows[i].begin(), eq_rows[i].end(), t.rows[i].begin());
      if (artificial_for[i] >= 0) {
        t.rows[i][artificial_for[i]] = 1.0;
        t.basis[i] = artificial_for[i];
      }
      t.rhs(i) = b0[i];
    }
  }
  std::vector<char> is_artificial(ncols, 0);
  for (int i = 0; i < m; ++i)
    if (artificial_for[i] >= 0) is_artificial[artificial_for[i]] = 1;

  double bscale = 1.0;
  for (double b : b0) bscale = std::max(bscale, std::abs(b));

  LpSolution out;

  // Phase 1: minimize the sum of artificials.
  bool have_artificials = false;
  for (int i = 0; i < m; ++i)
    if (artificial_for[i] >= 0) have_artificials = true;
  if (have_artificials) {
    std::vector<double> base_costs(ncols, 0.0);
    for (int j = 0; j < ncols; ++j)
      if (is_artificial[j]) base_costs[j] = 1.0;
    std::vector<double> cost_row = base_costs;
    double cost_rhs = 0.0;
    for (int i = 0; i < m; ++i) {
      if (artificial_for[i] < 0) continue;
      for (int j = 0; j < ncols; ++j) cost_row[j] -= t.rows[i][j];
      cost_rhs -= t.rhs(i);
    }
    std::vector<char> may_enter(ncols, 1);
    bool unbounded = false;
    simplex_loop(t, cost_row, cost_rhs, base_costs, may_enter, tol,
                 /*objective_bounded=*/true, &unbounded);
    double phase1 = 0.0;
    for (int i = 0; i < m; ++i)
      if (is_artificial[t.basis[i]]) phase1 += t.rhs(i);
    if (phase1 > 1e-7 * bscale) {
      out.status = LpStatus::Infeasible;
      return out;
    }
    // Remove artificials from the basis; rows that offer no real pivot are
    // linearly dependent and get dropped.
    std::vector<double> dummy_cost(ncols, 0.0);
    double dummy_rhs = 0.0;
    for (int i = m - 1; i >= 0; --i) {
      if (!is_artificial[t.basis[i]]) continue;
      int pcol = -1;
      for (int j = 0; j < ncols_real; ++j) {
        if (std::abs(t.rows[i][j]) > tol) {
          pcol = j;
          break;
        }
      }
      if (pcol >= 0) {
        pivot(t, dummy_cost, dummy_rhs, i, pcol);
      } else {
        t.rows.erase(t.rows.begin() + i);
        t.basis.erase(t.basis.begin() + i);
      }
    }
  }

  // Phase 2 over the real costs.
  {
    const int mm = static_cast<int>(t.rows.size());
    std::vector<double> base_costs(ncols, 0.0);
    for (int j = 0; j < ncols_real; ++j) base_costs[j] = min_costs[j];
    std::vector<double> cost_row = base_costs;
    double cost_rhs = 0.0;
    for (int i = 0; i < mm; ++i) {
      double cb = base_costs[t.basis[i]];
      if (cb == 0.0) continue;
      for (int j = 0; j < ncols; ++j) cost_row[j] -= cb * t.rows[i][j];
      cost_rhs -= cb * t.rhs(i);
    }
    std::vector<char> may_enter(ncols, 1);
    for (int j = 0; j < ncols; ++j)
      if (is_artificial[j]) may_enter[j] = 0;
    bool unbounded = false;
    simplex_loop(t, cost_row, cost_rhs, base_costs, may_enter, tol,
                 /*objective_bounded=*/false, &unbounded);
    if (unbounded) {
      out.status = LpStatus::Unbounded;
      return out;
    }
  }

  // Re-solve the final basis against the untouched equality data; pivot
  // arithmetic drift would otherwise leak into tight verification checks.
  std::vector<double> xs(ncols_real, 0.0);
  {
    const int mm = static_cast<int>(t.rows.size());
    // Tableau rows that survived correspond to a subset of the original rows
    // only through pivoting; recover which original rows the basis spans by
    // tracking indices is unnecessary: the basis columns are linearly
    // independent in the full original system whenever no rows were dropped.
    // With dropped rows the tableau solution is used as-is.
    bool refined = false;
    if (mm == m) {
      std::vector<double> bmat(m * m);
      for (int i = 0; i < m; ++i)
        for (int k = 0; k < m; ++k) {
          int col = t.basis[k];
          bmat[i * m + k] = col < ncols_real ? eq_rows[i][col] : 0.0;
        }
      std::vector<int> perm;
      std::vector<double> lu = bmat;
      if (lu_factor(lu, perm, m)) {
        std::vector<double> xb = b0;
        lu_solve(lu, perm, m, xb);
        for (int sweep = 0; sweep < 2; ++sweep) {
          std::vector<double> resid(m);
          for (int i = 0; i < m; ++i) {
            double s = b0[i];
            for (int k = 0; k < m; ++k) s -= bmat[i * m + k] * xb[k];
            resid[i] = s;
          }
          lu_solve(lu, perm, m, resid);
          for (int k = 0; k < m; ++k) xb[k] += resid[k];
        }
        for (int k = 0; k < m; ++k)
          if (t.basis[k] < ncols_real) xs[t.basis[k]] = xb[k];
        refined = true;
      }
    }
    if (!refined) {
      for (int i = 0; i < mm; ++i)
        if (t.basis[i] < ncols_real) xs[t.basis[i]] = t.rhs(i);
    }
  }

  out.status = LpStatus::Optimal;
  out.primal_values.resize(n);
  double native = 0.0;
  for (int j = 0; j < n; ++j) {
    // Refinement can nudge a zero-level basic variable a few ulp below its
    // bound; downstream consumers treat the values as probabilities, so snap
    // the noise back.
    double xj = xs[j];
    if (xj < 0.0 && xj > -1e-9) xj = 0.0;
    out.primal_values[j] = lp.lower[j] + xj;
    native += lp.costs[j] * out.primal_values[j];
  }
  out.objective_value = native;
  return out;
}

}  // namespace mtdsim
