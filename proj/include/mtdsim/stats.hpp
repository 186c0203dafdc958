#pragma once

#include <utility>
#include <vector>

namespace mtdsim {

// Upper regularized incomplete gamma Q(a, x), a > 0, x >= 0.  Series for
// x < a + 1, Lentz continued fraction otherwise; relative tolerance 1e-12.
double regularized_gamma_q(double a, double x);

// Standard normal quantile (inverse CDF).  Bisection against std::erfc:
// slow-ish, but exact enough (~1e-12) and completely deterministic.
double normal_quantile(double p);

struct ChiSquaredResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
};

// Pearson chi-squared test of independence on an r x c count table.
// dof = (r-1)(c-1); p = Q(dof/2, statistic/2).  Requires r, c >= 2 and
// strictly positive row/column margins (expected counts must be nonzero).
ChiSquaredResult chi_squared_independence(
    const std::vector<std::vector<long long>>& table);

// Wilson score interval for a binomial proportion, default 95% two-sided.
std::pair<double, double> wilson_interval(long long successes,
                                          long long trials,
                                          double confidence = 0.95);

}  // namespace mtdsim
