#include "mtdsim/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace mtdsim {

namespace {

// Q via its power series around 0 (through P): good for x < a + 1.
double gamma_q_series(double a, double x) {
  double ap = a;
  double term = 1.0 / a;
  double sum = term;
  for (int n = 0; n < 500; ++n) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-15) break;
  }
  double p = sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
  return 1.0 - p;
}

// Q via modified Lentz continued fraction: good for x >= a + 1.
double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-15) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double regularized_gamma_q(double a, double x) {
  if (!(a > 0.0) || x < 0.0)
    throw std::invalid_argument("regularized_gamma_q: bad arguments");
  if (x == 0.0) return 1.0;
  return x < a + 1.0 ? gamma_q_series(a, x) : gamma_q_cf(a, x);
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("normal_quantile: p must be in (0, 1)");
  auto cdf = [](double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); };
  double lo = -40.0, hi = 40.0;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    if (cdf(mid) < p)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

ChiSquaredResult chi_squared_independence(
    const std::vector<std::vector<long long>>& table) {
  const int r = static_cast<int>(table.size());
  if (r < 2) throw std::invalid_argument("chi_squared: need >= 2 rows");
  const int c = static_cast<int>(table[0].size());
  if (c < 2) throw std::invalid_argument("chi_squared: need >= 2 columns");
  std::vector<long long> row_sum(r, 0), col_sum(c, 0);
  long long total = 0;
  for (int i = 0; i < r; ++i) {
    if (static_cast<int>(table[i].size()) != c)
      throw std::invalid_argument("chi_squared: ragged table");
    for (int j = 0; j < c; ++j) {
      if (table[i][j] < 0)
        throw std::invalid_argument("chi_squared: negative count");
      row_sum[i] += table[i][j];
      col_sum[j] += table[i][j];
      total += table[i][j];
    }
  }
  for (int i = 0; i < r; ++i)
    if (row_sum[i] == 0)
      throw std::invalid_argument("chi_squared: empty row margin");
  for (int j = 0; j < c; ++j)
    if (col_sum[j] == 0)
      throw std::invalid_argument("chi_squared: empty column margin");
  ChiSquaredResult out;
  out.dof = (r - 1) * (c - 1);
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < c; ++j) {
      double expected =
          static_cast<double>(row_sum[i]) * col_sum[j] / total;
      double diff = table[i][j] - expected;
      out.statistic += diff * diff / expected;
    }
  }
  out.p_value = regularized_gamma_q(out.dof / 2.0, out.statistic / 2.0);
  return out;
}

std::pair<double, double> wilson_interval(long long successes,
                                          long long trials,
                                          double confidence) {
  if (trials <= 0) throw std::invalid_argument("wilson_interval: no trials");
  if (successes < 0 || successes > trials)
    throw std::invalid_argument("wilson_interval: bad success count");
  if (!(confidence > 0.0 && confidence < 1.0))
    throw std::invalid_argument("wilson_interval: bad confidence");
  const double z = normal_quantile(0.5 + confidence / 2.0);
  const double n = static_cast<double>(trials);
  const double phat = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (phat + z2 / (2.0 * n)) / denom;
  const double half =
      z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
  double lo = center - half, hi = center + half;
  if (lo < 0.0) lo = 0.0;
  if (hi > 1.0) hi = 1.0;
  return {lo, hi};
}

}  // namespace mtdsim
