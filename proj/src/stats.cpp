#include "momspace/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace momspace {

namespace {

double betacf(double a, double b, double x) {
  const int max_iter = 300;
  const double eps = 3e-15, fpmin = 1e-300;
  const double qab = a + b, qap = a + 1, qam = a - 1;
  double c = 1, d = 1 - qab * x / qap;
  if (std::fabs(d) < fpmin) d = fpmin;
  d = 1 / d;
  double h = d;
  for (int m = 1; m <= max_iter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1 + aa * d;
    if (std::fabs(d) < fpmin) d = fpmin;
    c = 1 + aa / c;
    if (std::fabs(c) < fpmin) c = fpmin;
    d = 1 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1 + aa * d;
    if (std::fabs(d) < fpmin) d = fpmin;
    c = 1 + aa / c;
    if (std::fabs(c) < fpmin) c = fpmin;
    d = 1 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1) < eps) break;
  }
  return h;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (x <= 0) return 0;
  if (x >= 1) return 1;
  const double ln_bt =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  const double bt = std::exp(ln_bt);
  if (x < (a + 1) / (a + b + 2)) return bt * betacf(a, b, x) / a;
  return 1 - bt * betacf(b, a, 1 - x) / b;
}

double ks_statistic(std::vector<double> s, const std::function<double(double)>& cdf) {
  std::sort(s.begin(), s.end());
  const std::size_t n = s.size();
  double d = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double f = cdf(s[i]);
    d = std::max(d, std::fabs(f - double(i) / n));
    d = std::max(d, std::fabs(double(i + 1) / n - f));
  }
  return d;
}

double ks_statistic_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::fabs(double(i) / a.size() - double(j) / b.size()));
  }
  return d;
}

double ks_pvalue(double d, double effective_n) {
  const double lambda = (std::sqrt(effective_n) + 0.12 + 0.11 / std::sqrt(effective_n)) * d;
  double s = 0;
  for (int k = 1; k <= 100; ++k) {
    const double term = 2 * std::pow(-1.0, k - 1) * std::exp(-2.0 * k * k * lambda * lambda);
    s += term;
    if (std::fabs(term) < 1e-12) break;
  }
  return std::min(1.0, std::max(0.0, s));
}

double split_rhat(const std::vector<std::vector<double>>& chains) {
  std::vector<std::vector<double>> halves;
  for (const auto& c : chains) {
    const std::size_t h = c.size() / 2;
    if (h < 2) continue;
    halves.emplace_back(c.begin(), c.begin() + h);
    halves.emplace_back(c.begin() + h, c.begin() + 2 * h);
  }
  const std::size_t m = halves.size();
  if (m < 2) return 1;
  const std::size_t n = halves[0].size();
  std::vector<double> mean(m, 0), var(m, 0);
  for (std::size_t c = 0; c < m; ++c) {
    for (double v : halves[c]) mean[c] += v;
    mean[c] /= n;
    for (double v : halves[c]) var[c] += (v - mean[c]) * (v - mean[c]);
    var[c] /= (n - 1);
  }
  double grand = 0;
  for (double v : mean) grand += v;
  grand /= m;
  double b = 0;  // between-halves variance * n
  for (double v : mean) b += (v - grand) * (v - grand);
  b *= double(n) / (m - 1);
  double w = 0;
  for (double v : var) w += v;
  w /= m;
  if (w <= 0) return b <= 0 ? 1.0 : std::numeric_limits<double>::infinity();
  const double var_plus = (double(n - 1) / n) * w + b / n;
  return std::sqrt(var_plus / w);
}

}  // namespace momspace
