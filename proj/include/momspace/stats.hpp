#ifndef MOMSPACE_STATS_HPP
#define MOMSPACE_STATS_HPP

#include <functional>
#include <vector>

namespace momspace {

// Regularized incomplete beta I_x(a,b) via the Lentz continued fraction.
double regularized_incomplete_beta(double a, double b, double x);
inline double beta_cdf(double a, double b, double x) {
  return regularized_incomplete_beta(a, b, x);
}

// One-sample Kolmogorov-Smirnov statistic against a CDF.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);
// Two-sample KS statistic.
double ks_statistic_two_sample(std::vector<double> a, std::vector<double> b);
// Asymptotic Kolmogorov p-value for the scaled statistic.
double ks_pvalue(double d, double effective_n);

// Split-chain Gelman-Rubin diagnostic for one scalar series per chain.
double split_rhat(const std::vector<std::vector<double>>& chains);

}  // namespace momspace

#endif
