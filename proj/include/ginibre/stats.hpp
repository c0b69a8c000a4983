#pragma once

#include <span>
#include <vector>

namespace ginibre::stats {

struct TestResult {
  double statistic;
  double p_value;
};

/// Two-sample Kolmogorov-Smirnov test with the asymptotic Kolmogorov law
/// (Stephens' small-sample correction on the effective size).
TestResult ks_two_sample(std::span<const double> a, std::span<const double> b);

/// One-sample KS test against a continuous CDF.
template <class Cdf>
TestResult ks_one_sample(std::vector<double> sample, Cdf cdf);

/// Survival function of the Kolmogorov distribution.
double kolmogorov_survival(double lambda);

/// Pearson chi-square goodness of fit. Cells with expected count below
/// `min_expected` are pooled into their neighbour.
TestResult chi_square_gof(std::span<const double> observed, std::span<const double> expected_probs,
                          double min_expected = 5.0);

/// Two-sample chi-square homogeneity test on binned counts.
TestResult chi_square_two_sample(std::span<const double> counts_a, std::span<const double> counts_b,
                                 double min_expected = 5.0);

}  // namespace ginibre::stats

#include <algorithm>
#include <cmath>

namespace ginibre::stats {

template <class Cdf>
TestResult ks_one_sample(std::vector<double> sample, Cdf cdf) {
  std::sort(sample.begin(), sample.end());
  double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    double f = cdf(sample[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  double sn = std::sqrt(n);
  return {d, kolmogorov_survival((sn + 0.12 + 0.11 / sn) * d)};
}

}  // namespace ginibre::stats
