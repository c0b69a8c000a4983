#include "ginibre/stats.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "ginibre/types.hpp"

namespace ginibre::stats {

double kolmogorov_survival(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 200; ++k) {
    double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-18) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

TestResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  require(!a.empty() && !b.empty(), "ks_two_sample: empty sample");
  std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  double na = static_cast<double>(x.size()), nb = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] <= v) ++i;
    while (j < y.size() && y[j] <= v) ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  double ne = std::sqrt(na * nb / (na + nb));
  return {d, kolmogorov_survival((ne + 0.12 + 0.11 / ne) * d)};
}

namespace {

double chi_square_survival(double x, double dof) {
  if (dof <= 0.0) return 1.0;
  return boost::math::gamma_q(dof / 2.0, x / 2.0);
}

}  // namespace

TestResult chi_square_gof(std::span<const double> observed, std::span<const double> expected_probs,
                          double min_expected) {
  require(observed.size() == expected_probs.size(), "chi_square_gof: size mismatch");
  double total = 0.0;
  for (double o : observed) total += o;
  std::vector<double> obs, expc;
  double acc_o = 0.0, acc_e = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    acc_o += observed[i];
    acc_e += expected_probs[i] * total;
    if (acc_e >= min_expected) {
      obs.push_back(acc_o);
      expc.push_back(acc_e);
      acc_o = acc_e = 0.0;
    }
  }
  if (acc_e > 0.0 || acc_o > 0.0) {
    if (expc.empty()) {
      obs.push_back(acc_o);
      expc.push_back(acc_e);
    } else {
      obs.back() += acc_o;
      expc.back() += acc_e;
    }
  }
  double chi2 = 0.0;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    if (expc[i] > 0.0) chi2 += (obs[i] - expc[i]) * (obs[i] - expc[i]) / expc[i];
  }
  return {chi2, chi_square_survival(chi2, static_cast<double>(obs.size()) - 1.0)};
}

TestResult chi_square_two_sample(std::span<const double> counts_a, std::span<const double> counts_b,
                                 double min_expected) {
  require(counts_a.size() == counts_b.size(), "chi_square_two_sample: size mismatch");
  double na = 0.0, nb = 0.0;
  for (double v : counts_a) na += v;
  for (double v : counts_b) nb += v;
  std::vector<double> a, b;
  double acc_a = 0.0, acc_b = 0.0;
  auto small = [&](double ca, double cb) {
    double tot = ca + cb;
    return std::min(tot * na / (na + nb), tot * nb / (na + nb)) < min_expected;
  };
  for (std::size_t i = 0; i < counts_a.size(); ++i) {
    acc_a += counts_a[i];
    acc_b += counts_b[i];
    if (!small(acc_a, acc_b)) {
      a.push_back(acc_a);
      b.push_back(acc_b);
      acc_a = acc_b = 0.0;
    }
  }
  if (acc_a + acc_b > 0.0) {
    if (a.empty()) {
      a.push_back(acc_a);
      b.push_back(acc_b);
    } else {
      a.back() += acc_a;
      b.back() += acc_b;
    }
  }
  double chi2 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double tot = a[i] + b[i];
    double ea = tot * na / (na + nb), eb = tot * nb / (na + nb);
    if (ea > 0.0) chi2 += (a[i] - ea) * (a[i] - ea) / ea;
    if (eb > 0.0) chi2 += (b[i] - eb) * (b[i] - eb) / eb;
  }
  return {chi2, chi_square_survival(chi2, static_cast<double>(a.size()) - 1.0)};
}

}  // namespace ginibre::stats
