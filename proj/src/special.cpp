#include "ginibre/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "ginibre/types.hpp"

namespace ginibre::special {

namespace {

constexpr double kEps = 1e-17;
constexpr double kTiny = 1e-300;
constexpr int kMaxIter = 100000;

// log(1 - e^v) for v <= 0
double log1m_exp(double v) {
  if (v > -0.6931471805599453) return std::log(-std::expm1(v));
  return std::log1p(-std::exp(v));
}

double log_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int k = 1; k < kMaxIter; ++k) {
    term *= x / (a + k);
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) break;
  }
  return -x + a * std::log(x) - std::lgamma(a) + std::log(sum);
}

double log_q_continued_fraction(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIter; ++i) {
    double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return -x + a * std::log(x) - std::lgamma(a) + std::log(h);
}

}  // namespace

LogIncGamma log_incomplete_gamma(double a, double x) {
  if (!(a > 0.0) || !(x >= 0.0)) throw PreconditionError("incomplete gamma: need a > 0, x >= 0");
  if (x == 0.0) return {-std::numeric_limits<double>::infinity(), 0.0};
  if (std::isinf(x)) return {0.0, -std::numeric_limits<double>::infinity()};
  if (x < a + 1.0) {
    double lp = log_p_series(a, x);
    return {lp, log1m_exp(lp)};
  }
  double lq = log_q_continued_fraction(a, x);
  return {log1m_exp(lq), lq};
}

double log_mode_mass(int n, double x) { return log_incomplete_gamma(n + 1.0, x).log_p; }

double log_mode_complement(int n, double x) { return log_incomplete_gamma(n + 1.0, x).log_q; }

double log_poisson_pmf(int n, double x) {
  if (x == 0.0) return n == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
  return n * std::log(x) - x - std::lgamma(n + 1.0);
}

const GaussRule& gauss_legendre(int order) {
  static std::mutex mutex;
  static std::map<int, GaussRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(order);
  if (it != cache.end()) return it->second;

  GaussRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  for (int i = 0; i < (order + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= order; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (order == 1) p0 = 1.0;
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[order - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[order - 1 - i] = w;
  }
  if (order == 1) {
    rule.nodes[0] = 0.0;
    rule.weights[0] = 2.0;
  }
  return cache.emplace(order, std::move(rule)).first->second;
}

Integral integrate(const std::function<double(double)>& f, double a, double b, double rel_tol) {
  double err = 0.0;
  double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, rel_tol, &err);
  return {v, err};
}

std::vector<double> elementary_symmetric(std::span<const double> values, int order) {
  std::vector<double> e(order + 1, 0.0);
  e[0] = 1.0;
  for (double v : values) {
    for (int k = order; k >= 1; --k) e[k] += v * e[k - 1];
  }
  return e;
}

std::vector<double> poisson_binomial(std::span<const double> probs) {
  std::vector<double> law(probs.size() + 1, 0.0);
  law[0] = 1.0;
  std::size_t filled = 0;
  for (double p : probs) {
    ++filled;
    for (std::size_t k = filled; k >= 1; --k) law[k] = law[k] * (1.0 - p) + law[k - 1] * p;
    law[0] *= 1.0 - p;
  }
  return law;
}

}  // namespace ginibre::special
