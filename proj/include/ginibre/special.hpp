#pragma once

#include <functional>
#include <span>
#include <vector>

namespace ginibre::special {

/// Logs of the regularized incomplete gamma functions P(a,x) = gamma(a,x)/Gamma(a)
/// and Q(a,x) = Gamma(a,x)/Gamma(a).
struct LogIncGamma {
  double log_p;
  double log_q;
};

/// Series for x < a + 1, Lentz continued fraction otherwise. Relative accuracy
/// is uniform in a and x because both branches stay in log space.
LogIncGamma log_incomplete_gamma(double a, double x);

/// log(gamma(n+1,x)/n!), the mass of mode n of the Ginibre kernel on a disk of radius sqrt(x).
double log_mode_mass(int n, double x);
/// log(Gamma(n+1,x)/n!).
double log_mode_complement(int n, double x);

/// log of the Poisson pmf x^n e^{-x}/n!.
double log_poisson_pmf(int n, double x);

/// Gauss-Legendre nodes and weights on [-1, 1]; cached per order.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussRule& gauss_legendre(int order);

struct Integral {
  double value;
  double error;
};

/// Adaptive Gauss-Kronrod on a finite interval.
Integral integrate(const std::function<double(double)>& f, double a, double b, double rel_tol = 1e-13);

/// Elementary symmetric polynomials e_0..e_order of the given values.
std::vector<double> elementary_symmetric(std::span<const double> values, int order);

/// Law of a sum of independent Bernoulli(p_i) variables, indices 0..size.
std::vector<double> poisson_binomial(std::span<const double> probs);

}  // namespace ginibre::special
