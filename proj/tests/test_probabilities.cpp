#include <doctest.h>

#include <cmath>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "ginibre/kernels.hpp"
#include "ginibre/probabilities.hpp"
#include "ginibre/special.hpp"
#include "ginibre/spectral.hpp"

using namespace ginibre;
using namespace ginibre::probabilities;
using boost::math::gamma_p;
using boost::math::gamma_q;

namespace {

double product_oracle(double t) {
  double p = 1.0;
  for (int n = 0; n < 400; ++n) {
    double q = gamma_q(n + 1.0, t);
    p *= q;
    if (p == 0.0 || (n > t + 40 && 1.0 - q < 1e-18)) break;
  }
  return p;
}

double s_oracle(double t) {
  double s = 0.0;
  for (int n = 0; n < 400; ++n) {
    double pmf = std::exp(n * std::log(t) - t - std::lgamma(n + 1.0));
    s += pmf / gamma_q(n + 1.0, t);
    if (n > t + 40 && pmf < 1e-20) break;
  }
  return s;
}

double integral_0_inf(double (*f)(double)) {
  using boost::math::quadrature::gauss_kronrod;
  double s = 0.0;
  const double cuts[] = {0, 0.5, 1, 2, 4, 8, 16, 30};
  for (int i = 0; i + 1 < 8; ++i) s += gauss_kronrod<double, 61>::integrate(f, cuts[i], cuts[i + 1], 10, 1e-14);
  return s;
}

double pi_fn(double t) { return product_oracle(t); }
double pis_fn(double t) { return t == 0.0 ? 1.0 : product_oracle(t) * s_oracle(t); }

// law of block counts for independent modes: DP over modes with the incomplete gamma oracle
double radial_oracle(const std::vector<double>& radii, int first, int last, const std::vector<int>& counts) {
  std::size_t A = radii.size();
  std::vector<int> dims(counts.begin(), counts.end());
  std::vector<int> stride(A + 1, 1);
  for (std::size_t i = 0; i < A; ++i) stride[i + 1] = stride[i] * (dims[i] + 1);
  std::vector<double> dp(stride[A], 0.0);
  dp[0] = 1.0;
  for (int n = first; n < last; ++n) {
    std::vector<double> pr(A);
    double prev = 0.0, out = 1.0;
    for (std::size_t i = 0; i < A; ++i) {
      double c = gamma_p(n + 1.0, radii[i] * radii[i]);
      pr[i] = c - prev;
      prev = c;
    }
    out = 1.0 - prev;
    std::vector<double> nx(dp.size(), 0.0);
    for (int idx = 0; idx < stride[A]; ++idx) {
      if (dp[idx] == 0.0) continue;
      nx[idx] += dp[idx] * out;
      for (std::size_t i = 0; i < A; ++i) {
        int ci = idx / stride[i] % (dims[i] + 1);
        if (ci < dims[i]) nx[idx + stride[i]] += dp[idx] * pr[i];
      }
    }
    dp.swap(nx);
  }
  return dp[stride[A] - 1];
}

}  // namespace

TEST_CASE("incomplete gamma table identity") {
  IncGammaTable t(60, {0.01, 0.5, 1.0, 5.0, 20.0, 80.0});
  CHECK(t.identity_defect() < 1e-12);
  CHECK(std::exp(t.log_lower(0, 2)) == doctest::Approx(1 - std::exp(-1.0)).epsilon(1e-14));
  CHECK(std::exp(t.log_upper(3, 3)) == doctest::Approx(gamma_q(4.0, 5.0) * 6.0).epsilon(1e-13));
}

TEST_CASE("disk void probability") {
  CHECK(void_prob_disk(0.0).value == 1.0);
  for (double r : {0.3, 1.0, 2.0, 4.0}) {
    auto v = void_prob_disk(r);
    CHECK(v.value == doctest::Approx(product_oracle(r * r)).epsilon(1e-12));
    CHECK(v.error < 1e-12 * std::max(v.value, 1e-300) + 1e-300);
    double t = r * r;
    CHECK(v.value <= (1 + t) * std::exp(-2 * t));
  }
}

TEST_CASE("void probability against the fredholm determinant") {
  for (double r : {0.5, 1.0, 1.5}) {
    auto ny = spectral::nystrom_decompose(KernelSpec::ginibre(), spectral::PlanarDomain::disk(0.0, r));
    CHECK(spectral::fredholm_det(ny) == doctest::Approx(void_prob_disk(r).value).epsilon(1e-4));
  }
  auto an = spectral::disk_modes(KernelSpec::ginibre(), 1.0);
  CHECK(spectral::fredholm_det(an) == doctest::Approx(void_prob_disk(1.0).value).epsilon(1e-8));
}

TEST_CASE("mehta envelope on the grid") {
  auto m = mehta_check(1000, 0.01);
  CHECK(m.points == 1000);
  CHECK(m.violations == 0);
  CHECK(m.min_log_margin >= 0.0);
}

TEST_CASE("resolvent at the origin of B(a, |a|)") {
  CHECK(resolvent_origin_disk(1e-6).value == doctest::Approx(1 / kPi).epsilon(1e-9));
  for (double r : {0.2, 1.0, 2.5}) {
    double v = resolvent_origin_disk(r).value;
    CHECK(v >= 1 / kPi);
    CHECK(v == doctest::Approx(s_oracle(r * r) / kPi).epsilon(1e-12));
  }
  // the disk B(a, |a|) through the origin, from the analytic disk spectrum
  for (double r : {0.5, 1.0}) {
    auto sd = spectral::disk_modes(KernelSpec::ginibre(), r, {r, 0.0});
    CHECK(spectral::resolvent(sd, 0.0, 0.0).real() == doctest::Approx(resolvent_origin_disk(r).value).epsilon(1e-10));
    auto ny = spectral::nystrom_decompose(KernelSpec::ginibre(), spectral::PlanarDomain::disk({0.0, r}, r));
    CHECK(spectral::resolvent(ny, 0.0, 0.0).real() == doctest::Approx(resolvent_origin_disk(r).value).epsilon(1e-5));
  }
}

TEST_CASE("H on disks") {
  CHECK(H_disk(0.0).value == 0.0);
  for (double r : {0.1, 0.7, 1.5, 3.0, 6.0}) {
    auto h = H_disk(r);
    CHECK(h.value >= 0.0);
    double t = r * r;
    CHECK(h.value == doctest::Approx(product_oracle(t) * (s_oracle(t) - 1.0)).epsilon(1e-10));
  }
}

TEST_CASE("integral of H two ways") {
  auto a = H_integral(), b = H_integral_polar();
  CHECK(a.value == doctest::Approx(b.value).epsilon(1e-10));
  double int_pi = integral_0_inf(pi_fn);
  CHECK(a.value == doctest::Approx(kPi * (1 - int_pi)).epsilon(1e-9));
  CHECK(a.value >= 0.0);
  CHECK(a.value == doctest::Approx(ev_typical_cell().value - ev_c0().value).epsilon(1e-9));
}

TEST_CASE("mean area of the typical cell") {
  auto e = ev_typical_cell();
  CHECK(std::abs(e.value - kPi) < 1e-6);
  CHECK(integral_0_inf(pis_fn) * kPi == doctest::Approx(kPi).epsilon(1e-8));
  auto m0 = mode_sums(0.0);
  CHECK(std::exp(m0.log_product) * m0.s == doctest::Approx(1.0));
}

TEST_CASE("integrand is minus the derivative of the product") {
  for (double t : {0.5, 1.0, 2.0}) {
    double h = 1e-4;
    double d = -(void_prob_disk(std::sqrt(t + h)).value - void_prob_disk(std::sqrt(t - h)).value) / (2 * h);
    auto ms = mode_sums(t);
    CHECK(std::abs(d - std::exp(ms.log_product) * ms.s) < 1e-6);
  }
}

TEST_CASE("mean area of the zero cell") {
  auto c = ev_c0();
  CHECK(c.value + c.error < 0.75 * kPi);
  CHECK(c.value == doctest::Approx(kPi * integral_0_inf(pi_fn)).epsilon(1e-9));
  auto low = ev_c0_lower_envelope();
  CHECK(low.value == doctest::Approx(kPi / 2).epsilon(1e-8));
  CHECK(c.value >= low.value);
  CHECK(c.error < 1e-8);
}

TEST_CASE("neighbour probability bound chain") {
  auto nb = neighbor_bound_k1();
  CHECK(nb.chain_holds());
  CHECK(nb.ratio_bound >= nb.holder);
  CHECK(nb.holder >= 1.0 / 16);
  CHECK(nb.denominator <= 1.0);
  CHECK(nb.holder_integral == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(nb.numerator == doctest::Approx(1.0 - ev_c0().value / kPi).epsilon(1e-10));
  CHECK(nb.holder == doctest::Approx(nb.numerator * nb.numerator).epsilon(1e-14));
}

TEST_CASE("Z marginal") {
  CHECK(z_marginal(0.0, 1.0) == doctest::Approx(1 - std::exp(-1.0)).epsilon(1e-15));
  CHECK(z_marginal(0.0, 40.0) == doctest::Approx(1.0));
  for (double r : {0.5, 1.0, 2.0}) {
    auto v = z_marginal_series(0.0, r);
    CHECK(std::abs(v.value - (1 - std::exp(-r * r))) <= v.error);
  }
  auto ann = z_marginal_series(0.5, 1.5);
  CHECK(std::abs(ann.value - z_marginal(0.5, 1.5)) <= ann.error);
}

TEST_CASE("conditional void of Z") {
  CHECK(z_conditional_void(1e-8) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(z_conditional_void(1.0) == doctest::Approx(1.0 - 1.0 / s_oracle(1.0)).epsilon(1e-12));
  double prev = -1.0;
  for (int i = 1; i <= 60; ++i) {
    double v = z_conditional_void(0.05 * i);
    CHECK(v >= prev);
    CHECK(v <= 1.0);
    prev = v;
  }
}

TEST_CASE("conditioned void probabilities dominate unconditioned ones") {
  for (double r : {0.5, 1.0, 1.5}) {
    ComplexPoint c(r, 0.0);
    auto sd = spectral::disk_modes(KernelSpec::ginibre(), r, c);
    double base = spectral::fredholm_det(sd);
    for (ComplexPoint u : {ComplexPoint(0.0, 0.0), ComplexPoint(2.5 * r, 0.3), ComplexPoint(-1.0, 1.0)}) {
      // P{N_A(psi_u) = 0} = det(I - K_A) R_A(u,u)/K(u,u)
      double cond = base * spectral::resolvent(sd, u, u).real() * kPi;
      CHECK(cond >= base - 1e-14);
    }
  }
}

TEST_CASE("radial counting laws") {
  for (double r : {0.5, 1.0, 2.0})
    CHECK(radial_counting_law({r}, RadialFamily::Ginibre, {0}).value ==
          doctest::Approx(void_prob_disk(r).value).epsilon(1e-12));

  // single disk: Bernoulli convolution of the mode masses
  std::vector<double> p;
  for (int n = 0; n < 80; ++n) p.push_back(gamma_p(n + 1.0, 1.44));
  auto law = special::poisson_binomial(p);
  for (int k = 0; k < 6; ++k)
    CHECK(radial_counting_law({1.2}, RadialFamily::Ginibre, {k}).value == doctest::Approx(law[k]).epsilon(1e-10));

  // independent-radii law on a partition, several count tuples
  std::vector<double> radii = {0.6, 1.1, 1.9};
  for (auto c : std::vector<std::vector<int>>{{0, 0, 0}, {1, 0, 2}, {0, 2, 1}, {1, 1, 3}}) {
    double g = radial_counting_law(radii, RadialFamily::Ginibre, c).value;
    CHECK(std::abs(g - radial_oracle(radii, 0, 120, c)) < 1e-10);
    double pm = radial_counting_law(radii, RadialFamily::Palm, c).value;
    CHECK(std::abs(pm - radial_oracle(radii, 1, 120, c)) < 1e-10);
    double tr = radial_counting_law(radii, RadialFamily::Ginibre, c, 8).value;
    CHECK(std::abs(tr - radial_oracle(radii, 0, 8, c)) < 1e-12);
  }
}
