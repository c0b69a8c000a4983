#include "ginibre/probabilities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ginibre/special.hpp"
#include "ginibre/types.hpp"

namespace ginibre::probabilities {

namespace {

constexpr double kCut = 1e-16;
constexpr double kTmax = 50.0;
const std::vector<double> kBreaks = {0.0, 0.5, 1.0, 2.0, 3.5, 5.0, 7.5, 10.0, 15.0, 20.0, 30.0, 40.0, kTmax};

// sum_{n > N} P(n+1, x) <= P(N+2, x) / (1 - x/(N+3))
double mode_tail(int N, double x) {
  if (x >= N + 3.0) return std::numeric_limits<double>::infinity();
  return std::exp(special::log_mode_mass(N + 1, x)) / (1.0 - x / (N + 3.0));
}

Value integrate_segments(const std::function<double(double)>& f, const std::vector<double>& br,
                         double loose_from = 15.0) {
  Value v{0.0, 0.0};
  for (std::size_t i = 0; i + 1 < br.size(); ++i) {
    // beyond t = 15 the integrands are below 1e-36 and only absolute accuracy matters
    auto r = special::integrate(f, br[i], br[i + 1], br[i] < loose_from ? 1e-14 : 1e-6);
    v.value += r.value;
    v.error += r.error;
  }
  return v;
}

double product_at(double t) { return std::exp(mode_sums(t).log_product); }

}  // namespace

IncGammaTable::IncGammaTable(int n_max, std::vector<double> grid) : n_max_(n_max), grid_(std::move(grid)) {
  require(n_max >= 0, "IncGammaTable: n_max >= 0");
  lower_.resize(grid_.size() * (n_max_ + 1));
  upper_.resize(lower_.size());
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    require(grid_[i] >= 0.0, "IncGammaTable: grid must be nonnegative");
    for (int n = 0; n <= n_max_; ++n) {
      auto g = special::log_incomplete_gamma(n + 1.0, grid_[i]);
      double lf = std::lgamma(n + 1.0);
      lower_[i * (n_max_ + 1) + n] = g.log_p + lf;
      upper_[i * (n_max_ + 1) + n] = g.log_q + lf;
    }
  }
}

double IncGammaTable::identity_defect() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    for (int n = 0; n <= n_max_; ++n) {
      double a = log_lower(n, i), b = log_upper(n, i);
      double m = std::max(a, b);
      double s = m + std::log(std::exp(a - m) + std::exp(b - m));
      worst = std::max(worst, std::abs(s - std::lgamma(n + 1.0)) / std::max(1.0, std::lgamma(n + 1.0)));
    }
  }
  return worst;
}

ModeSums mode_sums(double t) {
  require(t >= 0.0, "mode_sums: t >= 0");
  ModeSums m{0.0, 0.0, 1.0, 0.0, 0.0, 1};
  if (t == 0.0) return m;
  m.s = 0.0;
  int n = 0;
  double last_p = 1.0;
  for (;; ++n) {
    auto g = special::log_incomplete_gamma(n + 1.0, t);
    m.log_product += g.log_q;
    double term = std::exp(special::log_poisson_pmf(n, t) - g.log_q);
    m.s += term;
    if (n >= 1) m.s1 += term;
    last_p = std::exp(g.log_p);
    if (n >= 1 && n + 3.0 > t && last_p < kCut) break;
  }
  m.modes = n + 1;
  double tail = mode_tail(n, t);
  m.product_rel_error = 2.0 * tail;
  m.s_error = 2.0 * last_p;
  return m;
}

Value void_prob_disk(double r) {
  require(r >= 0.0, "void_prob_disk: r >= 0");
  auto m = mode_sums(r * r);
  double v = std::exp(m.log_product);
  return {v, v * m.product_rel_error};
}

Value resolvent_origin_disk(double r) {
  require(r > 0.0, "resolvent_origin_disk: r > 0");
  auto m = mode_sums(r * r);
  return {m.s / kPi, m.s_error / kPi};
}

Value H_disk(double r) {
  require(r >= 0.0, "H_disk: r >= 0");
  auto m = mode_sums(r * r);
  double p = std::exp(m.log_product);
  return {p * m.s1, p * (m.s_error + m.s1 * m.product_rel_error)};
}

Value H_integral() {
  auto f = [](double t) {
    auto m = mode_sums(t);
    return std::exp(m.log_product) * m.s1;
  };
  Value v = integrate_segments(f, kBreaks);
  // tail: H <= Pi S and int_{50}^inf Pi S = Pi(50) <= 51 e^{-100}
  return {kPi * v.value, kPi * (v.error + 51.0 * std::exp(-2.0 * kTmax))};
}

Value H_integral_polar() {
  auto f = [](double r) {
    auto m = mode_sums(r * r);
    return r * std::exp(m.log_product) * m.s1;
  };
  std::vector<double> br;
  for (double t : kBreaks) br.push_back(std::sqrt(t));
  Value v = integrate_segments(f, br, std::sqrt(15.0));
  return {2.0 * kPi * v.value, 2.0 * kPi * v.error + kPi * 51.0 * std::exp(-2.0 * kTmax)};
}

Value ev_typical_cell() {
  auto f = [](double t) {
    auto m = mode_sums(t);
    return std::exp(m.log_product) * m.s;
  };
  Value v = integrate_segments(f, kBreaks);
  return {kPi * v.value, kPi * (v.error + 51.0 * std::exp(-2.0 * kTmax))};
}

Value ev_c0() {
  Value v = integrate_segments(product_at, kBreaks);
  // int_{50}^inf (1+t) e^{-2t} dt
  double tail = std::exp(-2.0 * kTmax) * ((1.0 + kTmax) / 2.0 + 0.25);
  return {kPi * v.value, kPi * (v.error + tail)};
}

Value ev_c0_lower_envelope() {
  auto f = [](double t) {
    double s = 0.0;
    for (int n = 0;; ++n) {
      double p = std::exp(special::log_mode_mass(n, t));
      s += p;
      if (n + 3.0 > t && p < 1e-18) break;
    }
    return std::max(0.0, 1.0 - s);
  };
  Value a = integrate_segments(f, {0.0, 1.0});
  Value b = integrate_segments(f, {1.0, 2.0});
  return {kPi * (a.value + b.value), kPi * (a.error + b.error)};
}

NeighborBound neighbor_bound_k1() {
  NeighborBound nb{};
  Value c0 = ev_c0();
  nb.numerator = 1.0 - c0.value / kPi;
  auto g = [](double s) {
    double t = s * s;
    auto m = mode_sums(t);
    return 2.0 * s * std::sqrt(std::max(0.0, m.s1 * std::exp(m.log_product)));
  };
  std::vector<double> br;
  for (double t : kBreaks) br.push_back(std::sqrt(t));
  Value den = integrate_segments(g, br, std::sqrt(15.0));
  // int_{50}^inf sqrt((t+3)(1+t)) e^{-t} dt <= (t+3) e^{-t} terms at 50
  nb.denominator = den.value;
  auto h = [](double t) {
    auto m = mode_sums(t);
    return m.s1 * std::exp(m.log_product + t);
  };
  Value hol = integrate_segments(h, kBreaks);
  nb.holder_integral = hol.value;
  nb.ratio_bound = (nb.numerator / nb.denominator) * (nb.numerator / nb.denominator);
  nb.holder = nb.numerator * nb.numerator;
  nb.error = den.error + c0.error + 60.0 * std::exp(-kTmax);
  return nb;
}

MehtaReport mehta_check(int count, double step) {
  require(count >= 1 && step > 0.0, "mehta_check: positive grid");
  MehtaReport rep{count, 0, std::numeric_limits<double>::infinity()};
  for (int k = 1; k <= count; ++k) {
    double t = step * k;
    double margin = std::log1p(t) - 2.0 * t - mode_sums(t).log_product;
    rep.min_log_margin = std::min(rep.min_log_margin, margin);
    if (margin < 0.0) ++rep.violations;
  }
  return rep;
}

double z_marginal(double r_in, double r_out) {
  require(r_in >= 0.0 && r_out >= r_in, "z_marginal: 0 <= r_in <= r_out");
  return std::exp(-r_in * r_in) - std::exp(-r_out * r_out);
}

Value z_marginal_series(double r_in, double r_out, int n_modes) {
  require(r_in >= 0.0 && r_out > r_in, "z_marginal_series: 0 <= r_in < r_out");
  require(n_modes >= 2, "z_marginal_series: n_modes >= 2");
  double xo = r_out * r_out, xi = r_in * r_in;
  std::vector<double> a;
  for (int n = 0; n < n_modes; ++n) {
    double po = std::exp(special::log_mode_mass(n, xo));
    double pi = xi > 0.0 ? std::exp(special::log_mode_mass(n, xi)) : 0.0;
    a.push_back(std::max(0.0, po - pi));
  }
  auto law = special::poisson_binomial(a);
  auto law0 = special::poisson_binomial(std::span<const double>(a).subspan(1));
  double c = 0.0, c0 = 0.0, sum = 0.0;
  for (int k = 0; k <= n_modes; ++k) {
    c += k < static_cast<int>(law.size()) ? law[k] : 0.0;
    c0 += k < static_cast<int>(law0.size()) ? law0[k] : 0.0;
    sum += c0 - c;
  }
  // truncation bound plus a floating-point allowance for the two CDF sums
  return {sum, 2.0 * mode_tail(n_modes - 1, xo) + 1e-13};
}

double z_conditional_void(double r) {
  require(r >= 0.0, "z_conditional_void: r >= 0");
  if (r == 0.0) return 0.0;
  return 1.0 - 1.0 / mode_sums(r * r).s;
}

Value radial_counting_law(const std::vector<double>& radii, RadialFamily family, const std::vector<int>& counts,
                          int truncation) {
  require(!radii.empty() && radii.size() == counts.size(), "radial_counting_law: one count per annulus");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    require(radii[i] > (i == 0 ? 0.0 : radii[i - 1]), "radial_counting_law: radii must increase");
    require(counts[i] >= 0, "radial_counting_law: counts >= 0");
  }
  std::size_t m = radii.size();
  std::vector<std::size_t> stride(m + 1, 1);
  for (std::size_t i = 0; i < m; ++i) stride[i + 1] = stride[i] * (counts[i] + 1);
  std::vector<double> dp(stride[m], 0.0), next(stride[m]);
  dp[0] = 1.0;
  int first = family == RadialFamily::Palm ? 1 : 0;
  double xm = radii.back() * radii.back();
  double err = 0.0;
  for (int n = first;; ++n) {
    if (truncation > 0 && n >= truncation) break;
    if (truncation <= 0 && n + 3.0 > xm && std::exp(special::log_mode_mass(n, xm)) < 1e-17) {
      err = mode_tail(n - 1, xm);
      break;
    }
    std::vector<double> p(m);
    double prev = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      double c = std::exp(special::log_mode_mass(n, radii[i] * radii[i]));
      p[i] = std::max(0.0, c - prev);
      prev = c;
    }
    double none = std::exp(special::log_mode_complement(n, xm));
    for (std::size_t s = 0; s < dp.size(); ++s) {
      double v = dp[s] * none;
      for (std::size_t i = 0; i < m; ++i) {
        std::size_t ci = (s / stride[i]) % (counts[i] + 1);
        if (ci > 0) v += dp[s - stride[i]] * p[i];
      }
      next[s] = v;
    }
    dp.swap(next);
  }
  return {dp.back(), err};
}

}  // namespace ginibre::probabilities
