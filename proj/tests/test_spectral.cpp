#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "ginibre/geometry.hpp"
#include "ginibre/kernels.hpp"
#include "ginibre/spectral.hpp"

using namespace ginibre;
using namespace ginibre::spectral;

namespace {

std::vector<double> disk_oracle(double r, int first, double floor = 1e-14) {
  std::vector<double> a;
  for (int n = first;; ++n) {
    double v = boost::math::gamma_p(n + 1.0, r * r);
    if (v < floor && n > r * r) break;
    a.push_back(v);
  }
  return a;
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b, double floor) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < floor) break;
    double v = i < b.size() ? b[i] : 0.0;
    m = std::max(m, std::abs(a[i] - v));
  }
  return m;
}

geometry::HalfPlanePolygon pentagon() {
  std::vector<ComplexPoint> z = {{1.6, 0.2}, {-0.3, 1.5}, {-1.7, -0.1}, {0.1, -1.8}, {1.1, -1.2}};
  return geometry::halfplane_intersection(z);
}

}  // namespace

TEST_CASE("domain area and membership") {
  auto d = PlanarDomain::disk({1, 1}, 0.5);
  CHECK(d.area() == doctest::Approx(kPi * 0.25).epsilon(1e-14));
  CHECK(d.contains({1.2, 1.2}));
  CHECK_FALSE(d.contains({0, 0}));
  auto a = PlanarDomain::annulus(0.5, 1.0);
  CHECK(a.area() == doctest::Approx(kPi * 0.75).epsilon(1e-14));
  CHECK_FALSE(a.contains({0.2, 0}));
}

TEST_CASE("quadrature rules integrate polynomial moments") {
  auto d = PlanarDomain::disk({0.3, -0.2}, 1.3);
  auto q = build_quadrature(d, 2048);
  double w = 0, m = 0;
  for (std::size_t i = 0; i < q.nodes.size(); ++i) {
    w += q.weights[i];
    m += q.weights[i] * std::norm(q.nodes[i] - ComplexPoint(0.3, -0.2));
  }
  CHECK(w == doctest::Approx(kPi * 1.69).epsilon(1e-12));
  CHECK(m == doctest::Approx(kPi * std::pow(1.3, 4) / 2).epsilon(1e-12));

  auto p = pentagon();
  auto f = PlanarDomain::flower(p);
  auto qf = build_quadrature(f, 4096);
  double wf = 0;
  for (double x : qf.weights) wf += x;
  CHECK(wf == doctest::Approx(geometry::union_area_exact(f.disks)).epsilon(1e-10));
}

TEST_CASE("analytic disk spectra") {
  for (double r : {0.5, 1.0, 2.0}) {
    auto sd = disk_modes(KernelSpec::ginibre(), r);
    auto o = disk_oracle(r, 0);
    CHECK(sd.source == SpectralDecomposition::Source::Analytic);
    CHECK(max_diff(o, sd.eigenvalues, 1e-14) < 1e-13);
    CHECK(std::is_sorted(sd.eigenvalues.rbegin(), sd.eigenvalues.rend()));
    auto sp = disk_modes(KernelSpec::palm(), r);
    CHECK(max_diff(disk_oracle(r, 1), sp.eigenvalues, 1e-14) < 1e-13);
    // translation invariance of the spectrum
    auto sc = disk_modes(KernelSpec::ginibre(), r, {0.7, -1.1});
    CHECK(max_diff(o, sc.eigenvalues, 1e-14) < 1e-13);
  }
}

TEST_CASE("nystrom matches the analytic spectrum") {
  for (double r : {0.5, 1.0, 1.5, 2.0}) {
    auto an = disk_modes(KernelSpec::ginibre(), r);
    auto ny = nystrom_decompose(KernelSpec::ginibre(), PlanarDomain::disk(0.0, r));
    CHECK(ny.source == SpectralDecomposition::Source::Quadrature);
    CHECK(max_diff(an.eigenvalues, ny.eigenvalues, 1e-8) < 1e-6);
    CHECK(fredholm_det(ny) == doctest::Approx(fredholm_det(an)).epsilon(1e-6));
  }
}

TEST_CASE("nystrom on an off-centre disk sees the same spectrum") {
  auto an = disk_modes(KernelSpec::ginibre(), 1.0);
  auto ny = nystrom_decompose(KernelSpec::ginibre(), PlanarDomain::disk({1.0, 0.5}, 1.0));
  CHECK(max_diff(an.eigenvalues, ny.eigenvalues, 1e-8) < 1e-6);
}

TEST_CASE("galerkin modes on disks and annuli") {
  for (double r : {0.5, 1.5, 3.0}) {
    auto g = galerkin_modes(KernelSpec::ginibre(), PlanarDomain::disk(0.0, r), 512);
    CHECK(g.source == SpectralDecomposition::Source::Modal);
    CHECK(max_diff(disk_oracle(r, 0), g.eigenvalues, 1e-14) < 1e-12);
    auto gp = galerkin_modes(KernelSpec::palm(), PlanarDomain::disk(0.0, r), 512);
    CHECK(max_diff(disk_oracle(r, 1), gp.eigenvalues, 1e-14) < 1e-12);
  }
  auto ga = galerkin_modes(KernelSpec::ginibre(), PlanarDomain::annulus(0.5, 1.5), 512);
  std::vector<double> o;
  for (int n = 0; n < 60; ++n)
    o.push_back(boost::math::gamma_p(n + 1.0, 2.25) - boost::math::gamma_p(n + 1.0, 0.25));
  std::sort(o.rbegin(), o.rend());
  CHECK(max_diff(o, ga.eigenvalues, 1e-14) < 1e-12);
}

TEST_CASE("galerkin and nystrom agree on a flower") {
  auto f = PlanarDomain::flower(pentagon());
  for (auto K : {KernelSpec::ginibre(), KernelSpec::palm()}) {
    auto g = galerkin_modes(K, f, 1024);
    auto n = nystrom_decompose(K, f);
    CHECK(max_diff(g.eigenvalues, n.eigenvalues, 1e-8) < 1e-6);
    CHECK(fredholm_det(g) == doctest::Approx(fredholm_det(n)).epsilon(1e-5));
    // budget independence of the semi-analytic gram
    auto g2 = galerkin_modes(K, f, 4096);
    CHECK(fredholm_det(g) == doctest::Approx(fredholm_det(g2)).epsilon(1e-10));
  }
}

TEST_CASE("truncated kernels through galerkin") {
  int M = 10;
  auto g = galerkin_modes(KernelSpec::truncated_ginibre(M), PlanarDomain::disk(0.0, 2.0), 512);
  auto o = disk_oracle(2.0, 0);
  o.resize(M);
  CHECK(max_diff(o, g.eigenvalues, 1e-14) < 1e-12);
  CHECK(g.size() <= static_cast<std::size_t>(M));
}

TEST_CASE("resolvent on a centred disk") {
  for (double r : {0.3, 1.0, 2.0}) {
    auto sd = disk_modes(KernelSpec::ginibre(), r);
    // only mode 0 is nonzero at the origin: R = K(0,0)/(1 - alpha_0)
    CHECK(resolvent(sd, 0.0, 0.0).real() == doctest::Approx(std::exp(r * r) / kPi).epsilon(1e-10));
    auto g = galerkin_modes(KernelSpec::ginibre(), PlanarDomain::disk(0.0, r), 512);
    CHECK(resolvent(g, 0.0, 0.0).real() == doctest::Approx(std::exp(r * r) / kPi).epsilon(1e-10));
  }
}

TEST_CASE("resolvent dominates the kernel on the diagonal") {
  auto f = PlanarDomain::flower(pentagon());
  auto g = galerkin_modes(KernelSpec::palm(), f, 1024);
  auto K = KernelSpec::palm();
  for (ComplexPoint z : {ComplexPoint(0.2, 0.1), ComplexPoint(1.0, 1.0), ComplexPoint(-2.0, 0.5), ComplexPoint(3, 3)}) {
    CHECK(resolvent(g, z, z).real() >= K(z, z).real() - 1e-14);
    Complex a = resolvent(g, z, 0.5), b = resolvent(g, 0.5, z);
    CHECK(std::abs(a - std::conj(b)) < 1e-12);
  }
}

TEST_CASE("resolvent from nystrom matches the disk oracle off-centre") {
  ComplexPoint c(1.0, 0.0);
  auto an = disk_modes(KernelSpec::ginibre(), 1.0, c);
  auto ny = nystrom_decompose(KernelSpec::ginibre(), PlanarDomain::disk(c, 1.0));
  for (ComplexPoint z : {ComplexPoint(0.0, 0.0), ComplexPoint(1.2, 0.3), ComplexPoint(2.5, -1.0)})
    CHECK(std::abs(resolvent(ny, z, z) - resolvent(an, z, z)) < 1e-5);
}

TEST_CASE("janossy density equals determinant times resolvent minor") {
  auto f = PlanarDomain::flower(pentagon());
  auto g = galerkin_modes(KernelSpec::palm(), f, 1024);
  std::vector<ComplexPoint> one = {{1.6, 0.2}};
  std::vector<ComplexPoint> two = {{1.6, 0.2}, {-0.3, 1.5}};
  for (const auto& z : {one, two}) {
    double direct = fredholm_det(g) * resolvent_minor(g, z);
    CHECK(janossy_density(g, z) == doctest::Approx(direct).epsilon(1e-9));
  }
  auto d = disk_modes(KernelSpec::ginibre(), 0.8);
  CHECK(janossy_density(d, std::vector<ComplexPoint>{0.0}) ==
        doctest::Approx(fredholm_det(d) * std::exp(0.64) / kPi).epsilon(1e-10));
}

TEST_CASE("log fredholm determinant and eigenfunctions") {
  auto sd = disk_modes(KernelSpec::ginibre(), 1.2);
  CHECK(std::exp(log_fredholm_det(sd)) == doctest::Approx(fredholm_det(sd)).epsilon(1e-13));
  auto ny = nystrom_decompose(KernelSpec::ginibre(), PlanarDomain::disk(0.0, 1.2));
  // |h_0| on the disk is the normalised mode 0
  ComplexPoint z(0.3, 0.4);
  double a0 = boost::math::gamma_p(1.0, 1.44);
  double expect = std::abs(mode_function(0, z)) / std::sqrt(a0);
  CHECK(std::abs(ny.eigenfunction(0, z)) == doctest::Approx(expect).epsilon(1e-5));
  CHECK(std::abs(sd.eigenfunction(0, z)) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("platrier identity residual") {
  for (double r : {0.25, 0.5}) {
    auto d = PlanarDomain::disk({r, 0.0}, r, 1024);
    std::vector<ComplexPoint> one = {{0.0, 0.0}};
    std::vector<ComplexPoint> two = {{0.0, 0.0}, {0.4, 0.3}};
    CHECK(platrier_residual(KernelSpec::ginibre(), d, one, 8) < 1e-5);
    CHECK(platrier_residual(KernelSpec::ginibre(), d, two, 8) < 1e-5);
  }
}

TEST_CASE("iterated traces decay") {
  auto sd = disk_modes(KernelSpec::ginibre(), 0.5);
  double t2 = iterated_trace(sd, 2), t3 = iterated_trace(sd, 3);
  CHECK(t2 > t3);
  double a0 = boost::math::gamma_p(1.0, 0.25), a1 = boost::math::gamma_p(2.0, 0.25);
  CHECK(t2 == doctest::Approx(a0 * a0 + a1 * a1).epsilon(1e-3));
}
