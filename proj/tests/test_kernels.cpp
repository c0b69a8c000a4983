#include <doctest.h>

#include <cmath>
#include <vector>

#include "ginibre/kernels.hpp"
#include "ginibre/rng.hpp"

using namespace ginibre;

namespace {

// direct series sum_{n < M} (z conj w)^n / n!, times the gaussian factors
Complex truncated_oracle(int first, int M, ComplexPoint z, ComplexPoint w) {
  Complex s = 0.0, term = 1.0;
  for (int n = 0; n < M; ++n) {
    if (n >= first) s += term;
    term *= z * std::conj(w) / double(n + 1);
  }
  return s * std::exp(-0.5 * (std::norm(z) + std::norm(w))) / kPi;
}

std::vector<ComplexPoint> random_points(int n, std::uint64_t seed, double scale = 1.5) {
  RngStream r(seed);
  std::vector<ComplexPoint> z(n);
  for (auto& p : z) p = {scale * r.normal(), scale * r.normal()};
  return z;
}

}  // namespace

TEST_CASE("ginibre kernel: diagonal, hermitian symmetry, modulus") {
  auto K = KernelSpec::ginibre();
  auto z = random_points(20, 1);
  for (auto a : z) {
    CHECK(K(a, a).real() == doctest::Approx(1.0 / kPi).epsilon(1e-15));
    CHECK(std::abs(K(a, a).imag()) < 1e-15);
    for (auto b : z) {
      CHECK(std::abs(K(a, b) - std::conj(K(b, a))) < 1e-15);
      CHECK(std::abs(K(a, b)) == doctest::Approx(std::exp(-0.5 * std::norm(a - b)) / kPi).epsilon(1e-13));
      Complex direct = std::exp(a * std::conj(b) - 0.5 * std::norm(a) - 0.5 * std::norm(b)) / kPi;
      CHECK(std::abs(K(a, b) - direct) < 1e-13);
    }
  }
}

TEST_CASE("palm kernel equals the rank-one update at the origin") {
  auto K = KernelSpec::ginibre();
  auto P = KernelSpec::palm();
  auto z = random_points(15, 2);
  z.push_back({1e-9, 2e-9});
  for (auto a : z) {
    CHECK(P(a, a).real() == doctest::Approx((1.0 - std::exp(-std::norm(a))) / kPi).epsilon(1e-12));
    CHECK(std::abs(P(0.0, a)) < 1e-15);
    for (auto b : z) {
      Complex upd = K(a, b) - K(a, 0.0) * K(0.0, b) / K(0.0, 0.0);
      CHECK(std::abs(P(a, b) - upd) < 1e-14);
    }
  }
}

TEST_CASE("palm transform of the ginibre and truncated kernels") {
  CHECK(palm_of(KernelSpec::ginibre()).family() == KernelSpec::Family::Palm);
  auto tp = palm_of(KernelSpec::truncated_ginibre(12));
  CHECK(tp.family() == KernelSpec::Family::TruncatedPalm);
  CHECK(tp.truncation() == 12);
}

TEST_CASE("conditioning at the origin reproduces the palm kernel") {
  auto C = condition(KernelSpec::ginibre(), {ComplexPoint(0.0, 0.0)});
  auto P = KernelSpec::palm();
  for (auto a : random_points(8, 3))
    for (auto b : random_points(8, 4)) CHECK(std::abs(C(a, b) - P(a, b)) < 1e-14);
}

TEST_CASE("conditioning on two anchors is the Schur complement") {
  auto K = KernelSpec::ginibre();
  std::vector<ComplexPoint> u = {{0.3, -0.2}, {-0.8, 0.5}};
  auto C = condition(K, u);
  auto G = gram(K, u);
  Eigen::MatrixXcd Gi = G.inverse();
  for (auto a : random_points(6, 5)) {
    for (auto b : random_points(6, 6)) {
      Eigen::VectorXcd ka(2), kb(2);
      for (int i = 0; i < 2; ++i) {
        ka(i) = K(a, u[i]);
        kb(i) = K(u[i], b);
      }
      Complex s = K(a, b) - (ka.transpose() * Gi * kb)(0);
      CHECK(std::abs(C(a, b) - s) < 1e-13);
    }
    CHECK(std::abs(C(a, u[0])) < 1e-13);
  }
  CHECK_THROWS_AS(condition(K, {ComplexPoint(1, 1), ComplexPoint(1, 1)}), PreconditionError);
}

TEST_CASE("truncated kernels against the direct series") {
  for (int M : {1, 5, 40}) {
    auto T = KernelSpec::truncated_ginibre(M);
    auto TP = KernelSpec::truncated_palm(M);
    for (auto a : random_points(6, 7))
      for (auto b : random_points(6, 8)) {
        CHECK(std::abs(T(a, b) - truncated_oracle(0, M, a, b)) < 1e-13);
        CHECK(std::abs(TP(a, b) - truncated_oracle(1, M, a, b)) < 1e-13);
      }
  }
}

TEST_CASE("truncated kernel approaches the full kernel in the bulk") {
  auto T = KernelSpec::truncated_ginibre(200);
  auto K = KernelSpec::ginibre();
  for (auto a : random_points(6, 9, 1.0))
    for (auto b : random_points(6, 10, 1.0)) CHECK(std::abs(T(a, b) - K(a, b)) < 1e-12);
}

TEST_CASE("mode functions") {
  ComplexPoint z(0.7, -1.1);
  for (int n : {0, 1, 4, 9}) {
    double fact = std::tgamma(n + 1.0);
    Complex f = std::pow(z, n) * std::exp(-0.5 * std::norm(z)) / std::sqrt(kPi * fact);
    CHECK(std::abs(mode_function(n, z) - f) < 1e-14);
  }
  auto v = mode_vector(2, 5, z);
  REQUIRE(v.size() == 5);
  CHECK(std::abs(v(3) - mode_function(5, z)) < 1e-15);
  // sum_n f_n(z) conj f_n(w) = K(z, w)
  ComplexPoint w(-0.4, 0.9);
  Complex s = mode_vector(0, 80, z).dot(mode_vector(0, 80, w));
  CHECK(std::abs(std::conj(s) - KernelSpec::ginibre()(z, w)) < 1e-14);
}

TEST_CASE("thinned kernel keeps intensity one over pi") {
  for (double alpha : {0.05, 0.5, 0.999}) {
    auto T = KernelSpec::thinned(alpha);
    ComplexPoint a(0.4, 1.2), b(-0.3, 0.2);
    CHECK(T(a, a).real() == doctest::Approx(1.0 / kPi).epsilon(1e-15));
    CHECK(std::abs(T(a, b)) == doctest::Approx(std::exp(-std::norm(a - b) / (2 * alpha)) / kPi).epsilon(1e-13));
  }
  CHECK_THROWS_AS(KernelSpec::thinned(1.0), PreconditionError);
  CHECK_THROWS_AS(KernelSpec::thinned(0.0), PreconditionError);
}

TEST_CASE("translated kernel is the ginibre kernel of shifted arguments") {
  ComplexPoint s(1.5, -0.5);
  auto T = KernelSpec::translated(s);
  auto K = KernelSpec::ginibre();
  ComplexPoint a(0.2, 0.1), b(-1.0, 0.7);
  CHECK(std::abs(T(a, b) - K(a - s, b - s)) < 1e-15);
  CHECK(std::abs(T(a, b)) == doctest::Approx(std::abs(K(a, b))).epsilon(1e-13));
}

TEST_CASE("finite matrix kernel") {
  Eigen::MatrixXcd H(2, 2);
  H << 0.5, Complex(0.1, 0.2), Complex(0.1, -0.2), 0.3;
  auto F = KernelSpec::finite_matrix(H);
  CHECK(F(ComplexPoint(1, 0), ComplexPoint(0, 0)) == Complex(0.1, -0.2));
  CHECK(F(ComplexPoint(0.5, 0), ComplexPoint(0, 0)) == Complex(0.0));
  auto P = palm_of(F);
  CHECK(std::abs(P(ComplexPoint(1, 0), ComplexPoint(1, 0)).real() - (0.3 - 0.05 / 0.5)) < 1e-14);
}

TEST_CASE("correlation functions") {
  auto K = KernelSpec::ginibre();
  std::vector<ComplexPoint> one = {{0.3, 0.3}};
  CHECK(correlation(K, one) == doctest::Approx(1.0 / kPi));
  std::vector<ComplexPoint> two = {{0.0, 0.0}, {0.8, 0.0}};
  double expect = (1.0 - std::exp(-0.64)) / (kPi * kPi) / 2.0;
  CHECK(correlation(K, two) == doctest::Approx(expect).epsilon(1e-13));
  std::vector<ComplexPoint> same = {{0.5, 0.5}, {0.5, 0.5}};
  CHECK(std::abs(correlation(K, same)) < 1e-15);
  auto G = gram(K, two);
  CHECK(G.rows() == 2);
  CHECK(std::abs(G(0, 1) - K(two[0], two[1])) < 1e-16);
}
