#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "ginibre/geometry.hpp"
#include "ginibre/rng.hpp"

using namespace ginibre;
using namespace ginibre::geometry;

namespace {

double lens(double r, double d) {
  if (d >= 2 * r) return 0.0;
  return 2 * r * r * std::acos(d / (2 * r)) - 0.5 * d * std::sqrt(4 * r * r - d * d);
}

// grid count over the bounding box, independent of the library
double grid_area(const DiskUnion& u, int n) {
  double lo_x = 1e300, hi_x = -1e300, lo_y = 1e300, hi_y = -1e300;
  for (auto& d : u.disks) {
    lo_x = std::min(lo_x, d.center.real() - d.radius);
    hi_x = std::max(hi_x, d.center.real() + d.radius);
    lo_y = std::min(lo_y, d.center.imag() - d.radius);
    hi_y = std::max(hi_y, d.center.imag() + d.radius);
  }
  double hx = (hi_x - lo_x) / n, hy = (hi_y - lo_y) / n;
  long hits = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      ComplexPoint p(lo_x + (i + 0.5) * hx, lo_y + (j + 0.5) * hy);
      for (auto& d : u.disks)
        if (std::norm(p - d.center) <= d.radius * d.radius) {
          ++hits;
          break;
        }
    }
  return hits * hx * hy;
}

std::vector<ComplexPoint> lattice(ComplexPoint a, ComplexPoint b, int n) {
  std::vector<ComplexPoint> pts;
  for (int i = -n; i <= n; ++i)
    for (int j = -n; j <= n; ++j)
      if (i || j) pts.push_back(double(i) * a + double(j) * b);
  return pts;
}

}  // namespace

TEST_CASE("single disk through the origin") {
  std::vector<ComplexPoint> z = {{0.6, 0.8}};
  auto u = disks_through_origin(z);
  REQUIRE(u.disks.size() == 1);
  CHECK(u.disks[0].radius == doctest::Approx(1.0));
  CHECK(union_area(u).value == doctest::Approx(kPi).epsilon(1e-14));
  CHECK(union_area(u).std_error == 0.0);
  CHECK(u.max_extent() == doctest::Approx(2.0));
  CHECK(u.contains(0.0));
  CHECK(u.contains({1.2, 1.6}));
  CHECK_FALSE(u.contains({1.3, 1.7}));
}

TEST_CASE("two unit disks at centre distance one") {
  std::vector<ComplexPoint> z = {{1.0, 0.0}, std::polar(1.0, kPi / 3)};
  auto u = disks_through_origin(z);
  double expect = 2 * kPi - (2 * kPi / 3 - std::sqrt(3.0) / 2);
  CHECK(union_area_exact(u) == doctest::Approx(expect).epsilon(1e-13));
  CHECK(expect == doctest::Approx(2 * kPi - lens(1.0, 1.0)).epsilon(1e-14));
}

TEST_CASE("tangent disks at +-1") {
  std::vector<ComplexPoint> z = {{1.0, 0.0}, {-1.0, 0.0}};
  CHECK(union_area_exact(disks_through_origin(z)) == doctest::Approx(2 * kPi).epsilon(1e-13));
}

TEST_CASE("identical and nested disks") {
  DiskUnion same{{{{0.5, 0.5}, 1.0}, {{0.5, 0.5}, 1.0}}};
  CHECK(union_area_exact(same) == doctest::Approx(kPi).epsilon(1e-13));
  DiskUnion nested{{{{0.0, 0.0}, 2.0}, {{0.3, 0.1}, 1.0}}};
  CHECK(union_area_exact(nested) == doctest::Approx(4 * kPi).epsilon(1e-13));
}

TEST_CASE("exact arc area matches grid and Monte Carlo on random unions") {
  RngStream r(12);
  for (int t = 0; t < 6; ++t) {
    int n = 2 + t;
    std::vector<ComplexPoint> z(n);
    for (auto& p : z) p = {r.normal(), r.normal()};
    auto u = disks_through_origin(z);
    double exact = union_area_exact(u);
    double grid = grid_area(u, 1200);
    CHECK(exact == doctest::Approx(grid).epsilon(2e-3));
    auto mc = union_area(u, AreaMethod::MonteCarlo, 200000, 5 + t);
    CHECK(std::abs(mc.value - exact) < 4 * mc.std_error);
    CHECK(union_area(u).value == doctest::Approx(exact).epsilon(1e-14));
  }
}

TEST_CASE("union area is monotone and subadditive") {
  RngStream r(99);
  std::vector<ComplexPoint> z;
  double prev = 0.0, sum = 0.0;
  for (int i = 0; i < 7; ++i) {
    z.push_back({r.normal(), r.normal()});
    double a = union_area_exact(disks_through_origin(z));
    sum += kPi * std::norm(z.back());
    CHECK(a >= prev - 1e-12);
    CHECK(a <= sum + 1e-12);
    prev = a;
  }
}

TEST_CASE("circle intersections") {
  Disk a{{0, 0}, 1}, b{{1, 0}, 1};
  auto p = circle_intersections(a, b);
  REQUIRE(p.size() == 2);
  for (auto q : p) {
    CHECK(std::abs(std::abs(q) - 1.0) < 1e-14);
    CHECK(std::abs(std::abs(q - 1.0) - 1.0) < 1e-14);
  }
  CHECK(circle_intersections(a, Disk{{3, 0}, 1}).empty());
  CHECK(circle_intersections(a, Disk{{0.1, 0}, 0.2}).empty());
}

TEST_CASE("half-plane square and triangle") {
  std::vector<ComplexPoint> sq = {{2, 0}, {0, 2}, {-2, 0}, {0, -2}};
  auto p = halfplane_intersection(sq);
  REQUIRE(p.bounded);
  CHECK(p.side_count() == 4);
  CHECK(polygon_area(p.vertices) == doctest::Approx(4.0).epsilon(1e-13));
  CHECK(polygon_perimeter(p.vertices) == doctest::Approx(8.0).epsilon(1e-13));
  CHECK(in_set_A(sq));
  for (auto v : p.vertices) CHECK(std::abs(std::abs(v.real()) - 1.0) < 1e-13);

  std::vector<ComplexPoint> tri = {std::polar(2.0, 0.0), std::polar(2.0, 2 * kPi / 3), std::polar(2.0, 4 * kPi / 3)};
  auto t = halfplane_intersection(tri);
  REQUIRE(t.bounded);
  CHECK(t.side_count() == 3);
  // equilateral triangle with inradius 1
  CHECK(polygon_area(t.vertices) == doctest::Approx(3 * std::sqrt(3.0)).epsilon(1e-11));
}

TEST_CASE("unbounded and redundant generators") {
  std::vector<ComplexPoint> half = {{1, 0}, {1, 1}, {1, -1}};
  auto p = halfplane_intersection(half);
  CHECK_FALSE(p.bounded);
  CHECK_FALSE(in_set_A(half));
  std::vector<ComplexPoint> red = {{2, 0}, {0, 2}, {-2, 0}, {0, -2}, {5, 5}};
  auto q = halfplane_intersection(red);
  REQUIRE(q.bounded);
  CHECK(q.side_count() == 4);
  CHECK_FALSE(in_set_A(red));
  CHECK(std::find(q.neighbors.begin(), q.neighbors.end(), 4) == q.neighbors.end());
}

TEST_CASE("polygon contains and flower covers the polygon") {
  std::vector<ComplexPoint> z = {{2, 0.3}, {-0.4, 1.8}, {-1.9, -0.2}, {0.2, -2.1}, {1.3, -1.5}};
  auto p = halfplane_intersection(z);
  REQUIRE(p.bounded);
  CHECK(p.contains(0.0));
  auto f = flower(p);
  CHECK(f.disks.size() == p.vertices.size());
  RngStream r(4);
  for (int i = 0; i < 2000; ++i) {
    ComplexPoint x(3 * r.uniform() - 1.5, 3 * r.uniform() - 1.5);
    if (p.contains(x)) CHECK(f.contains(x));
  }
  for (auto v : p.vertices) CHECK(f.contains(v));
}

TEST_CASE("polygon clipped to a disk") {
  std::vector<ComplexPoint> sq = {{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};
  CHECK(polygon_disk_area(sq, 10.0) == doctest::Approx(4.0).epsilon(1e-13));
  CHECK(polygon_disk_area(sq, 0.5) == doctest::Approx(kPi * 0.25).epsilon(1e-13));
  // r = sqrt 2 circumscribes the square
  CHECK(polygon_disk_area(sq, std::sqrt(2.0)) == doctest::Approx(4.0).epsilon(1e-12));
  // r = 1.2: disk minus four caps beyond |x| = 1
  double r = 1.2, cap = r * r * std::acos(1.0 / r) - std::sqrt(r * r - 1.0);
  CHECK(polygon_disk_area(sq, r) == doctest::Approx(kPi * r * r - 4 * cap).epsilon(1e-12));
}

TEST_CASE("voronoi cells of lattices") {
  auto sq = voronoi_cell_at_origin(lattice({1, 0}, {0, 1}, 3));
  REQUIRE(sq.bounded);
  CHECK(sq.side_count == 4);
  CHECK(sq.area == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(sq.perimeter == doctest::Approx(4.0).epsilon(1e-13));
  CHECK(sq.determinacy_radius == doctest::Approx(std::sqrt(2.0)).epsilon(1e-13));

  auto hex = voronoi_cell_at_origin(lattice({1, 0}, std::polar(1.0, kPi / 3), 3));
  REQUIRE(hex.bounded);
  CHECK(hex.side_count == 6);
  CHECK(hex.area == doctest::Approx(std::sqrt(3.0) / 2).epsilon(1e-12));
  CHECK(hex.neighbor_indices.size() == 6);
}

TEST_CASE("adding a point never enlarges the cell of the origin") {
  RngStream r(31);
  for (int t = 0; t < 200; ++t) {
    std::vector<ComplexPoint> pts(30);
    for (auto& p : pts) p = {3 * r.normal(), 3 * r.normal()};
    auto big = voronoi_cell_at_origin(pts);
    pts.push_back({r.normal(), r.normal()});
    auto small = voronoi_cell_at_origin(pts);
    if (!big.bounded) continue;
    REQUIRE(small.bounded);
    CHECK(small.area <= big.area + 1e-12);
    for (auto v : small.vertices) {
      bool inside = true;
      for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        if (std::real((v - pts[i] / 2.0) * std::conj(pts[i])) > 1e-9) inside = false;
      CHECK(inside);
    }
  }
}

TEST_CASE("cell is determined inside its determinacy radius") {
  RngStream r(8);
  std::vector<ComplexPoint> pts(60);
  for (auto& p : pts) p = {2.5 * r.normal(), 2.5 * r.normal()};
  auto c = voronoi_cell_at_origin(pts);
  REQUIRE(c.bounded);
  std::vector<ComplexPoint> inner;
  for (auto p : pts)
    if (std::abs(p) <= c.determinacy_radius) inner.push_back(p);
  auto d = voronoi_cell_at_origin(inner);
  CHECK(d.area == doctest::Approx(c.area).epsilon(1e-11));
  CHECK(d.side_count == c.side_count);
}
