#include "ginibre/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "ginibre/rng.hpp"

namespace ginibre::geometry {

namespace {

double cross(ComplexPoint a, ComplexPoint b) { return a.real() * b.imag() - a.imag() * b.real(); }
double dot(ComplexPoint a, ComplexPoint b) { return a.real() * b.real() + a.imag() * b.imag(); }

constexpr double kBox = 5e5;
constexpr double kEdgeTol = 1e-9;

std::vector<Disk> dedupe(const std::vector<Disk>& in) {
  std::vector<Disk> out;
  for (const auto& d : in) {
    require(d.radius > 0.0 && is_finite(d.center), "disk: radius must be positive and center finite");
    bool dup = false;
    for (const auto& e : out) {
      double scale = std::max({1.0, d.radius, e.radius});
      if (std::abs(d.center - e.center) <= 1e-12 * scale && std::abs(d.radius - e.radius) <= 1e-12 * scale) {
        dup = true;
        break;
      }
    }
    if (!dup) out.push_back(d);
  }
  return out;
}

}  // namespace

bool DiskUnion::contains(ComplexPoint z) const {
  for (const auto& d : disks)
    if (d.contains(z)) return true;
  return false;
}

double DiskUnion::max_extent() const {
  double m = 0.0;
  for (const auto& d : disks) m = std::max(m, std::abs(d.center) + d.radius);
  return m;
}

DiskUnion disks_through_origin(std::span<const ComplexPoint> z) {
  DiskUnion u;
  for (auto p : z) {
    require_finite(p, "disks_through_origin");
    require(p != 0.0, "disks_through_origin: points must be nonzero");
    u.disks.push_back(disk_through_origin(p));
  }
  return u;
}

double union_area_exact(const DiskUnion& d) {
  require(!d.disks.empty(), "union_area: empty union");
  auto disks = dedupe(d.disks);
  double area = 0.0;
  for (std::size_t i = 0; i < disks.size(); ++i) {
    const auto& a = disks[i];
    std::vector<std::pair<double, double>> covered;
    bool swallowed = false;
    for (std::size_t j = 0; j < disks.size() && !swallowed; ++j) {
      if (i == j) continue;
      const auto& b = disks[j];
      double dist = std::abs(b.center - a.center);
      if (dist >= a.radius + b.radius) continue;
      if (dist + a.radius <= b.radius) {
        swallowed = true;
        break;
      }
      if (dist + b.radius <= a.radius) continue;
      double phi = std::arg(b.center - a.center);
      double c = (a.radius * a.radius + dist * dist - b.radius * b.radius) / (2.0 * a.radius * dist);
      double half = std::acos(std::clamp(c, -1.0, 1.0));
      double lo = phi - half, hi = phi + half;
      // normalise into [-pi, pi), splitting wrapped intervals
      while (lo < -kPi) {
        lo += 2 * kPi;
        hi += 2 * kPi;
      }
      while (lo >= kPi) {
        lo -= 2 * kPi;
        hi -= 2 * kPi;
      }
      if (hi > kPi) {
        covered.push_back({lo, kPi});
        covered.push_back({-kPi, hi - 2 * kPi});
      } else {
        covered.push_back({lo, hi});
      }
    }
    if (swallowed) continue;
    std::sort(covered.begin(), covered.end());
    std::vector<std::pair<double, double>> free;
    double cur = -kPi;
    for (auto [lo, hi] : covered) {
      if (lo > cur) free.push_back({cur, lo});
      cur = std::max(cur, hi);
    }
    if (cur < kPi) free.push_back({cur, kPi});
    double cx = a.center.real(), cy = a.center.imag(), r = a.radius;
    for (auto [t1, t2] : free) {
      area += 0.5 * (r * r * (t2 - t1) + r * (cx * (std::sin(t2) - std::sin(t1)) - cy * (std::cos(t2) - std::cos(t1))));
    }
  }
  return area;
}

AreaResult union_area(const DiskUnion& d, AreaMethod method, std::int64_t n, std::uint64_t seed) {
  require(!d.disks.empty(), "union_area: empty union");
  if (method == AreaMethod::ExactArc) return {union_area_exact(d), 0.0};
  require(n >= 100, "union_area: at least 100 Monte Carlo points");
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  for (const auto& c : d.disks) {
    x0 = std::min(x0, c.center.real() - c.radius);
    x1 = std::max(x1, c.center.real() + c.radius);
    y0 = std::min(y0, c.center.imag() - c.radius);
    y1 = std::max(y1, c.center.imag() + c.radius);
  }
  double box = (x1 - x0) * (y1 - y0);
  RngStream rng(seed, 0x61726561);
  std::int64_t hits = 0;
  for (std::int64_t i = 0; i < n; ++i) {
    ComplexPoint z(x0 + (x1 - x0) * rng.uniform(), y0 + (y1 - y0) * rng.uniform());
    if (d.contains(z)) ++hits;
  }
  double p = static_cast<double>(hits) / static_cast<double>(n);
  return {box * p, box * std::sqrt(p * (1.0 - p) / static_cast<double>(n))};
}

AreaResult union_area(const DiskUnion& d) {
  return union_area(d, d.disks.size() <= 8 ? AreaMethod::ExactArc : AreaMethod::MonteCarlo);
}

std::vector<ComplexPoint> circle_intersections(const Disk& a, const Disk& b) {
  ComplexPoint dv = b.center - a.center;
  double dist = std::abs(dv);
  if (dist == 0.0 || dist > a.radius + b.radius || dist < std::abs(a.radius - b.radius)) return {};
  double x = (dist * dist + a.radius * a.radius - b.radius * b.radius) / (2.0 * dist);
  double h2 = a.radius * a.radius - x * x;
  double h = h2 > 0.0 ? std::sqrt(h2) : 0.0;
  ComplexPoint u = dv / dist;
  ComplexPoint base = a.center + x * u;
  ComplexPoint perp = u * ComplexPoint(0.0, 1.0);
  if (h == 0.0) return {base};
  return {base + h * perp, base - h * perp};
}

bool HalfPlanePolygon::contains(ComplexPoint x, double tol) const {
  for (auto z : generators)
    if (dot(x, z) > 0.5 * std::norm(z) + tol * std::max(1.0, std::norm(z))) return false;
  return true;
}

HalfPlanePolygon halfplane_intersection(std::span<const ComplexPoint> z) {
  HalfPlanePolygon poly;
  poly.generators.assign(z.begin(), z.end());
  for (auto p : z) {
    require_finite(p, "halfplane_intersection");
    require(p != 0.0, "halfplane_intersection: generators must be nonzero");
  }
  std::vector<ComplexPoint> v = {{-kBox, -kBox}, {kBox, -kBox}, {kBox, kBox}, {-kBox, kBox}};
  std::vector<int> lab = {-1, -1, -1, -1};
  for (std::size_t g = 0; g < z.size(); ++g) {
    ComplexPoint n = z[g];
    double c = 0.5 * std::norm(n);
    auto side = [&](ComplexPoint x) { return dot(x, n) - c; };
    std::vector<ComplexPoint> nv;
    std::vector<int> nl;
    std::size_t m = v.size();
    for (std::size_t i = 0; i < m; ++i) {
      ComplexPoint P = v[i], Q = v[(i + 1) % m];
      double sp = side(P), sq = side(Q);
      bool pin = sp <= 0.0, qin = sq <= 0.0;
      if (pin) {
        nv.push_back(P);
        nl.push_back(lab[i]);
        if (!qin) {
          double t = sp / (sp - sq);
          nv.push_back(P + t * (Q - P));
          nl.push_back(static_cast<int>(g));
        }
      } else if (qin) {
        double t = sp / (sp - sq);
        nv.push_back(P + t * (Q - P));
        nl.push_back(lab[i]);
      }
    }
    v = std::move(nv);
    lab = std::move(nl);
    if (v.empty()) break;
  }
  // drop round-off edges
  std::vector<ComplexPoint> fv;
  std::vector<int> fl;
  for (std::size_t i = 0; i < v.size(); ++i) {
    ComplexPoint next = v[(i + 1) % v.size()];
    if (std::abs(next - v[i]) > kEdgeTol) {
      fv.push_back(v[i]);
      fl.push_back(lab[i]);
    }
  }
  poly.bounded = !fv.empty() && std::none_of(fl.begin(), fl.end(), [](int l) { return l < 0; });
  if (poly.bounded) {
    poly.vertices = std::move(fv);
    poly.edge_generator = std::move(fl);
    poly.neighbors = poly.edge_generator;
    std::sort(poly.neighbors.begin(), poly.neighbors.end());
    poly.neighbors.erase(std::unique(poly.neighbors.begin(), poly.neighbors.end()), poly.neighbors.end());
  }
  return poly;
}

bool in_set_A(std::span<const ComplexPoint> z) {
  auto p = halfplane_intersection(z);
  return p.bounded && p.side_count() == static_cast<int>(z.size()) &&
         p.neighbors.size() == z.size();
}

DiskUnion flower(const HalfPlanePolygon& p) {
  require(p.bounded, "flower: unbounded polygon");
  DiskUnion u;
  for (auto v : p.vertices)
    if (std::abs(v) > 0.0) u.disks.push_back(disk_through_origin(v));
  return u;
}

double polygon_area(std::span<const ComplexPoint> v) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += cross(v[i], v[(i + 1) % v.size()]);
  return 0.5 * s;
}

double polygon_perimeter(std::span<const ComplexPoint> v) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += std::abs(v[(i + 1) % v.size()] - v[i]);
  return s;
}

namespace {

// signed area of triangle (0, a, b) intersected with B(0, r)
double triangle_disk(ComplexPoint a, ComplexPoint b, double r) {
  std::vector<ComplexPoint> pts = {a};
  ComplexPoint d = b - a;
  double A = std::norm(d), B = dot(a, d), C = std::norm(a) - r * r;
  double disc = B * B - A * C;
  if (A > 0.0 && disc > 0.0) {
    double s = std::sqrt(disc);
    for (double t : {(-B - s) / A, (-B + s) / A})
      if (t > 0.0 && t < 1.0) pts.push_back(a + t * d);
  }
  pts.push_back(b);
  double area = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    ComplexPoint p = pts[i], q = pts[i + 1];
    ComplexPoint mid = 0.5 * (p + q);
    if (std::norm(mid) <= r * r)
      area += 0.5 * cross(p, q);
    else
      area += 0.5 * r * r * std::atan2(cross(p, q), dot(p, q));
  }
  return area;
}

}  // namespace

double polygon_disk_area(std::span<const ComplexPoint> v, double r) {
  require(r >= 0.0, "polygon_disk_area: r >= 0");
  if (r == 0.0) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += triangle_disk(v[i], v[(i + 1) % v.size()], r);
  return s;
}

VoronoiCell voronoi_cell_at_origin(std::span<const ComplexPoint> points) {
  VoronoiCell cell;
  auto poly = halfplane_intersection(points);
  if (!poly.bounded) return cell;
  cell.bounded = true;
  cell.vertices = poly.vertices;
  cell.neighbor_indices = poly.neighbors;
  cell.area = polygon_area(cell.vertices);
  cell.perimeter = polygon_perimeter(cell.vertices);
  cell.side_count = static_cast<int>(cell.vertices.size());
  for (auto v : cell.vertices) cell.determinacy_radius = std::max(cell.determinacy_radius, 2.0 * std::abs(v));
  return cell;
}

}  // namespace ginibre::geometry
