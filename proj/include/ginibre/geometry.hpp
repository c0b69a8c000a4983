#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ginibre/types.hpp"

namespace ginibre::geometry {

struct Disk {
  ComplexPoint center;
  double radius;
  bool contains(ComplexPoint z) const { return std::norm(z - center) <= radius * radius; }
};

/// B(z, |z|): the disk through the origin centred at z.
inline Disk disk_through_origin(ComplexPoint z) { return {z, std::abs(z)}; }

struct DiskUnion {
  std::vector<Disk> disks;
  bool contains(ComplexPoint z) const;
  double max_extent() const;  // max over disks of |c| + r
};

/// D(z) = union of B(z_i, |z_i|).
DiskUnion disks_through_origin(std::span<const ComplexPoint> z);

enum class AreaMethod { ExactArc, MonteCarlo };

struct AreaResult {
  double value;
  double std_error;  // 0 for exact_arc
};

/// Exact arc decomposition by default for up to 8 disks, Monte Carlo beyond.
AreaResult union_area(const DiskUnion& d);
AreaResult union_area(const DiskUnion& d, AreaMethod method, std::int64_t n = 100000, std::uint64_t seed = 0);
/// Circular-arc (Green's theorem) area; numerically identical circles are dropped.
double union_area_exact(const DiskUnion& d);

/// Intersection points of two circles (0, 1 or 2 points).
std::vector<ComplexPoint> circle_intersections(const Disk& a, const Disk& b);

/// Convex polygon given by the intersection of half-planes H(z_i / 2) = {x : <x - z_i/2, z_i> <= 0}.
struct HalfPlanePolygon {
  bool bounded = false;
  std::vector<ComplexPoint> generators;
  std::vector<ComplexPoint> vertices;  // counterclockwise
  std::vector<int> edge_generator;     // generator index of the edge from vertices[i] to vertices[i+1]
  std::vector<int> neighbors;          // sorted indices of non-redundant generators

  int side_count() const { return bounded ? static_cast<int>(vertices.size()) : 0; }
  bool contains(ComplexPoint x, double tol = 1e-12) const;
};

HalfPlanePolygon halfplane_intersection(std::span<const ComplexPoint> z);

/// Generator tuple whose half-plane polygon is bounded with exactly z.size() sides.
bool in_set_A(std::span<const ComplexPoint> z);

/// Union of B(v, |v|) over the vertices of a bounded polygon.
DiskUnion flower(const HalfPlanePolygon& p);

double polygon_area(std::span<const ComplexPoint> v);
double polygon_perimeter(std::span<const ComplexPoint> v);
/// Area of a convex (or any simple ccw) polygon intersected with B(0, r).
double polygon_disk_area(std::span<const ComplexPoint> v, double r);

struct VoronoiCell {
  bool bounded = false;
  ComplexPoint germ = 0.0;
  std::vector<ComplexPoint> vertices;
  std::vector<int> neighbor_indices;
  double area = 0.0;
  double perimeter = 0.0;
  int side_count = 0;
  double determinacy_radius = 0.0;
};

/// Cell of the origin among the given (nonzero, distinct) points.
VoronoiCell voronoi_cell_at_origin(std::span<const ComplexPoint> points);

}  // namespace ginibre::geometry
