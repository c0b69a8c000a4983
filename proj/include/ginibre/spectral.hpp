#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ginibre/geometry.hpp"
#include "ginibre/kernels.hpp"

namespace ginibre::spectral {

/// Bounded region of the plane with a node budget for quadrature.
struct PlanarDomain {
  enum class Shape { Disk, DiskUnion, Flower, Annulus };

  Shape shape = Shape::Disk;
  geometry::DiskUnion disks;  // Disk: one entry; Flower: vertex disks
  double r_in = 0.0;          // Annulus, centred at the origin
  double r_out = 0.0;
  int quadrature_budget = 4096;

  static PlanarDomain disk(ComplexPoint center, double radius, int budget = 4096);
  static PlanarDomain annulus(double r_in, double r_out, int budget = 4096);
  static PlanarDomain disk_union(geometry::DiskUnion u, int budget = 4096);
  static PlanarDomain flower(const geometry::HalfPlanePolygon& p, int budget = 4096);

  bool contains(ComplexPoint z) const;
  double area() const;
};

struct Quadrature {
  std::vector<ComplexPoint> nodes;
  std::vector<double> weights;
  std::string rule;
};

/// Disk/annulus: Gauss-Legendre in radius times trapezoid in angle. Unions whose
/// disks share a common point: polar Gauss-Legendre around that point with angular
/// breakpoints where the radial function changes branch. Otherwise Halton points
/// filtered by the indicator with equal weights.
Quadrature build_quadrature(const PlanarDomain& d, int budget);

class SpectralDecomposition {
 public:
  enum class Source { Analytic, Quadrature, Modal };

  std::vector<double> eigenvalues;  // descending, clamped to [0, 1 - 1e-14]
  Source source = Source::Analytic;
  double tail_mass = 0.0;       // bound on the trace of discarded modes
  double error_estimate = 0.0;  // eigenvalue accuracy estimate
  int clamp_count = 0;
  int budget = 0;
  std::vector<ComplexPoint> nodes;
  std::vector<double> weights;

  const KernelSpec& kernel() const { return kernel_; }
  std::size_t size() const { return eigenvalues.size(); }

  /// L2(A)-normalised eigenfunction h_n, extended to the plane by h_n = K h_n / beta_n.
  Complex eigenfunction(int n, ComplexPoint z) const;
  /// beta_n h_n(z) for every mode.
  Eigen::VectorXcd scaled_features(ComplexPoint z) const;

 private:
  friend SpectralDecomposition disk_modes(const KernelSpec&, double, ComplexPoint, int);
  friend SpectralDecomposition nystrom_fixed(const KernelSpec&, const PlanarDomain&, int, int);
  friend SpectralDecomposition galerkin_modes(const KernelSpec&, const PlanarDomain&, int);
  KernelSpec kernel_ = KernelSpec::ginibre();
  // analytic disks
  ComplexPoint center_ = 0.0;
  ComplexPoint gauge_ = 0.0;
  int first_mode_ = 0;
  // quadrature: columns are sqrt(w_j) U_jn; modal: eigenvectors of the mode Gram matrix
  Eigen::MatrixXcd vectors_;
};

/// Analytic spectrum of Ginibre, Translated (any disk) or Palm (centred disk) on B(center, radius).
/// cutoff < 0 selects ceil(r^2 + 12 sqrt(r^2 + 1)).
SpectralDecomposition disk_modes(const KernelSpec& k, double radius, ComplexPoint center = 0.0, int cutoff = -1);

struct NystromOptions {
  int budget = 0;  // 0: use the domain's budget
  bool refine = true;
  int max_budget = 65536;
  int rank_cap = 600;
  double tolerance = 1e-6;
  int compare_top = 20;
};

/// Low-rank Nystrom decomposition of K restricted to the domain.
SpectralDecomposition nystrom_decompose(const KernelSpec& k, const PlanarDomain& d, const NystromOptions& opt = {});
SpectralDecomposition nystrom_fixed(const KernelSpec& k, const PlanarDomain& d, int budget, int rank_cap = 600);

/// Ginibre-type kernels (Ginibre, Palm, TruncatedGinibre, TruncatedPalm) are sums of the
/// modes f_n; K_A is diagonalised through the Gram matrix of the modes on A, computed by
/// quadrature. Modes whose mass on B(0, extent of A) is below 1e-17 are dropped into tail_mass.
SpectralDecomposition galerkin_modes(const KernelSpec& k, const PlanarDomain& d, int budget);

/// det(I - K_A) = prod (1 - beta_n), times exp(-tail_mass).
double fredholm_det(const SpectralDecomposition& sd);
double log_fredholm_det(const SpectralDecomposition& sd);

/// R_A(z1, z2) = K(z1, z2) + sum beta_n^2/(1 - beta_n) h_n(z1) conj h_n(z2).
Complex resolvent(const SpectralDecomposition& sd, ComplexPoint z1, ComplexPoint z2);
Eigen::MatrixXcd resolvent_gram(const SpectralDecomposition& sd, std::span<const ComplexPoint> pts);
/// det R_A(z; z).
double resolvent_minor(const SpectralDecomposition& sd, std::span<const ComplexPoint> anchors);

/// det(I - K_A) det R_A(z; z) as one bordered determinant [[I - B, -S*], [S^T, K(z; z)]],
/// finite when some beta_n reaches 1.
double janossy_density(const SpectralDecomposition& sd, std::span<const ComplexPoint> z);

/// sum beta_n^n.
double iterated_trace(const SpectralDecomposition& sd, int n);

/// |LHS - RHS| of the Platrier relation with both alternating series cut at series_order.
double platrier_residual(const KernelSpec& k, const PlanarDomain& d, std::span<const ComplexPoint> z, int series_order);

}  // namespace ginibre::spectral
