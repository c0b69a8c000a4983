#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "ginibre/mc.hpp"
#include "ginibre/types.hpp"

namespace ginibre::cell_stats {

struct Region {
  enum class Kind { Ball, ComplementBall, WholePlane };
  Kind kind = Kind::WholePlane;
  double radius = 0.0;

  static Region ball(double r);
  static Region complement_ball(double R);
  static Region whole_plane();
  std::string name() const;
};

/// Integrand of E V^k(C cap A) for the three laws:
///   Ginibre  P{N_{D(z)}(phi_0) = 0} (typical cell)
///   ZeroCell P{N_{D(z)}(phi) = 0}   (cell of an added origin)
///   Poisson  exp(-V(z)/pi)
enum class MomentModel { Ginibre, ZeroCell, Poisson };

std::string model_name(MomentModel m);

struct MomentOptions {
  std::int64_t draws = 100000;
  std::uint64_t seed = 1;
  int threads = 0;
  int quadrature_budget = 1024;
};

/// Void integrand at z for the model. k = 1 is analytic; k >= 2 uses galerkin_modes on D(z).
/// Values whose single-disk bound is below 1e-15 are returned as 0.
double void_integrand(std::span<const ComplexPoint> z, MomentModel model, int quadrature_budget = 1024);

/// Monte Carlo estimate of E V^k(C cap A). Ball: uniform draws; complement: radius R + Exp(1);
/// whole plane: standard complex Gaussian proposals.
MCEstimate moment_in_region(int k, const Region& region, MomentModel model, const MomentOptions& opt = {});

/// W_k = (1/pi^{k+1}) int_{B(1)^k} V(z) dz.
MCEstimate w_constant(int k, std::int64_t draws, std::uint64_t seed = 1, int threads = 0);

struct RatioRow {
  double r;
  double ratio;       // Ginibre moment / Poisson moment on B(r)
  double std_error;   // delta method over common draws
  double ginibre;
  double poisson;
  double bound;       // exp((1/pi) int_{B(2r)} e^{-|z|^2} dz)
};

struct SmallRTable {
  std::vector<RatioRow> rows;
  double intercept;   // extrapolated (ratio - 1)/r^2 at r = 0
  double intercept_se;
  double slope;       // coefficient of r^2 in the fit
};

/// Ratios on B(r) with common random numbers; (ratio - 1)/r^2 fitted as a + b r^2 + c r^4.
/// draws is the total budget, split evenly across r_list.
SmallRTable small_r_ratio(int k, const std::vector<double>& r_list, std::int64_t draws, std::uint64_t seed = 1,
                          int threads = 0, int quadrature_budget = 1024);

/// J(R) = (1/(2 pi^2)) int_{B(R)^2} exp(-|z1 - z2|^2), reduced to a radial integral
/// against the lens area of two radius-R disks.
double J(double R);

struct TailRow {
  double R;
  double J;
  MCEstimate ginibre;
  MCEstimate poisson;
  double bound;   // poisson * exp(3/2 - J)
  double margin;  // bound - ginibre
};

std::vector<TailRow> tail_bound_check(int k, const std::vector<double>& R_list, std::int64_t draws,
                                      std::uint64_t seed = 1, int threads = 0, int quadrature_budget = 1024);

struct SideOptions {
  std::int64_t draws = 20000;
  std::uint64_t seed = 1;
  int threads = 0;
  int quadrature_budget = 1024;
  double angle_concentration = 4.0;  // Dirichlet parameter of the cyclic angle gaps
  double radius_shape = 5.0;         // Gamma(shape, scale) radii
  double radius_scale = -1.0;        // <= 0: tuned on a pilot run
  std::int64_t pilot_draws = 2000;  // capped at draws / 4
};

struct SideEstimate {
  int k = 0;
  MCEstimate estimate;
  std::int64_t accepted = 0;   // draws in the k-sided set
  std::int64_t failures = 0;   // spectral failures among accepted draws
  double acceptance = 0.0;
  double radius_scale = 0.0;
};

/// (1/k!) int_A P{N_F(z)(phi_0) = 0} det R_{0,F(z)}(z; z) dz by importance sampling.
/// Throws NumericalError when more than 2% of accepted draws fail.
SideEstimate side_probability(int k, const SideOptions& opt = {});

/// Fraction of proposals that land in the k-sided set.
double side_acceptance(int k, std::int64_t draws, const SideOptions& opt = {});

/// Radius scale matching the integrand-weighted mean radius of a pilot run.
double tune_radius_scale(int k, const SideOptions& opt = {});

struct CellSummary {
  std::string model;
  int M = 0;
  std::int64_t requested = 0;
  std::int64_t used = 0;
  std::int64_t discarded = 0;
  MCEstimate area;
  MCEstimate area_squared;
  MCEstimate perimeter;
  std::map<int, std::int64_t> sides;

  double side_frequency(int k) const;
  double side_frequency_se(int k) const;
};

/// Cells of the origin under hkpv_sample(TruncatedPalm(M)); cells whose determinacy radius
/// reaches (2/3) sqrt(M) are discarded and counted.
CellSummary empirical_typical_cell(int M, std::int64_t n_cells, std::uint64_t seed = 1, int threads = 0);

/// Same pipeline for a Poisson sample of intensity 1/pi in B(0, window) with the origin added;
/// cells not determined inside the window are discarded.
CellSummary poisson_typical_cell(std::int64_t n_cells, std::uint64_t seed = 1, int threads = 0,
                                 double window = 8.0);

/// Cell of an added origin in hkpv_sample(TruncatedGinibre(M)) points.
CellSummary empirical_zero_cell(int M, std::int64_t n_cells, std::uint64_t seed = 1, int threads = 0);

struct NeighborCapture {
  double h_integral;        // int_C H, quadrature
  double h_integral_error;
  double ev_typical;        // pi
  double ev_c0;
  double gap;               // ev_typical - ev_c0
  double gap_error;
  double stated_half;       // (1/2) int_C H, the two-path relation as printed
  double empirical_gap;     // mean Palm cell area - mean zero-cell area
  double empirical_gap_se;
  CellSummary palm;
  CellSummary zero;
};

NeighborCapture neighbor_capture_stats(int M, std::int64_t n_cells, std::uint64_t seed = 1, int threads = 0);

}  // namespace ginibre::cell_stats
