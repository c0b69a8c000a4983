#pragma once

#include <vector>

namespace ginibre::probabilities {

struct Value {
  double value;
  double error;
};

/// Cached log gamma(n+1, t) and log Gamma(n+1, t) (unregularized) on a grid.
class IncGammaTable {
 public:
  IncGammaTable(int n_max, std::vector<double> grid);
  int n_max() const { return n_max_; }
  const std::vector<double>& grid() const { return grid_; }
  double log_lower(int n, std::size_t i) const { return lower_[i * (n_max_ + 1) + n]; }
  double log_upper(int n, std::size_t i) const { return upper_[i * (n_max_ + 1) + n]; }
  /// max over entries of |log(gamma + Gamma) - log n!|
  double identity_defect() const;

 private:
  int n_max_;
  std::vector<double> grid_;
  std::vector<double> lower_, upper_;
};

/// Mode sums at t = r^2:
///   product  Pi(t) = prod_{n>=0} Gamma(n+1,t)/n!
///   s        S(t)  = sum_{n>=0} t^n e^{-t} / Gamma(n+1,t)
///   s1       S(t) - 1 (the n >= 1 part)
struct ModeSums {
  double log_product;
  double product_rel_error;
  double s;
  double s1;
  double s_error;
  int modes;
};
ModeSums mode_sums(double t);

/// P{N_{B(r)} = 0} = Pi(r^2).
Value void_prob_disk(double r);
/// R_{B(a,|a|)}(0,0) = S(r^2)/pi.
Value resolvent_origin_disk(double r);
/// H = Pi(r^2) * (S(r^2) - 1).
Value H_disk(double r);

/// Integral of H over the plane, pi * int_0^inf H(sqrt t) dt.
Value H_integral();
/// Same integral evaluated as 2 pi int_0^inf r H(r) dr.
Value H_integral_polar();

/// pi * int_0^inf Pi S dt (equals pi).
Value ev_typical_cell();
/// pi * int_0^inf Pi dt.
Value ev_c0();
/// pi * int_0^inf max(0, 1 - sum_n gamma(n+1,t)/n!) dt = pi/2.
Value ev_c0_lower_envelope();

struct NeighborBound {
  double numerator;          // 1 - int Pi
  double denominator;        // int sqrt(S1 Pi)
  double holder_integral;    // int S1 prod_{n>=1} Gamma(n+1,t)/n! dt (= 1)
  double ratio_bound;                // (numerator / denominator)^2
  double holder;             // numerator^2
  double floor = 1.0 / 16.0;
  double error;
  bool chain_holds() const { return ratio_bound >= holder && holder >= floor && denominator <= 1.0; }
};
NeighborBound neighbor_bound_k1();

struct MehtaReport {
  int points;
  int violations;
  double min_log_margin;  // min over grid of log((1+t)e^{-2t}) - log Pi(t)
};
/// Grid t = step * k for k = 1..count.
MehtaReport mehta_check(int count = 1000, double step = 0.01);

/// P{Z in B(r_out) \ B(r_in)} = e^{-r_in^2} - e^{-r_out^2}.
double z_marginal(double r_in, double r_out);
/// Sum over k of P{N_A(phi_0) <= k} - P{N_A(phi) <= k} with modes n < n_modes for both laws; error is the certified truncation bound.
Value z_marginal_series(double r_in, double r_out, int n_modes = 41);
/// 1 - K(0,0)/R(0,0) on B(a,|a|), |a| = r.
double z_conditional_void(double r);

enum class RadialFamily { Ginibre, Palm };

/// Exact P{(N_{A_i}) = (k_i)} for concentric annuli A_i = B(r_i) \ B(r_{i-1}), r_0 = 0.
/// truncation M > 0 restricts to modes n < M (Ginibre) or 1 <= n < M (Palm).
Value radial_counting_law(const std::vector<double>& radii, RadialFamily family, const std::vector<int>& counts,
                          int truncation = 0);

}  // namespace ginibre::probabilities
