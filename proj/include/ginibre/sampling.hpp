#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "ginibre/kernels.hpp"
#include "ginibre/rng.hpp"

namespace ginibre::sampling {

struct PointSample {
  enum class Model { GinibreM, PalmM, Thinned, Poisson };

  std::vector<ComplexPoint> points;
  Model model = Model::GinibreM;
  int M = 0;
  double alpha = 1.0;
  double intensity = 0.0;
  double window_radius = 0.0;
  std::uint64_t seed = 0;
  int resamples = 0;  // eigensolver retries and duplicate-modulus redraws
};

std::string model_name(PointSample::Model m);

/// R_n = sqrt(sum_{m<=n} X_{n,m}) with X unit exponentials, n = 1..count.
std::vector<double> kostlan_radii(int count, std::uint64_t seed);
std::vector<double> kostlan_radii(int count, RngStream& rng);

/// Eigenvalues of an M x M matrix with iid standard complex Gaussian entries.
PointSample ginibre_matrix_sample(int M, std::uint64_t seed);

/// Sequential projection-DPP sampler for TruncatedGinibre(M) / TruncatedPalm(M).
/// Proposals come from the mixture |phi(z)|^2 / d (uniform mode n, |z|^2 ~ Gamma(n+1),
/// uniform angle) and are accepted with probability |P phi(z)|^2 / |phi(z)|^2, where P
/// projects off the features of the points already drawn; the acceptance rate is >= 1/d.
PointSample hkpv_sample(const KernelSpec& k, std::uint64_t seed);

PointSample thin_and_rescale(const PointSample& s, double alpha, std::uint64_t seed);

/// Homogeneous Poisson points in B(0, window_radius).
PointSample poisson_sample(double intensity, double window_radius, std::uint64_t seed);

struct RadialKs {
  int M = 0;
  int reps = 0;
  double threshold = 0.0;  // level / M
  double min_p_matrix_kostlan = 1.0;
  double min_p_hkpv_kostlan = 1.0;
  double min_p_matrix_hkpv = 1.0;
  bool passed() const {
    return std::min({min_p_matrix_kostlan, min_p_hkpv_kostlan, min_p_matrix_hkpv}) >= threshold;
  }
};

/// Two-sample KS tests, one per order statistic of the moduli, between matrix eigenvalues,
/// hkpv_sample(TruncatedGinibre(M)) and sorted Kostlan radii over `reps` replications.
RadialKs radial_law_ks(int M, int reps, std::uint64_t seed, int threads = 0, double level = 0.01);

}  // namespace ginibre::sampling
