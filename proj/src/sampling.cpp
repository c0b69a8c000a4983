#include "ginibre/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "ginibre/mc.hpp"
#include "ginibre/stats.hpp"

namespace ginibre::sampling {

namespace {

enum Stream : std::uint64_t { kKostlan = 1, kMatrix = 2, kHkpv = 3, kThin = 4, kPoisson = 5, kRadial = 6 };

bool has_duplicate_moduli(const std::vector<ComplexPoint>& pts) {
  std::vector<double> m;
  m.reserve(pts.size());
  for (auto z : pts) m.push_back(std::abs(z));
  std::sort(m.begin(), m.end());
  for (std::size_t i = 1; i < m.size(); ++i)
    if (m[i] - m[i - 1] <= 1e-12) return true;
  return false;
}

}  // namespace

std::string model_name(PointSample::Model m) {
  switch (m) {
    case PointSample::Model::GinibreM:
      return "ginibre";
    case PointSample::Model::PalmM:
      return "palm";
    case PointSample::Model::Thinned:
      return "thinned";
    case PointSample::Model::Poisson:
      return "poisson";
  }
  return "unknown";
}

std::vector<double> kostlan_radii(int count, RngStream& rng) {
  require(count >= 1, "kostlan_radii: count >= 1");
  std::vector<double> r(count);
  for (int n = 1; n <= count; ++n) {
    double s = 0.0;
    for (int m = 0; m < n; ++m) s += rng.exponential();
    r[n - 1] = std::sqrt(s);
  }
  return r;
}

std::vector<double> kostlan_radii(int count, std::uint64_t seed) {
  RngStream rng(seed, kKostlan);
  return kostlan_radii(count, rng);
}

PointSample ginibre_matrix_sample(int M, std::uint64_t seed) {
  require(M >= 1, "ginibre_matrix_sample: M >= 1");
  PointSample s;
  s.model = PointSample::Model::GinibreM;
  s.M = M;
  s.seed = seed;
  const double sd = std::sqrt(0.5);
  for (int attempt = 0;; ++attempt) {
    RngStream rng(seed, kMatrix + 16 * attempt);
    Eigen::MatrixXcd A(M, M);
    for (int j = 0; j < M; ++j)
      for (int i = 0; i < M; ++i) {
        double re = rng.normal(), im = rng.normal();
        A(i, j) = Complex(sd * re, sd * im);
      }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(A, false);
    bool ok = es.info() == Eigen::Success;
    if (ok) {
      s.points.assign(es.eigenvalues().data(), es.eigenvalues().data() + M);
      if (!has_duplicate_moduli(s.points)) return s;
    }
    ++s.resamples;
    if (!ok && s.resamples >= 3) throw NumericalError("ginibre_matrix_sample: eigensolver failed 3 times");
    if (attempt > 100) throw NumericalError("ginibre_matrix_sample: persistent duplicate moduli");
  }
}

PointSample hkpv_sample(const KernelSpec& k, std::uint64_t seed) {
  auto fam = k.family();
  require(fam == KernelSpec::Family::TruncatedGinibre || fam == KernelSpec::Family::TruncatedPalm,
          "hkpv_sample: kernel must be TruncatedGinibre(M) or TruncatedPalm(M)");
  int M = k.truncation();
  int first = fam == KernelSpec::Family::TruncatedPalm ? 1 : 0;
  int d = M - first;
  PointSample s;
  s.model = fam == KernelSpec::Family::TruncatedPalm ? PointSample::Model::PalmM : PointSample::Model::GinibreM;
  s.M = M;
  s.seed = seed;
  for (int attempt = 0;; ++attempt) {
    RngStream rng(seed, kHkpv + 16 * attempt);
    s.points.clear();
    Eigen::MatrixXcd W(d, d);
    for (int step = 0; step < d; ++step) {
      std::int64_t tries = 0;
      while (true) {
        if (++tries > 10000000) throw NumericalError("hkpv_sample: acceptance below 1e-6, sampler stalled");
        int n = first + static_cast<int>(rng.uniform() * d);
        n = std::min(n, M - 1);
        double g = 0.0;
        for (int j = 0; j <= n; ++j) g += rng.exponential();
        ComplexPoint z = std::polar(std::sqrt(g), 2.0 * kPi * rng.uniform());
        Eigen::VectorXcd phi = mode_vector(first, d, z);
        double total = phi.squaredNorm();
        if (!(total > 0.0)) continue;
        Eigen::VectorXcd rem = phi;
        if (step > 0) rem -= W.leftCols(step) * (W.leftCols(step).adjoint() * rem);
        double keep = rem.squaredNorm() / total;
        if (rng.uniform() < keep) {
          if (step > 0) rem -= W.leftCols(step) * (W.leftCols(step).adjoint() * rem);
          W.col(step) = rem / rem.norm();
          s.points.push_back(z);
          break;
        }
      }
    }
    if (!has_duplicate_moduli(s.points)) return s;
    ++s.resamples;
    if (attempt > 100) throw NumericalError("hkpv_sample: persistent duplicate moduli");
  }
}

PointSample thin_and_rescale(const PointSample& s, double alpha, std::uint64_t seed) {
  require(alpha > 0.0 && alpha <= 1.0, "thin_and_rescale: alpha in (0,1]");
  require(s.model == PointSample::Model::GinibreM, "thin_and_rescale: input must be a GinibreM sample");
  PointSample out;
  out.model = PointSample::Model::Thinned;
  out.M = s.M;
  out.alpha = alpha;
  out.seed = seed;
  if (alpha == 1.0) {
    out.points = s.points;
    return out;
  }
  RngStream rng(seed, kThin);
  double sc = std::sqrt(alpha);
  for (auto z : s.points)
    if (rng.uniform() < alpha) out.points.push_back(sc * z);
  return out;
}

PointSample poisson_sample(double intensity, double window_radius, std::uint64_t seed) {
  require(intensity > 0.0 && window_radius > 0.0, "poisson_sample: positive parameters");
  PointSample out;
  out.model = PointSample::Model::Poisson;
  out.intensity = intensity;
  out.window_radius = window_radius;
  out.seed = seed;
  RngStream rng(seed, kPoisson);
  std::poisson_distribution<long> count(intensity * kPi * window_radius * window_radius);
  long n = count(rng);
  for (long i = 0; i < n; ++i)
    out.points.push_back(std::polar(window_radius * std::sqrt(rng.uniform()), 2.0 * kPi * rng.uniform()));
  return out;
}

RadialKs radial_law_ks(int M, int reps, std::uint64_t seed, int threads, double level) {
  require(M >= 2 && reps >= 100, "radial_law_ks: M >= 2 and reps >= 100");
  std::vector<double> mat(static_cast<std::size_t>(M) * reps), hk(mat.size()), ko(mat.size());
  RngStream root(seed, kRadial);
  std::size_t n_chunks = static_cast<std::size_t>((reps + 63) / 64);
  parallel_chunks(n_chunks, resolve_threads(threads), [&](std::size_t c) {
    for (int r = static_cast<int>(c) * 64; r < std::min(reps, static_cast<int>(c + 1) * 64); ++r) {
      RngStream rs = root.split(static_cast<std::uint64_t>(r));
      std::uint64_t s1 = rs(), s2 = rs(), s3 = rs();
      auto moduli = [](const std::vector<ComplexPoint>& pts) {
        std::vector<double> m;
        for (auto z : pts) m.push_back(std::abs(z));
        std::sort(m.begin(), m.end());
        return m;
      };
      auto a = moduli(ginibre_matrix_sample(M, s1).points);
      auto b = moduli(hkpv_sample(KernelSpec::truncated_ginibre(M), s2).points);
      auto k = kostlan_radii(M, s3);
      std::sort(k.begin(), k.end());
      for (int j = 0; j < M; ++j) {
        std::size_t i = static_cast<std::size_t>(j) * reps + r;
        mat[i] = a[j];
        hk[i] = b[j];
        ko[i] = k[j];
      }
    }
  });
  RadialKs out;
  out.M = M;
  out.reps = reps;
  out.threshold = level / M;
  for (int j = 0; j < M; ++j) {
    std::span<const double> a(mat.data() + static_cast<std::size_t>(j) * reps, reps);
    std::span<const double> b(hk.data() + static_cast<std::size_t>(j) * reps, reps);
    std::span<const double> k(ko.data() + static_cast<std::size_t>(j) * reps, reps);
    out.min_p_matrix_kostlan = std::min(out.min_p_matrix_kostlan, stats::ks_two_sample(a, k).p_value);
    out.min_p_hkpv_kostlan = std::min(out.min_p_hkpv_kostlan, stats::ks_two_sample(b, k).p_value);
    out.min_p_matrix_hkpv = std::min(out.min_p_matrix_hkpv, stats::ks_two_sample(a, b).p_value);
  }
  return out;
}

}  // namespace ginibre::sampling
