#include "ginibre/cell_stats.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <functional>
#include <limits>

#include <Eigen/Dense>

#include "ginibre/geometry.hpp"
#include "ginibre/kernels.hpp"
#include "ginibre/probabilities.hpp"
#include "ginibre/rng.hpp"
#include "ginibre/sampling.hpp"
#include "ginibre/special.hpp"
#include "ginibre/spectral.hpp"

namespace ginibre::cell_stats {

namespace {

constexpr std::int64_t kChunk = 512;
constexpr double kNegligible = 1e-15;

enum Tag : std::uint64_t {
  kMoment = 0x100,
  kW = 0x200,
  kRatio = 0x300,
  kTail = 0x400,
  kSide = 0x500,
  kPalmCells = 0x600,
  kPoissonCells = 0x700,
  kZeroCells = 0x800,
};

// Runs fn on `draws` items split in fixed chunks; chunk c draws from stream (seed, tag).split(c).
Accumulator chunked(std::int64_t draws, std::uint64_t seed, std::uint64_t tag, int threads,
                    const std::function<double(RngStream&)>& fn) {
  std::size_t n_chunks = static_cast<std::size_t>((draws + kChunk - 1) / kChunk);
  std::vector<Accumulator> parts(n_chunks);
  RngStream root(seed, tag);
  parallel_chunks(n_chunks, resolve_threads(threads), [&](std::size_t c) {
    RngStream rng = root.split(c);
    std::int64_t end = std::min<std::int64_t>(draws, (c + 1) * kChunk);
    for (std::int64_t i = static_cast<std::int64_t>(c) * kChunk; i < end; ++i) parts[c].add(fn(rng));
  });
  Accumulator total;
  for (const auto& p : parts) total.merge(p);
  return total;
}

ComplexPoint uniform_disk(RngStream& rng, double r) {
  return std::polar(r * std::sqrt(rng.uniform()), 2.0 * kPi * rng.uniform());
}

double single_disk_void(double t, MomentModel model) {
  if (t > 100.0) return 0.0;  // log Pi(t) < -t^2/5 here
  auto m = probabilities::mode_sums(t);
  double p = std::exp(m.log_product);
  return model == MomentModel::Ginibre ? p * m.s : p;
}

std::uint64_t cell_seed(std::uint64_t seed, std::uint64_t tag, std::int64_t i) {
  RngStream r = RngStream(seed, tag).split(static_cast<std::uint64_t>(i));
  return r();
}

struct CellRecord {
  bool used = false;
  double area = 0.0;
  double perimeter = 0.0;
  int sides = 0;
};

CellSummary summarize(std::string model, int M, const std::vector<CellRecord>& rec) {
  CellSummary s;
  s.model = std::move(model);
  s.M = M;
  s.requested = static_cast<std::int64_t>(rec.size());
  Accumulator a, a2, p;
  for (const auto& r : rec) {
    if (!r.used) {
      ++s.discarded;
      continue;
    }
    ++s.used;
    a.add(r.area);
    a2.add(r.area * r.area);
    p.add(r.perimeter);
    ++s.sides[r.sides];
  }
  if (s.requested >= 100 && s.discarded > 0.02 * s.requested)
    throw NumericalError("typical cell: more than 2% of cells discarded (" + std::to_string(s.discarded) + ")");
  s.area = a.estimate(0, "empirical_area", 1);
  s.area_squared = a2.estimate(0, "empirical_area_squared", 1);
  s.perimeter = p.estimate(0, "empirical_perimeter", 1);
  return s;
}

CellRecord record_cell(const std::vector<ComplexPoint>& pts, double max_determinacy) {
  CellRecord r;
  auto cell = geometry::voronoi_cell_at_origin(pts);
  if (!cell.bounded || cell.determinacy_radius >= max_determinacy) return r;
  r.used = true;
  r.area = cell.area;
  r.perimeter = cell.perimeter;
  r.sides = cell.side_count;
  return r;
}

template <class Sampler>
std::vector<CellRecord> run_cells(std::int64_t n, int threads, Sampler&& one) {
  std::vector<CellRecord> rec(static_cast<std::size_t>(n));
  std::size_t n_chunks = static_cast<std::size_t>((n + kChunk - 1) / kChunk);
  parallel_chunks(n_chunks, resolve_threads(threads), [&](std::size_t c) {
    std::int64_t end = std::min<std::int64_t>(n, (c + 1) * kChunk);
    for (std::int64_t i = static_cast<std::int64_t>(c) * kChunk; i < end; ++i) rec[i] = one(i);
  });
  return rec;
}

}  // namespace

Region Region::ball(double r) {
  require(r > 0.0, "Region::ball: r > 0");
  return {Kind::Ball, r};
}

Region Region::complement_ball(double R) {
  require(R >= 0.0, "Region::complement_ball: R >= 0");
  return {Kind::ComplementBall, R};
}

Region Region::whole_plane() { return {Kind::WholePlane, 0.0}; }

std::string Region::name() const {
  switch (kind) {
    case Kind::Ball:
      return "ball";
    case Kind::ComplementBall:
      return "complement_ball";
    case Kind::WholePlane:
      return "whole_plane";
  }
  return "unknown";
}

std::string model_name(MomentModel m) {
  switch (m) {
    case MomentModel::Ginibre:
      return "ginibre_formula";
    case MomentModel::ZeroCell:
      return "zero_cell_formula";
    case MomentModel::Poisson:
      return "poisson_formula";
  }
  return "unknown";
}

double void_integrand(std::span<const ComplexPoint> z, MomentModel model, int quadrature_budget) {
  std::vector<ComplexPoint> pts;
  for (auto p : z)
    if (p != 0.0) pts.push_back(p);
  if (pts.empty()) return 1.0;
  if (model == MomentModel::Poisson) {
    auto area = geometry::union_area(geometry::disks_through_origin(pts));
    return std::exp(-area.value / kPi);
  }
  double bound = 1.0;
  for (auto p : pts) bound = std::min(bound, single_disk_void(std::norm(p), model));
  if (pts.size() == 1 || bound < kNegligible) return bound < kNegligible ? 0.0 : bound;
  auto u = geometry::disks_through_origin(pts);
  auto sd = spectral::galerkin_modes(KernelSpec::ginibre(), spectral::PlanarDomain::disk_union(u, quadrature_budget),
                                     quadrature_budget);
  ComplexPoint origin = 0.0;
  double v = model == MomentModel::Ginibre ? kPi * spectral::janossy_density(sd, {&origin, 1}) : spectral::fredholm_det(sd);
  return std::clamp(v, 0.0, bound);
}

MCEstimate moment_in_region(int k, const Region& region, MomentModel model, const MomentOptions& opt) {
  require(k >= 1, "moment_in_region: k >= 1");
  require(opt.draws >= 100, "moment_in_region: at least 100 draws");
  std::int64_t failures = 0;
  // failed draws come back as NaN; they are dropped and counted per chunk
  auto fn = [&](RngStream& rng) {
    std::vector<ComplexPoint> z(k);
    double w = 1.0;
    for (int i = 0; i < k; ++i) {
      switch (region.kind) {
        case Region::Kind::Ball:
          z[i] = uniform_disk(rng, region.radius);
          w *= kPi * region.radius * region.radius;
          break;
        case Region::Kind::ComplementBall: {
          double rho = region.radius + rng.exponential();
          z[i] = std::polar(rho, 2.0 * kPi * rng.uniform());
          w *= 2.0 * kPi * rho * std::exp(rho - region.radius);
          break;
        }
        case Region::Kind::WholePlane: {
          // complex Gaussian with E|z|^2 = 2
          double rho2 = 2.0 * rng.exponential();
          z[i] = std::polar(std::sqrt(rho2), 2.0 * kPi * rng.uniform());
          w *= 2.0 * kPi * std::exp(0.5 * rho2);
          break;
        }
      }
    }
    try {
      return w * void_integrand(z, model, opt.quadrature_budget);
    } catch (const NumericalError&) {
      return std::numeric_limits<double>::quiet_NaN();
    }
  };
  std::size_t n_chunks = static_cast<std::size_t>((opt.draws + kChunk - 1) / kChunk);
  std::vector<Accumulator> parts(n_chunks);
  std::vector<std::int64_t> fails(n_chunks, 0);
  RngStream root(opt.seed, kMoment + static_cast<std::uint64_t>(region.kind) * 16 + k);
  parallel_chunks(n_chunks, resolve_threads(opt.threads), [&](std::size_t c) {
    RngStream rng = root.split(c);
    std::int64_t end = std::min<std::int64_t>(opt.draws, (c + 1) * kChunk);
    for (std::int64_t i = static_cast<std::int64_t>(c) * kChunk; i < end; ++i) {
      double v = fn(rng);
      if (std::isnan(v))
        ++fails[c];
      else
        parts[c].add(v);
    }
  });
  Accumulator total;
  for (std::size_t c = 0; c < n_chunks; ++c) {
    total.merge(parts[c]);
    failures += fails[c];
  }
  if (failures > 0.01 * opt.draws)
    throw NumericalError("moment_in_region: more than 1% of draws failed (" + std::to_string(failures) + ")");
  return total.estimate(opt.seed, model_name(model) + "/" + region.name() + "/k=" + std::to_string(k));
}

MCEstimate w_constant(int k, std::int64_t draws, std::uint64_t seed, int threads) {
  require(k >= 1, "w_constant: k >= 1");
  auto acc = chunked(draws, seed, kW + k, threads, [k](RngStream& rng) {
    std::vector<ComplexPoint> z(k);
    for (auto& p : z) p = uniform_disk(rng, 1.0);
    return geometry::union_area(geometry::disks_through_origin(z)).value / kPi;
  });
  return acc.estimate(seed, "w_constant/k=" + std::to_string(k));
}

SmallRTable small_r_ratio(int k, const std::vector<double>& r_list, std::int64_t draws, std::uint64_t seed,
                          int threads, int quadrature_budget) {
  require(k >= 1 && !r_list.empty(), "small_r_ratio: k >= 1 and a nonempty r list");
  for (double r : r_list) require(r > 0.0 && r <= 0.5, "small_r_ratio: r in (0, 0.5]");
  std::int64_t n = draws / static_cast<std::int64_t>(r_list.size());
  require(n >= 100, "small_r_ratio: at least 100 draws per radius");
  SmallRTable t{};
  for (std::size_t ri = 0; ri < r_list.size(); ++ri) {
    double r = r_list[ri];
    std::vector<double> g(n), p(n);
    std::size_t n_chunks = static_cast<std::size_t>((n + kChunk - 1) / kChunk);
    RngStream root(seed, kRatio + 64 * k + ri);
    parallel_chunks(n_chunks, resolve_threads(threads), [&](std::size_t c) {
      RngStream rng = root.split(c);
      std::int64_t end = std::min<std::int64_t>(n, (c + 1) * kChunk);
      std::vector<ComplexPoint> z(k);
      for (std::int64_t i = static_cast<std::int64_t>(c) * kChunk; i < end; ++i) {
        for (auto& q : z) q = uniform_disk(rng, r);
        g[i] = void_integrand(z, MomentModel::Ginibre, quadrature_budget);
        p[i] = void_integrand(z, MomentModel::Poisson, quadrature_budget);
      }
    });
    Accumulator ag, ap;
    for (std::int64_t i = 0; i < n; ++i) {
      ag.add(g[i]);
      ap.add(p[i]);
    }
    double rho = ag.mean() / ap.mean();
    Accumulator res;
    for (std::int64_t i = 0; i < n; ++i) res.add(g[i] - rho * p[i]);
    double vol = std::pow(kPi * r * r, k);
    RatioRow row;
    row.r = r;
    row.ratio = rho;
    row.std_error = res.std_error() / ap.mean();
    row.ginibre = vol * ag.mean();
    row.poisson = vol * ap.mean();
    row.bound = std::exp(1.0 - std::exp(-4.0 * r * r));
    t.rows.push_back(row);
  }
  // weighted least squares of (ratio - 1)/r^2 on (1, r^2, r^4), linear when fewer than 3 radii
  int p = std::min<int>(3, static_cast<int>(t.rows.size()));
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(p, p);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(p);
  for (const auto& row : t.rows) {
    double s2 = row.r * row.r;
    double y = (row.ratio - 1.0) / s2;
    double s = std::max(row.std_error / s2, 1e-300);
    Eigen::VectorXd x(p);
    for (int j = 0; j < p; ++j) x[j] = std::pow(s2, j);
    A += x * x.transpose() / (s * s);
    b += x * (y / (s * s));
  }
  Eigen::MatrixXd cov = A.inverse();
  Eigen::VectorXd coef = cov * b;
  t.intercept = coef[0];
  t.intercept_se = std::sqrt(cov(0, 0));
  t.slope = p > 1 ? coef[1] : 0.0;
  return t;
}

double J(double R) {
  require(R > 0.0, "J: R > 0");
  auto f = [R](double d) {
    double lens = 2.0 * R * R * std::acos(std::min(1.0, d / (2.0 * R))) - 0.5 * d * std::sqrt(std::max(0.0, 4.0 * R * R - d * d));
    return std::exp(-d * d) * lens * 2.0 * kPi * d;
  };
  double top = 2.0 * R;
  double total = 0.0;
  // e^{-d^2} is below 1e-60 past d = 12
  std::vector<double> br{0.0};
  for (double x : {0.5, 1.0, 2.0, 3.0, 5.0, 8.0, 12.0})
    if (x < top) br.push_back(x);
  br.push_back(std::min(top, 12.0));
  for (std::size_t i = 0; i + 1 < br.size(); ++i)
    if (br[i + 1] > br[i]) total += special::integrate(f, br[i], br[i + 1], 1e-13).value;
  return total / (2.0 * kPi * kPi);
}

std::vector<TailRow> tail_bound_check(int k, const std::vector<double>& R_list, std::int64_t draws,
                                      std::uint64_t seed, int threads, int quadrature_budget) {
  require(k >= 1, "tail_bound_check: k >= 1");
  require(draws >= 100, "tail_bound_check: at least 100 draws");
  std::vector<TailRow> out;
  for (std::size_t ri = 0; ri < R_list.size(); ++ri) {
    double R = R_list[ri];
    require(R >= 0.5 && R <= 3.0, "tail_bound_check: R in [0.5, 3]");
    std::vector<double> g(draws), p(draws);
    std::vector<char> bad(draws, 0);
    std::size_t n_chunks = static_cast<std::size_t>((draws + kChunk - 1) / kChunk);
    RngStream root(seed, kTail + 64 * k + ri);
    parallel_chunks(n_chunks, resolve_threads(threads), [&](std::size_t c) {
      RngStream rng = root.split(c);
      std::int64_t end = std::min<std::int64_t>(draws, (c + 1) * kChunk);
      std::vector<ComplexPoint> z(k);
      for (std::int64_t i = static_cast<std::int64_t>(c) * kChunk; i < end; ++i) {
        double w = 1.0;
        for (auto& q : z) {
          double rho = R + rng.exponential();
          q = std::polar(rho, 2.0 * kPi * rng.uniform());
          w *= 2.0 * kPi * rho * std::exp(rho - R);
        }
        p[i] = w * void_integrand(z, MomentModel::Poisson, quadrature_budget);
        try {
          g[i] = w * void_integrand(z, MomentModel::Ginibre, quadrature_budget);
        } catch (const NumericalError&) {
          bad[i] = 1;
        }
      }
    });
    Accumulator ag, ap;
    std::int64_t failures = 0;
    for (std::int64_t i = 0; i < draws; ++i) {
      ap.add(p[i]);
      if (bad[i])
        ++failures;
      else
        ag.add(g[i]);
    }
    if (failures > 0.01 * draws) throw NumericalError("tail_bound_check: more than 1% of draws failed");
    TailRow row;
    row.R = R;
    row.J = J(R);
    std::string tag = "/complement_ball/k=" + std::to_string(k);
    row.ginibre = ag.estimate(seed, "ginibre_formula" + tag);
    row.poisson = ap.estimate(seed, "poisson_formula" + tag);
    row.bound = row.poisson.value * std::exp(1.5 - row.J);
    row.margin = row.bound - row.ginibre.value;
    out.push_back(row);
  }
  return out;
}

namespace {

struct SideDraw {
  std::vector<ComplexPoint> z;
  double q;  // proposal density on sorted-angle tuples
};

// cyclic angle gaps ~ Dirichlet(alpha), uniform rotation, radii ~ Gamma(shape, scale)
SideDraw propose_sides(int k, RngStream& rng, double alpha, double shape, double scale) {
  std::gamma_distribution<double> ga(alpha, 1.0), gr(shape, scale);
  std::vector<double> g(k);
  double total = 0.0;
  for (auto& x : g) total += (x = ga(rng));
  SideDraw d;
  d.z.resize(k);
  double th = 2.0 * kPi * rng.uniform();
  double logq = std::log(static_cast<double>(k)) - k * std::log(2.0 * kPi) + std::lgamma(k * alpha) - k * std::lgamma(alpha);
  for (int j = 0; j < k; ++j) {
    double rho = gr(rng);
    d.z[j] = std::polar(rho, th);
    th += 2.0 * kPi * g[j] / total;
    logq += (alpha - 1.0) * std::log(g[j] / total);
    logq += (shape - 2.0) * std::log(rho) - rho / scale - std::lgamma(shape) - shape * std::log(scale);
  }
  d.q = std::exp(logq);
  return d;
}

double side_integrand(const SideDraw& d, int k, int budget, bool& in_a) {
  auto poly = geometry::halfplane_intersection(d.z);
  in_a = poly.bounded && poly.side_count() == k && static_cast<int>(poly.neighbors.size()) == k;
  if (!in_a) return 0.0;
  double bound = 1.0;
  for (auto v : poly.vertices) bound = std::min(bound, single_disk_void(std::norm(v), MomentModel::Ginibre));
  if (bound < 1e-16) return 0.0;
  auto sd = spectral::galerkin_modes(KernelSpec::palm(), spectral::PlanarDomain::flower(poly, budget), budget);
  return std::max(0.0, spectral::janossy_density(sd, d.z));
}

struct SidePass {
  Accumulator total;
  std::int64_t accepted = 0;
  std::int64_t failures = 0;
  double weighted_r = 0.0;
  double weight = 0.0;
};

SidePass side_pass(int k, const SideOptions& opt, double scale, std::int64_t draws, std::uint64_t tag) {
  std::size_t n_chunks = static_cast<std::size_t>((draws + kChunk - 1) / kChunk);
  std::vector<SidePass> parts(n_chunks);
  RngStream root(opt.seed, tag);
  parallel_chunks(n_chunks, resolve_threads(opt.threads), [&](std::size_t c) {
    RngStream rng = root.split(c);
    auto& part = parts[c];
    std::int64_t end = std::min<std::int64_t>(draws, (c + 1) * kChunk);
    for (std::int64_t i = static_cast<std::int64_t>(c) * kChunk; i < end; ++i) {
      auto d = propose_sides(k, rng, opt.angle_concentration, opt.radius_shape, scale);
      bool in_a = false;
      double w = 0.0;
      try {
        w = side_integrand(d, k, opt.quadrature_budget, in_a) / d.q;
      } catch (const NumericalError&) {
        ++part.failures;
      }
      part.accepted += in_a;
      part.total.add(w);
      for (auto z : d.z) {
        part.weighted_r += w * std::abs(z);
        part.weight += w;
      }
    }
  });
  SidePass out;
  for (auto& p : parts) {
    out.total.merge(p.total);
    out.accepted += p.accepted;
    out.failures += p.failures;
    out.weighted_r += p.weighted_r;
    out.weight += p.weight;
  }
  return out;
}

double default_scale(const SideOptions& opt) { return 1.5 / opt.radius_shape; }

}  // namespace

double side_acceptance(int k, std::int64_t draws, const SideOptions& opt) {
  require(k >= 3 && draws >= 1, "side_acceptance: k >= 3");
  double scale = opt.radius_scale > 0.0 ? opt.radius_scale : default_scale(opt);
  auto acc = chunked(draws, opt.seed, kSide + 32 * k + 1, 1, [&](RngStream& rng) {
    auto d = propose_sides(k, rng, opt.angle_concentration, opt.radius_shape, scale);
    return geometry::in_set_A(d.z) ? 1.0 : 0.0;
  });
  return acc.mean();
}

double tune_radius_scale(int k, const SideOptions& opt) {
  require(k >= 3, "tune_radius_scale: k >= 3");
  std::int64_t pilot = std::min(opt.pilot_draws, std::max<std::int64_t>(100, opt.draws / 4));
  auto pass = side_pass(k, opt, default_scale(opt), pilot, kSide + 32 * k + 2);
  if (!(pass.weight > 0.0)) return default_scale(opt);
  return pass.weighted_r / pass.weight / opt.radius_shape;
}

SideEstimate side_probability(int k, const SideOptions& opt) {
  require(k >= 3, "side_probability: k >= 3");
  require(opt.draws >= 100, "side_probability: at least 100 draws");
  require(opt.angle_concentration >= 1.0 && opt.radius_shape >= 2.0,
          "side_probability: angle_concentration >= 1 and radius_shape >= 2");
  double scale = opt.radius_scale > 0.0 ? opt.radius_scale : tune_radius_scale(k, opt);
  auto pass = side_pass(k, opt, scale, opt.draws, kSide + 32 * k);
  SideEstimate s;
  s.k = k;
  s.radius_scale = scale;
  s.accepted = pass.accepted;
  s.failures = pass.failures;
  s.acceptance = static_cast<double>(s.accepted) / static_cast<double>(opt.draws);
  if (s.accepted >= 50 && s.failures > 0.02 * s.accepted)
    throw NumericalError("side_probability: more than 2% of accepted draws failed");
  s.estimate = pass.total.estimate(opt.seed, "side_probability/k=" + std::to_string(k));
  return s;
}

double CellSummary::side_frequency(int k) const {
  if (used == 0) return 0.0;
  auto it = sides.find(k);
  return it == sides.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(used);
}

double CellSummary::side_frequency_se(int k) const {
  if (used == 0) return 0.0;
  double p = side_frequency(k);
  return std::sqrt(p * (1.0 - p) / static_cast<double>(used));
}

CellSummary empirical_typical_cell(int M, std::int64_t n_cells, std::uint64_t seed, int threads) {
  require(M >= 32, "empirical_typical_cell: M >= 32");
  require(n_cells >= 1, "empirical_typical_cell: n_cells >= 1");
  KernelSpec k = KernelSpec::truncated_palm(M);
  double limit = (2.0 / 3.0) * std::sqrt(static_cast<double>(M));
  auto rec = run_cells(n_cells, threads, [&](std::int64_t i) {
    auto s = sampling::hkpv_sample(k, cell_seed(seed, kPalmCells, i));
    return record_cell(s.points, limit);
  });
  return summarize("palm", M, rec);
}

CellSummary empirical_zero_cell(int M, std::int64_t n_cells, std::uint64_t seed, int threads) {
  require(M >= 32, "empirical_zero_cell: M >= 32");
  require(n_cells >= 1, "empirical_zero_cell: n_cells >= 1");
  KernelSpec k = KernelSpec::truncated_ginibre(M);
  double limit = (2.0 / 3.0) * std::sqrt(static_cast<double>(M));
  auto rec = run_cells(n_cells, threads, [&](std::int64_t i) {
    auto s = sampling::hkpv_sample(k, cell_seed(seed, kZeroCells, i));
    return record_cell(s.points, limit);
  });
  return summarize("ginibre_zero_cell", M, rec);
}

CellSummary poisson_typical_cell(std::int64_t n_cells, std::uint64_t seed, int threads, double window) {
  require(n_cells >= 1 && window > 0.0, "poisson_typical_cell: n_cells >= 1, window > 0");
  auto rec = run_cells(n_cells, threads, [&](std::int64_t i) {
    auto s = sampling::poisson_sample(1.0 / kPi, window, cell_seed(seed, kPoissonCells, i));
    std::vector<ComplexPoint> pts;
    for (auto z : s.points)
      if (z != 0.0) pts.push_back(z);
    return record_cell(pts, window);
  });
  return summarize("poisson", 0, rec);
}

NeighborCapture neighbor_capture_stats(int M, std::int64_t n_cells, std::uint64_t seed, int threads) {
  NeighborCapture r{};
  auto h = probabilities::H_integral();
  auto ev = probabilities::ev_typical_cell();
  auto c0 = probabilities::ev_c0();
  r.h_integral = h.value;
  r.h_integral_error = h.error;
  r.ev_typical = ev.value;
  r.ev_c0 = c0.value;
  r.gap = ev.value - c0.value;
  r.gap_error = ev.error + c0.error;
  r.stated_half = 0.5 * h.value;
  r.palm = empirical_typical_cell(M, n_cells, seed, threads);
  r.zero = empirical_zero_cell(M, n_cells, seed, threads);
  r.empirical_gap = r.palm.area.value - r.zero.area.value;
  r.empirical_gap_se = std::hypot(r.palm.area.std_error, r.zero.area.std_error);
  return r;
}

}  // namespace ginibre::cell_stats
