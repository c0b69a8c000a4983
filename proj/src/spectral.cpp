#include "ginibre/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ginibre/special.hpp"

namespace ginibre::spectral {

namespace {

constexpr double kClamp = 1.0 - 1e-14;

double halton(std::uint64_t i, unsigned base) {
  double f = 1.0, r = 0.0;
  while (i > 0) {
    f /= base;
    r += f * static_cast<double>(i % base);
    i /= base;
  }
  return r;
}

void polar_product(ComplexPoint c, double r0, double r1, int budget, Quadrature& q) {
  int nr = std::max(4, static_cast<int>(std::lround(std::sqrt(budget / 2.0))));
  int nt = std::max(8, budget / nr);
  const auto& gl = special::gauss_legendre(nr);
  double half = 0.5 * (r1 - r0), mid = 0.5 * (r1 + r0);
  double dt = 2.0 * kPi / nt;
  for (int i = 0; i < nr; ++i) {
    double rho = mid + half * gl.nodes[i];
    double w = gl.weights[i] * half * rho * dt;
    for (int j = 0; j < nt; ++j) {
      q.nodes.push_back(c + std::polar(rho, (j + 0.5) * dt));
      q.weights.push_back(w);
    }
  }
}

// radial extent of disk d along direction theta from p, or 0 if the ray misses it
double ray_extent(const geometry::Disk& d, ComplexPoint p, double theta, bool on_boundary) {
  ComplexPoint cp = d.center - p;
  double b = (cp * std::polar(1.0, -theta)).real();
  if (on_boundary) return std::max(0.0, 2.0 * b);
  double disc = b * b - std::norm(cp) + d.radius * d.radius;
  if (disc < 0.0) return 0.0;
  return std::max(0.0, b + std::sqrt(disc));
}

// angular breakpoints of the radial function of a union of disks that all contain p;
// false when some disk misses p
bool star_cuts(const std::vector<geometry::Disk>& disks, ComplexPoint p, std::vector<char>& boundary,
               std::vector<double>& uniq) {
  boundary.assign(disks.size(), 0);
  for (std::size_t i = 0; i < disks.size(); ++i) {
    double dist = std::abs(disks[i].center - p);
    double tol = 1e-12 * std::max(1.0, disks[i].radius);
    if (dist > disks[i].radius + tol) return false;
    boundary[i] = std::abs(dist - disks[i].radius) <= tol;
  }
  std::vector<double> cuts;
  auto add = [&](double a) {
    a = std::fmod(a, 2.0 * kPi);
    if (a < 0.0) a += 2.0 * kPi;
    cuts.push_back(a);
  };
  for (std::size_t i = 0; i < disks.size(); ++i) {
    if (boundary[i]) {
      double t = std::arg(disks[i].center - p);
      add(t + 0.5 * kPi);
      add(t - 0.5 * kPi);
    }
    for (std::size_t j = i + 1; j < disks.size(); ++j) {
      for (auto x : geometry::circle_intersections(disks[i], disks[j]))
        if (std::abs(x - p) > 1e-12 * std::max(1.0, disks[i].radius)) add(std::arg(x - p));
    }
  }
  std::sort(cuts.begin(), cuts.end());
  uniq.clear();
  for (double c : cuts)
    if (uniq.empty() || c - uniq.back() > 1e-13) uniq.push_back(c);
  if (uniq.size() > 1 && uniq.front() + 2.0 * kPi - uniq.back() <= 1e-13) uniq.pop_back();
  if (uniq.empty()) uniq.push_back(0.0);
  return true;
}

double star_extent(const std::vector<geometry::Disk>& disks, const std::vector<char>& boundary, ComplexPoint p,
                   double th) {
  double R = 0.0;
  for (std::size_t k = 0; k < disks.size(); ++k) R = std::max(R, ray_extent(disks[k], p, th, boundary[k]));
  return R;
}

bool star_quadrature(const std::vector<geometry::Disk>& disks, ComplexPoint p, int budget, Quadrature& q) {
  std::vector<char> boundary;
  std::vector<double> uniq;
  if (!star_cuts(disks, p, boundary, uniq)) return false;
  int nr = std::max(6, static_cast<int>(std::lround(std::sqrt(budget / 2.0))));
  int nt_total = std::max(8, budget / nr);
  const auto& glr = special::gauss_legendre(nr);
  for (std::size_t s = 0; s < uniq.size(); ++s) {
    double a = uniq[s];
    double b = (s + 1 < uniq.size()) ? uniq[s + 1] : uniq[0] + 2.0 * kPi;
    double len = b - a;
    int m = std::max(4, static_cast<int>(std::lround(nt_total * len / (2.0 * kPi))));
    const auto& glt = special::gauss_legendre(m);
    for (int i = 0; i < m; ++i) {
      double th = 0.5 * (a + b) + 0.5 * len * glt.nodes[i];
      double wt = 0.5 * len * glt.weights[i];
      double R = star_extent(disks, boundary, p, th);
      if (R <= 0.0) continue;
      ComplexPoint dir = std::polar(1.0, th);
      for (int j = 0; j < nr; ++j) {
        double rho = 0.5 * R * (glr.nodes[j] + 1.0);
        q.nodes.push_back(p + rho * dir);
        q.weights.push_back(wt * 0.5 * R * glr.weights[j] * rho);
      }
    }
  }
  return true;
}

void halton_union(const geometry::DiskUnion& u, int budget, Quadrature& q) {
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  for (const auto& c : u.disks) {
    x0 = std::min(x0, c.center.real() - c.radius);
    x1 = std::max(x1, c.center.real() + c.radius);
    y0 = std::min(y0, c.center.imag() - c.radius);
    y1 = std::max(y1, c.center.imag() + c.radius);
  }
  double area = geometry::union_area_exact(u);
  std::vector<ComplexPoint> pts;
  for (std::uint64_t i = 1; pts.size() < static_cast<std::size_t>(budget) && i < 1000ULL * budget; ++i) {
    ComplexPoint z(x0 + (x1 - x0) * halton(i, 2), y0 + (y1 - y0) * halton(i, 3));
    if (u.contains(z)) pts.push_back(z);
  }
  for (auto z : pts) {
    q.nodes.push_back(z);
    q.weights.push_back(area / static_cast<double>(pts.size()));
  }
}

}  // namespace

PlanarDomain PlanarDomain::disk(ComplexPoint center, double radius, int budget) {
  require(radius > 0.0, "PlanarDomain::disk: radius > 0");
  require_finite(center, "PlanarDomain::disk");
  PlanarDomain d;
  d.shape = Shape::Disk;
  d.disks.disks = {{center, radius}};
  d.quadrature_budget = budget;
  return d;
}

PlanarDomain PlanarDomain::annulus(double r_in, double r_out, int budget) {
  require(r_in >= 0.0 && r_out > r_in, "PlanarDomain::annulus: 0 <= r_in < r_out");
  PlanarDomain d;
  d.shape = Shape::Annulus;
  d.r_in = r_in;
  d.r_out = r_out;
  d.quadrature_budget = budget;
  return d;
}

PlanarDomain PlanarDomain::disk_union(geometry::DiskUnion u, int budget) {
  require(!u.disks.empty(), "PlanarDomain::disk_union: empty union");
  for (const auto& c : u.disks) require(c.radius > 0.0, "PlanarDomain::disk_union: radii > 0");
  PlanarDomain d;
  d.shape = Shape::DiskUnion;
  d.disks = std::move(u);
  d.quadrature_budget = budget;
  return d;
}

PlanarDomain PlanarDomain::flower(const geometry::HalfPlanePolygon& p, int budget) {
  PlanarDomain d;
  d.shape = Shape::Flower;
  d.disks = geometry::flower(p);
  require(!d.disks.disks.empty(), "PlanarDomain::flower: degenerate polygon");
  d.quadrature_budget = budget;
  return d;
}

bool PlanarDomain::contains(ComplexPoint z) const {
  if (shape == Shape::Annulus) {
    double a = std::abs(z);
    return a >= r_in && a <= r_out;
  }
  return disks.contains(z);
}

double PlanarDomain::area() const {
  switch (shape) {
    case Shape::Disk:
      return kPi * disks.disks[0].radius * disks.disks[0].radius;
    case Shape::Annulus:
      return kPi * (r_out * r_out - r_in * r_in);
    default:
      return geometry::union_area_exact(disks);
  }
}

Quadrature build_quadrature(const PlanarDomain& d, int budget) {
  require(budget >= 64, "quadrature budget must be >= 64");
  Quadrature q;
  switch (d.shape) {
    case PlanarDomain::Shape::Disk:
      q.rule = "polar";
      polar_product(d.disks.disks[0].center, 0.0, d.disks.disks[0].radius, budget, q);
      return q;
    case PlanarDomain::Shape::Annulus:
      q.rule = "polar";
      polar_product(0.0, d.r_in, d.r_out, budget, q);
      return q;
    default:
      break;
  }
  const auto& ds = d.disks.disks;
  if (ds.size() == 1) {
    q.rule = "polar";
    polar_product(ds[0].center, 0.0, ds[0].radius, budget, q);
    return q;
  }
  std::vector<ComplexPoint> candidates = {0.0};
  for (const auto& c : ds) candidates.push_back(c.center);
  for (auto p : candidates) {
    if (star_quadrature(ds, p, budget, q)) {
      q.rule = "star";
      return q;
    }
    q.nodes.clear();
    q.weights.clear();
  }
  q.rule = "halton";
  halton_union(d.disks, budget, q);
  return q;
}

Complex SpectralDecomposition::eigenfunction(int n, ComplexPoint z) const {
  require(n >= 0 && static_cast<std::size_t>(n) < eigenvalues.size(), "eigenfunction: mode index out of range");
  double b = eigenvalues[n];
  if (b <= 0.0) return 0.0;
  return scaled_features(z)(n) / b;
}

Eigen::VectorXcd SpectralDecomposition::scaled_features(ComplexPoint z) const {
  auto m = static_cast<int>(eigenvalues.size());
  if (source == Source::Analytic) {
    ComplexPoint shift = kernel_.family() == KernelSpec::Family::Translated ? kernel_.shift() : 0.0;
    Complex phase = std::polar(1.0, ((z - shift) * std::conj(gauge_)).imag());
    Eigen::VectorXcd f = mode_vector(first_mode_, m, z - center_);
    for (int i = 0; i < m; ++i) f(i) *= phase * std::sqrt(eigenvalues[i]);
    return f;
  }
  if (source == Source::Modal) {
    Eigen::VectorXcd f = vectors_.transpose() * mode_vector(first_mode_, static_cast<int>(vectors_.rows()), z);
    for (int i = 0; i < m; ++i) f(i) *= std::sqrt(eigenvalues[i]);
    return f;
  }
  Eigen::VectorXcd kv(nodes.size());
  for (std::size_t j = 0; j < nodes.size(); ++j) kv(j) = kernel_(z, nodes[j]);
  return vectors_.transpose() * kv;
}

SpectralDecomposition disk_modes(const KernelSpec& k, double radius, ComplexPoint center, int cutoff) {
  require(radius > 0.0, "disk_modes: radius > 0");
  auto fam = k.family();
  require(fam == KernelSpec::Family::Ginibre || fam == KernelSpec::Family::Palm ||
              fam == KernelSpec::Family::Translated,
          "disk_modes: family must be Ginibre, Palm or Translated");
  if (fam == KernelSpec::Family::Palm) require(center == 0.0, "disk_modes: Palm spectrum requires a centred disk");
  double x = radius * radius;
  if (cutoff < 0) cutoff = static_cast<int>(std::ceil(x + 12.0 * std::sqrt(x + 1.0)));
  // sum_{n > cutoff} P(n+1, x) <= P(cutoff+2, x) / (1 - x/(cutoff+3))
  double tail = 1.0;
  if (x < cutoff + 3.0) tail = std::exp(special::log_mode_mass(cutoff + 1, x)) / (1.0 - x / (cutoff + 3.0));
  if (tail > 1e-12) throw PreconditionError("disk_modes: cutoff too small, tail mass exceeds 1e-12");
  SpectralDecomposition sd;
  sd.kernel_ = k;
  sd.source = SpectralDecomposition::Source::Analytic;
  sd.center_ = center;
  sd.gauge_ = center - (fam == KernelSpec::Family::Translated ? k.shift() : 0.0);
  sd.first_mode_ = fam == KernelSpec::Family::Palm ? 1 : 0;
  for (int n = sd.first_mode_; n <= cutoff; ++n) {
    double a = std::exp(special::log_mode_mass(n, x));
    if (a > kClamp) {
      a = kClamp;
      ++sd.clamp_count;
    }
    sd.eigenvalues.push_back(a);
  }
  sd.tail_mass = tail;
  sd.error_estimate = 1e-15;
  return sd;
}

SpectralDecomposition nystrom_fixed(const KernelSpec& k, const PlanarDomain& d, int budget, int rank_cap) {
  Quadrature q = build_quadrature(d, budget);
  auto n = static_cast<Eigen::Index>(q.nodes.size());
  SpectralDecomposition sd;
  sd.kernel_ = k;
  sd.source = SpectralDecomposition::Source::Quadrature;
  sd.budget = budget;
  if (n == 0) {
    sd.vectors_.resize(0, 0);
    return sd;
  }
  Eigen::VectorXd sw(n), resid(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    sw(i) = std::sqrt(q.weights[i]);
    resid(i) = std::max(0.0, q.weights[i] * k(q.nodes[i], q.nodes[i]).real());
  }
  double trace = resid.sum();
  double tol = 1e-14 * std::max(1.0, trace);
  int cap = std::min<int>(rank_cap, static_cast<int>(n));
  Eigen::MatrixXcd L(n, std::min(cap, 64));
  int r = 0;
  while (r < cap && resid.sum() > tol) {
    Eigen::Index p;
    double dp = resid.maxCoeff(&p);
    if (dp <= 0.0) break;
    if (r == L.cols()) L.conservativeResize(Eigen::NoChange, std::min<Eigen::Index>(cap, 2 * L.cols()));
    Eigen::VectorXcd col(n);
    for (Eigen::Index i = 0; i < n; ++i) col(i) = sw(i) * k(q.nodes[i], q.nodes[p]) * sw(p);
    if (r > 0) col.noalias() -= L.leftCols(r) * L.row(p).head(r).adjoint();
    col /= std::sqrt(dp);
    L.col(r) = col;
    for (Eigen::Index i = 0; i < n; ++i) resid(i) = std::max(0.0, resid(i) - std::norm(col(i)));
    resid(p) = 0.0;
    ++r;
  }
  double residual = resid.sum();
  Eigen::MatrixXcd Lr = L.leftCols(r);
  Eigen::MatrixXcd B = Lr.adjoint() * Lr;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(B);
  std::vector<int> keep;
  for (int i = r - 1; i >= 0; --i)
    if (es.eigenvalues()(i) > 1e-300) keep.push_back(i);
  sd.vectors_.resize(n, static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) {
    double lam = es.eigenvalues()(keep[c]);
    Eigen::VectorXcd u = Lr * es.eigenvectors().col(keep[c]) / std::sqrt(lam);
    sd.vectors_.col(c) = sw.cast<Complex>().cwiseProduct(u);
    if (lam > kClamp) {
      lam = kClamp;
      ++sd.clamp_count;
    }
    sd.eigenvalues.push_back(lam);
  }
  sd.nodes = std::move(q.nodes);
  sd.weights = std::move(q.weights);
  sd.tail_mass = residual;
  sd.error_estimate = residual;
  return sd;
}

namespace {

// P(j/2 + 1, x) for j = j0..j1, downward from the top two orders
void regularized_lower(int j0, int j1, double x, std::vector<double>& out) {
  out.assign(j1 + 1, 0.0);
  if (x <= 0.0) return;
  double lx = std::log(x);
  for (int j = j1; j >= std::max(j0, j1 - 1); --j) out[j] = std::exp(special::log_incomplete_gamma(0.5 * j + 1.0, x).log_p);
  for (int j = j1 - 2; j >= j0; --j) {
    double a = 0.5 * (j + 2);
    out[j] = std::min(1.0, out[j + 2] + std::exp(a * lx - x - std::lgamma(a + 1.0)));
  }
}

// Gram matrix int_A conj f_m f_n for m, n in [first, first + count) on a domain that is
// star-shaped about the origin: exact in the radius, Gauss-Legendre in the angle
bool star_mode_gram(const PlanarDomain& d, int first, int count, int budget, Eigen::MatrixXcd& G) {
  std::vector<geometry::Disk> disks;
  std::vector<char> boundary;
  std::vector<double> uniq = {0.0};
  if (d.shape != PlanarDomain::Shape::Annulus) {
    disks = d.disks.disks;
    if (!star_cuts(disks, 0.0, boundary, uniq)) return false;
  }
  int j0 = 2 * first, j1 = 2 * (first + count - 1);
  std::vector<double> coef((count) * (count));
  for (int a = 0; a < count; ++a)
    for (int b = 0; b < count; ++b) {
      int m = first + a, n = first + b;
      coef[a * count + b] = std::exp(std::lgamma(0.5 * (m + n) + 1.0) - 0.5 * (std::lgamma(m + 1.0) + std::lgamma(n + 1.0)));
    }
  G.setZero(count, count);
  int nt_total = std::max(64, budget / 4);
  std::vector<double> pout, pin;
  if (d.shape == PlanarDomain::Shape::Annulus) regularized_lower(j0, j1, d.r_in * d.r_in, pin);
  Eigen::VectorXcd e(count);
  for (std::size_t s = 0; s < uniq.size(); ++s) {
    double a = uniq[s];
    double b = (s + 1 < uniq.size()) ? uniq[s + 1] : uniq[0] + 2.0 * kPi;
    double len = b - a;
    int m = std::max(16, static_cast<int>(std::lround(nt_total * len / (2.0 * kPi))));
    const auto& gl = special::gauss_legendre(m);
    for (int i = 0; i < m; ++i) {
      double th = 0.5 * (a + b) + 0.5 * len * gl.nodes[i];
      double wt = 0.5 * len * gl.weights[i] / (2.0 * kPi);
      double R = d.shape == PlanarDomain::Shape::Annulus ? d.r_out : star_extent(disks, boundary, 0.0, th);
      if (R <= 0.0) continue;
      regularized_lower(j0, j1, R * R, pout);
      if (!pin.empty())
        for (int j = j0; j <= j1; ++j) pout[j] -= pin[j];
      for (int c = 0; c < count; ++c) e(c) = std::polar(1.0, (first + c) * th);
      for (int bb = 0; bb < count; ++bb)
        for (int aa = 0; aa < count; ++aa)
          G(aa, bb) += wt * coef[aa * count + bb] * pout[2 * first + aa + bb] * std::conj(e(aa)) * e(bb);
    }
  }
  return true;
}

}  // namespace

SpectralDecomposition galerkin_modes(const KernelSpec& k, const PlanarDomain& d, int budget) {
  auto fam = k.family();
  require(fam == KernelSpec::Family::Ginibre || fam == KernelSpec::Family::Palm ||
              fam == KernelSpec::Family::TruncatedGinibre || fam == KernelSpec::Family::TruncatedPalm,
          "galerkin_modes: kernel must be a sum of Ginibre modes");
  double extent = d.shape == PlanarDomain::Shape::Annulus ? d.r_out : d.disks.max_extent();
  double x = extent * extent;
  int first = fam == KernelSpec::Family::Palm || fam == KernelSpec::Family::TruncatedPalm ? 1 : 0;
  int last = std::numeric_limits<int>::max();
  if (fam == KernelSpec::Family::TruncatedGinibre || fam == KernelSpec::Family::TruncatedPalm)
    last = k.truncation() - 1;
  int n_end = first;
  while (n_end <= last && (n_end < x || special::log_mode_mass(n_end, x) > std::log(1e-17))) ++n_end;
  double tail = 0.0;
  if (n_end <= last) tail = std::exp(special::log_mode_mass(n_end, x)) / (1.0 - x / (n_end + 2.0));
  int m = n_end - first;
  SpectralDecomposition sd;
  sd.kernel_ = k;
  sd.source = SpectralDecomposition::Source::Modal;
  sd.budget = budget;
  sd.first_mode_ = first;
  sd.tail_mass = tail;
  if (m == 0) return sd;
  Eigen::MatrixXcd G;
  if (!star_mode_gram(d, first, m, budget, G)) {
    Quadrature q = build_quadrature(d, budget);
    auto n = static_cast<Eigen::Index>(q.nodes.size());
    Eigen::MatrixXcd phi(n, m);
    for (Eigen::Index j = 0; j < n; ++j)
      phi.row(j) = std::sqrt(q.weights[j]) * mode_vector(first, m, q.nodes[j]).transpose();
    G = phi.adjoint() * phi;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (G + G.adjoint()));
  sd.vectors_.resize(m, m);
  for (int i = 0; i < m; ++i) {
    int c = m - 1 - i;
    double b = std::max(0.0, es.eigenvalues()(c));
    if (b > kClamp) {
      b = kClamp;
      ++sd.clamp_count;
    }
    sd.eigenvalues.push_back(b);
    sd.vectors_.col(i) = es.eigenvectors().col(c);
  }
  sd.error_estimate = tail;
  return sd;
}

SpectralDecomposition nystrom_decompose(const KernelSpec& k, const PlanarDomain& d, const NystromOptions& opt) {
  int budget = opt.budget > 0 ? opt.budget : d.quadrature_budget;
  require(budget >= 64, "nystrom_decompose: budget must be >= 64");
  SpectralDecomposition prev = nystrom_fixed(k, d, budget, opt.rank_cap);
  if (!opt.refine) return prev;
  while (true) {
    budget *= 2;
    if (budget > opt.max_budget)
      throw NumericalError("nystrom_decompose: budget exhausted before eigenvalues converged");
    SpectralDecomposition cur = nystrom_fixed(k, d, budget, opt.rank_cap);
    double diff = 0.0;
    std::size_t m = std::min<std::size_t>(opt.compare_top, std::max(cur.size(), prev.size()));
    for (std::size_t i = 0; i < m; ++i) {
      double a = i < cur.size() ? cur.eigenvalues[i] : 0.0;
      double b = i < prev.size() ? prev.eigenvalues[i] : 0.0;
      diff = std::max(diff, std::abs(a - b));
    }
    if (diff < opt.tolerance) {
      cur.error_estimate = std::max(diff, cur.tail_mass);
      return cur;
    }
    prev = std::move(cur);
  }
}

double log_fredholm_det(const SpectralDecomposition& sd) {
  double s = 0.0;
  for (double b : sd.eigenvalues) s += std::log1p(-b);
  return s - sd.tail_mass;
}

double fredholm_det(const SpectralDecomposition& sd) { return std::exp(log_fredholm_det(sd)); }

namespace {

void guard(const SpectralDecomposition& sd) {
  for (double b : sd.eigenvalues)
    if (b >= kClamp) throw NumericalError("resolvent: eigenvalue at the 1 - 1e-14 cap, series diverges");
}

}  // namespace

Eigen::MatrixXcd resolvent_gram(const SpectralDecomposition& sd, std::span<const ComplexPoint> pts) {
  guard(sd);
  auto p = static_cast<Eigen::Index>(pts.size());
  auto m = static_cast<Eigen::Index>(sd.size());
  Eigen::MatrixXcd G(m, p);
  for (Eigen::Index j = 0; j < p; ++j) G.col(j) = sd.scaled_features(pts[j]);
  Eigen::VectorXd s(m);
  for (Eigen::Index i = 0; i < m; ++i) s(i) = 1.0 / (1.0 - sd.eigenvalues[i]);
  Eigen::MatrixXcd R = gram(sd.kernel(), pts);
  R += G.transpose() * s.asDiagonal() * G.conjugate();
  return 0.5 * (R + R.adjoint());
}

Complex resolvent(const SpectralDecomposition& sd, ComplexPoint z1, ComplexPoint z2) {
  guard(sd);
  Eigen::VectorXcd g1 = sd.scaled_features(z1);
  Eigen::VectorXcd g2 = z1 == z2 ? g1 : sd.scaled_features(z2);
  Complex s = sd.kernel()(z1, z2);
  for (Eigen::Index i = 0; i < g1.size(); ++i) s += g1(i) * std::conj(g2(i)) / (1.0 - sd.eigenvalues[i]);
  return s;
}

double resolvent_minor(const SpectralDecomposition& sd, std::span<const ComplexPoint> anchors) {
  if (anchors.empty()) return 1.0;
  return resolvent_gram(sd, anchors).determinant().real();
}

double janossy_density(const SpectralDecomposition& sd, std::span<const ComplexPoint> z) {
  auto m = static_cast<Eigen::Index>(sd.size());
  auto p = static_cast<Eigen::Index>(z.size());
  if (p == 0) return fredholm_det(sd);
  Eigen::MatrixXcd B = Eigen::MatrixXcd::Zero(m + p, m + p);
  for (Eigen::Index i = 0; i < m; ++i) B(i, i) = 1.0 - sd.eigenvalues[i];
  for (Eigen::Index j = 0; j < p; ++j) {
    Eigen::VectorXcd s = sd.scaled_features(z[j]);
    B.block(0, m + j, m, 1) = -s.conjugate();
    B.block(m + j, 0, 1, m) = s.transpose();
  }
  B.bottomRightCorner(p, p) = gram(sd.kernel(), z);
  return B.partialPivLu().determinant().real() * std::exp(-sd.tail_mass);
}

double iterated_trace(const SpectralDecomposition& sd, int n) {
  require(n >= 2, "iterated_trace: n >= 2");
  double s = 0.0;
  for (double b : sd.eigenvalues) s += std::pow(b, n);
  return s;
}

double platrier_residual(const KernelSpec& k, const PlanarDomain& d, std::span<const ComplexPoint> z, int series_order) {
  require(series_order >= 1, "platrier_residual: series_order >= 1");
  require(!z.empty(), "platrier_residual: at least one anchor");
  int budget = d.quadrature_budget;
  SpectralDecomposition sk = nystrom_fixed(k, d, budget);
  if (!sk.eigenvalues.empty() && sk.eigenvalues.front() >= 0.9)
    throw PreconditionError("platrier_residual: operator norm too large (>= 0.9)");
  std::vector<ComplexPoint> anchors(z.begin(), z.end());
  KernelSpec kz = condition(k, anchors);
  SpectralDecomposition sz = nystrom_fixed(kz, d, budget);
  auto alt = [&](const std::vector<double>& ev) {
    auto e = special::elementary_symmetric(ev, series_order);
    double s = 0.0;
    for (int n = 0; n <= series_order && n < static_cast<int>(e.size()); ++n) s += (n % 2 ? -e[n] : e[n]);
    return s;
  };
  double det_k = gram(k, z).determinant().real();
  double lhs = det_k * alt(sz.eigenvalues);
  double rhs = alt(sk.eigenvalues) * resolvent_minor(sk, z);
  return std::abs(lhs - rhs);
}

}  // namespace ginibre::spectral
