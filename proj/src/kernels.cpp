#include "ginibre/kernels.hpp"

#include <cmath>
#include <variant>

namespace ginibre {

namespace {

constexpr double kInvPi = 1.0 / kPi;

Complex ginibre_value(ComplexPoint z1, ComplexPoint z2, double alpha) {
  double d = std::norm(z1 - z2);
  double phase = (z1 * std::conj(z2)).imag() / alpha;
  return kInvPi * std::exp(-d / (2.0 * alpha)) * std::polar(1.0, phase);
}

// e^w - 1 without cancellation for small |w|
Complex expm1(Complex w) {
  double x = w.real(), y = w.imag();
  double s = std::sin(0.5 * y);
  return {std::expm1(x) * std::cos(y) - 2.0 * s * s, std::exp(x) * std::sin(y)};
}

Complex palm_value(ComplexPoint z1, ComplexPoint z2) {
  Complex w = z1 * std::conj(z2);
  double damp = -0.5 * (std::norm(z1) + std::norm(z2));
  if (std::abs(w) < 1.0) return kInvPi * expm1(w) * std::exp(damp);
  return ginibre_value(z1, z2, 1.0) - kInvPi * std::exp(damp);
}

// log|f_n(z)| for n >= first, filled into out
void mode_logs(int first, int count, double r, std::vector<double>& out) {
  out.resize(count);
  if (count == 0) return;
  double lr = std::log(r);
  double lm = first * lr - 0.5 * r * r - 0.5 * std::log(kPi) - 0.5 * std::lgamma(first + 1.0);
  out[0] = lm;
  for (int i = 1; i < count; ++i) {
    int n = first + i;
    lm += lr - 0.5 * std::log(static_cast<double>(n));
    out[i] = lm;
  }
}

Complex truncated_value(int first, int last, ComplexPoint z1, ComplexPoint z2) {
  int count = last - first;
  if (count <= 0) return 0.0;
  double r1 = std::abs(z1), r2 = std::abs(z2);
  if (r1 == 0.0 || r2 == 0.0) {
    if (first > 0) return 0.0;
    return kInvPi * std::exp(-0.5 * (r1 * r1 + r2 * r2));
  }
  thread_local std::vector<double> l1, l2;
  mode_logs(first, count, r1, l1);
  mode_logs(first, count, r2, l2);
  double dtheta = std::arg(z1) - std::arg(z2);
  Complex step = std::polar(1.0, dtheta);
  Complex ph = std::polar(1.0, first * dtheta);
  Complex sum = 0.0;
  for (int i = 0; i < count; ++i) {
    sum += std::exp(l1[i] + l2[i]) * ph;
    ph *= step;
    if ((i & 31) == 31) ph /= std::abs(ph);
  }
  return sum;
}

int ground_index(ComplexPoint z, Eigen::Index n) {
  if (z.imag() != 0.0) return -1;
  double r = z.real();
  if (r < 0.0 || r != std::floor(r) || r >= static_cast<double>(n)) return -1;
  return static_cast<int>(r);
}

}  // namespace

struct KernelSpec::Impl {
  Family family;
  double alpha = 1.0;
  ComplexPoint shift = 0.0;
  int M = 0;
  Eigen::MatrixXcd H;
  std::shared_ptr<const Impl> base;
  std::vector<ComplexPoint> anchors;
  Eigen::LLT<Eigen::MatrixXcd> anchor_llt;

  Complex eval(ComplexPoint z1, ComplexPoint z2) const {
    switch (family) {
      case Family::Ginibre:
        return ginibre_value(z1, z2, 1.0);
      case Family::Palm:
        return palm_value(z1, z2);
      case Family::Thinned:
        return ginibre_value(z1, z2, alpha);
      case Family::Translated:
        return ginibre_value(z1 - shift, z2 - shift, 1.0);
      case Family::TruncatedGinibre:
        return truncated_value(0, M, z1, z2);
      case Family::TruncatedPalm:
        return truncated_value(1, M, z1, z2);
      case Family::FiniteMatrix: {
        int i = ground_index(z1, H.rows()), j = ground_index(z2, H.rows());
        if (i < 0 || j < 0) return 0.0;
        return H(i, j);
      }
      case Family::Conditioned: {
        auto p = static_cast<Eigen::Index>(anchors.size());
        Eigen::VectorXcd a1(p), a2(p);
        for (Eigen::Index i = 0; i < p; ++i) {
          a1(i) = base->eval(anchors[i], z1);
          a2(i) = base->eval(anchors[i], z2);
        }
        auto L = anchor_llt.matrixL();
        Eigen::VectorXcd y1 = L.solve(a1), y2 = L.solve(a2);
        return base->eval(z1, z2) - y1.dot(y2);
      }
    }
    return 0.0;
  }
};

KernelSpec KernelSpec::ginibre() {
  auto p = std::make_shared<Impl>();
  p->family = Family::Ginibre;
  return KernelSpec(p);
}

KernelSpec KernelSpec::palm() {
  auto p = std::make_shared<Impl>();
  p->family = Family::Palm;
  return KernelSpec(p);
}

KernelSpec KernelSpec::thinned(double alpha) {
  require(alpha > 0.0 && alpha < 1.0, "thinned: alpha must lie in (0,1)");
  auto p = std::make_shared<Impl>();
  p->family = Family::Thinned;
  p->alpha = alpha;
  return KernelSpec(p);
}

KernelSpec KernelSpec::translated(ComplexPoint a) {
  require_finite(a, "translated");
  auto p = std::make_shared<Impl>();
  p->family = Family::Translated;
  p->shift = a;
  return KernelSpec(p);
}

KernelSpec KernelSpec::truncated_ginibre(int M) {
  require(M >= 1, "truncated_ginibre: M >= 1");
  auto p = std::make_shared<Impl>();
  p->family = Family::TruncatedGinibre;
  p->M = M;
  return KernelSpec(p);
}

KernelSpec KernelSpec::truncated_palm(int M) {
  require(M >= 1, "truncated_palm: M >= 1");
  auto p = std::make_shared<Impl>();
  p->family = Family::TruncatedPalm;
  p->M = M;
  return KernelSpec(p);
}

KernelSpec KernelSpec::finite_matrix(const Eigen::MatrixXcd& H) {
  require(H.rows() == H.cols() && H.rows() >= 1, "finite_matrix: square nonempty matrix required");
  double scale = std::max(1.0, H.cwiseAbs().maxCoeff());
  require((H - H.adjoint()).cwiseAbs().maxCoeff() <= 1e-12 * scale, "finite_matrix: matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H, Eigen::EigenvaluesOnly);
  require(es.eigenvalues().minCoeff() >= -1e-10 && es.eigenvalues().maxCoeff() < 1.0,
          "finite_matrix: eigenvalues must lie in [0,1)");
  auto p = std::make_shared<Impl>();
  p->family = Family::FiniteMatrix;
  p->H = 0.5 * (H + H.adjoint());
  return KernelSpec(p);
}

KernelSpec::Family KernelSpec::family() const { return impl_->family; }
double KernelSpec::alpha() const { return impl_->alpha; }
ComplexPoint KernelSpec::shift() const { return impl_->shift; }
int KernelSpec::truncation() const { return impl_->M; }
const Eigen::MatrixXcd& KernelSpec::matrix() const { return impl_->H; }
KernelSpec KernelSpec::base() const {
  require(impl_->family == Family::Conditioned, "base: not a conditioned kernel");
  return KernelSpec(impl_->base);
}
const std::vector<ComplexPoint>& KernelSpec::anchors() const { return impl_->anchors; }

Complex KernelSpec::operator()(ComplexPoint z1, ComplexPoint z2) const { return impl_->eval(z1, z2); }

Eigen::MatrixXcd gram(const KernelSpec& k, std::span<const ComplexPoint> a, std::span<const ComplexPoint> b) {
  Eigen::MatrixXcd G(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) G(i, j) = k(a[i], b[j]);
  return G;
}

Eigen::MatrixXcd gram(const KernelSpec& k, std::span<const ComplexPoint> pts) {
  auto n = static_cast<Eigen::Index>(pts.size());
  Eigen::MatrixXcd G(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    G(i, i) = k(pts[i], pts[i]).real();
    for (Eigen::Index j = 0; j < i; ++j) {
      G(i, j) = k(pts[i], pts[j]);
      G(j, i) = std::conj(G(i, j));
    }
  }
  return G;
}

double correlation(const KernelSpec& k, std::span<const ComplexPoint> z) {
  require(!z.empty(), "correlation: empty point list");
  Eigen::MatrixXcd G = gram(k, z);
  double det = G.determinant().real();
  double fact = std::tgamma(static_cast<double>(z.size()) + 1.0);
  return det / fact;
}

KernelSpec condition(const KernelSpec& k, std::vector<ComplexPoint> anchors) {
  if (anchors.empty()) return k;
  for (auto a : anchors) require_finite(a, "condition");
  Eigen::MatrixXcd G = gram(k, anchors);
  auto p = G.rows();
  Eigen::VectorXd d = G.diagonal().real();
  for (Eigen::Index i = 0; i < p; ++i)
    if (!(d(i) > 0.0)) throw PreconditionError("condition: singular anchor set (zero kernel diagonal)");
  Eigen::VectorXd s = d.cwiseSqrt().cwiseInverse();
  Eigen::MatrixXcd N = s.asDiagonal() * G * s.asDiagonal();
  Eigen::LLT<Eigen::MatrixXcd> nllt(N);
  double ndet = 1.0;
  if (nllt.info() == Eigen::Success) {
    for (Eigen::Index i = 0; i < p; ++i) ndet *= std::norm(nllt.matrixLLT()(i, i));
  } else {
    ndet = 0.0;
  }
  if (ndet <= 1e-12) throw PreconditionError("condition: singular anchor set (Gram determinant below floor)");

  if (k.family() == KernelSpec::Family::FiniteMatrix) {
    const auto& H = k.matrix();
    std::vector<int> idx;
    bool ground = true;
    for (auto a : anchors) {
      int i = ground_index(a, H.rows());
      if (i < 0) ground = false;
      idx.push_back(i);
    }
    if (ground) {
      Eigen::MatrixXcd HA(H.rows(), p);
      for (Eigen::Index j = 0; j < p; ++j) HA.col(j) = H.col(idx[j]);
      Eigen::LLT<Eigen::MatrixXcd> llt(G);
      Eigen::MatrixXcd C = H - HA * llt.solve(HA.adjoint());
      for (int i : idx) {
        C.row(i).setZero();
        C.col(i).setZero();
      }
      return KernelSpec::finite_matrix(0.5 * (C + C.adjoint()));
    }
  }

  auto impl = std::make_shared<KernelSpec::Impl>();
  impl->family = KernelSpec::Family::Conditioned;
  impl->base = k.impl_;
  impl->anchors = std::move(anchors);
  impl->anchor_llt.compute(G);
  if (impl->anchor_llt.info() != Eigen::Success)
    throw PreconditionError("condition: anchor Gram matrix not positive definite");
  return KernelSpec(impl);
}

KernelSpec palm_of(const KernelSpec& k) {
  switch (k.family()) {
    case KernelSpec::Family::Ginibre:
      return KernelSpec::palm();
    case KernelSpec::Family::TruncatedGinibre:
      return KernelSpec::truncated_palm(k.truncation());
    default:
      break;
  }
  if (!(k(0.0, 0.0).real() > 0.0)) throw PreconditionError("palm_of: degenerate origin, K(0,0) = 0");
  return condition(k, {ComplexPoint(0.0, 0.0)});
}

Complex mode_function(int n, ComplexPoint z) {
  require(n >= 0, "mode_function: n >= 0");
  double r = std::abs(z);
  if (r == 0.0) return n == 0 ? 1.0 / std::sqrt(kPi) : 0.0;
  double lm = n * std::log(r) - 0.5 * r * r - 0.5 * std::log(kPi) - 0.5 * std::lgamma(n + 1.0);
  return std::exp(lm) * std::polar(1.0, n * std::arg(z));
}

Eigen::VectorXcd mode_vector(int first, int count, ComplexPoint z) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(count);
  double r = std::abs(z);
  if (r == 0.0) {
    if (first == 0 && count > 0) v(0) = 1.0 / std::sqrt(kPi);
    return v;
  }
  std::vector<double> l;
  mode_logs(first, count, r, l);
  double th = std::arg(z);
  for (int i = 0; i < count; ++i) v(i) = std::exp(l[i]) * std::polar(1.0, (first + i) * th);
  return v;
}

}  // namespace ginibre
