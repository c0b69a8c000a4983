#include "ginibre/discrete_dpp.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <limits>
#include <queue>

#include "ginibre/special.hpp"

namespace ginibre::discrete {

namespace {

constexpr int kMaxExact = 14;

int popcount(Subset s) { return std::popcount(s); }

std::vector<int> elements(Subset s) {
  std::vector<int> e;
  for (int i = 0; s; ++i, s >>= 1)
    if (s & 1u) e.push_back(i);
  return e;
}

Eigen::MatrixXcd sub(const Eigen::MatrixXcd& m, const std::vector<int>& r, const std::vector<int>& c) {
  Eigen::MatrixXcd out(r.size(), c.size());
  for (std::size_t i = 0; i < r.size(); ++i)
    for (std::size_t j = 0; j < c.size(); ++j) out(i, j) = m(r[i], c[j]);
  return out;
}

double det_real(const Eigen::MatrixXcd& m) {
  if (m.rows() == 0) return 1.0;
  return m.partialPivLu().determinant().real();
}

Eigen::MatrixXcd haar_unitary(int n, RngStream& rng) {
  Eigen::MatrixXcd g(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) g(i, j) = Complex(rng.normal(), rng.normal());
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    Complex d = r(j, j);
    if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

double factorial(int n) { return std::exp(std::lgamma(n + 1.0)); }

// Sum of det R[prefix + S] over S with |S cap B_i| = k_i.
double block_sum(const Eigen::MatrixXcd& R, const std::vector<int>& prefix, const Blocks& blocks,
                 const std::vector<int>& counts, Subset A) {
  double total = 0.0;
  for (Subset S = A;; S = (S - 1) & A) {
    bool ok = true;
    for (std::size_t i = 0; i < blocks.size() && ok; ++i) ok = popcount(S & to_mask(blocks[i])) == counts[i];
    if (ok) {
      auto idx = prefix;
      for (int e : elements(S)) idx.push_back(e);
      total += det_real(sub(R, idx, idx));
    }
    if (S == 0) break;
  }
  return total;
}

Subset union_mask(const Blocks& blocks) {
  Subset A = 0;
  for (const auto& b : blocks) {
    Subset m = to_mask(b);
    require((A & m) == 0, "blocks must be disjoint");
    A |= m;
  }
  return A;
}

void check_blocks(const FiniteDPP& d, const Blocks& blocks, const std::vector<int>& counts) {
  require(blocks.size() == counts.size(), "one count per block");
  for (const auto& b : blocks)
    for (int e : b) require(e >= 0 && e < d.size(), "block element outside the ground set");
  for (int c : counts) require(c >= 0, "counts must be nonnegative");
}

// Dinic max flow on doubles
class MaxFlow {
 public:
  explicit MaxFlow(int n) : head_(n, -1), level_(n), it_(n) {}
  void add_edge(int u, int v, double cap) {
    edges_.push_back({v, head_[u], cap});
    head_[u] = static_cast<int>(edges_.size()) - 1;
    edges_.push_back({u, head_[v], 0.0});
    head_[v] = static_cast<int>(edges_.size()) - 1;
  }
  double run(int s, int t) {
    double flow = 0.0;
    while (bfs(s, t)) {
      it_ = head_;
      while (double f = dfs(s, t, std::numeric_limits<double>::infinity())) flow += f;
    }
    return flow;
  }

 private:
  struct Edge {
    int to, next;
    double cap;
  };
  bool bfs(int s, int t) {
    std::fill(level_.begin(), level_.end(), -1);
    std::queue<int> q;
    level_[s] = 0;
    q.push(s);
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int e = head_[u]; e != -1; e = edges_[e].next)
        if (edges_[e].cap > 0.0 && level_[edges_[e].to] < 0) {
          level_[edges_[e].to] = level_[u] + 1;
          q.push(edges_[e].to);
        }
    }
    return level_[t] >= 0;
  }
  double dfs(int u, int t, double f) {
    if (u == t) return f;
    for (int& e = it_[u]; e != -1; e = edges_[e].next) {
      Edge& ed = edges_[e];
      if (ed.cap > 0.0 && level_[ed.to] == level_[u] + 1) {
        double got = dfs(ed.to, t, std::min(f, ed.cap));
        if (got > 0.0) {
          ed.cap -= got;
          edges_[e ^ 1].cap += got;
          return got;
        }
      }
    }
    return 0.0;
  }
  std::vector<Edge> edges_;
  std::vector<int> head_, level_, it_;
};

std::string describe_event(const std::vector<Subset>& masks, const std::vector<int>& k, double margin) {
  std::string s = "{";
  for (std::size_t i = 0; i < masks.size(); ++i) {
    if (i) s += ", ";
    s += "N{";
    bool first = true;
    for (int e : elements(masks[i])) {
      s += (first ? "" : ",") + std::to_string(e);
      first = false;
    }
    s += "} <= " + std::to_string(k[i]);
  }
  return s + "} margin " + std::to_string(margin);
}

}  // namespace

FiniteDPP::FiniteDPP(Eigen::MatrixXcd kernel) : k_(std::move(kernel)) {
  require(k_.rows() == k_.cols() && k_.rows() >= 1, "FiniteDPP: square nonempty kernel");
  require(k_.rows() <= 30, "FiniteDPP: ground set too large");
  double scale = std::max(1.0, k_.cwiseAbs().maxCoeff());
  require((k_ - k_.adjoint()).cwiseAbs().maxCoeff() <= 1e-12 * scale, "FiniteDPP: kernel must be Hermitian");
  k_ = 0.5 * (k_ + k_.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(k_, Eigen::EigenvaluesOnly);
  require(es.eigenvalues().minCoeff() >= -1e-12 && es.eigenvalues().maxCoeff() < 1.0,
          "FiniteDPP: spectrum must lie in [0, 1)");
}

double FiniteDPP::max_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(k_, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

Subset to_mask(const std::vector<int>& e) {
  Subset m = 0;
  for (int i : e) {
    require(i >= 0 && i < 32, "subset element out of range");
    m |= Subset{1} << i;
  }
  return m;
}

std::vector<double> principal_minors(const FiniteDPP& d) {
  int N = d.size();
  require(N <= kMaxExact, "principal_minors: ground set too large (N <= 14)");
  std::vector<double> m(std::size_t{1} << N);
  for (Subset S = 0; S < m.size(); ++S) {
    auto e = elements(S);
    m[S] = det_real(sub(d.kernel(), e, e));
  }
  return m;
}

std::vector<double> exact_law(const FiniteDPP& d) {
  int N = d.size();
  require(N <= kMaxExact, "exact_law: ground set too large (N <= 14)");
  auto f = principal_minors(d);
  for (int i = 0; i < N; ++i) {
    Subset bit = Subset{1} << i;
    for (Subset S = 0; S < f.size(); ++S)
      if (!(S & bit)) f[S] -= f[S | bit];
  }
  return f;
}

double law_marginal(const std::vector<double>& law, const Blocks& blocks, const std::vector<int>& counts) {
  require(blocks.size() == counts.size(), "law_marginal: one count per block");
  std::vector<Subset> masks;
  for (const auto& b : blocks) masks.push_back(to_mask(b));
  double p = 0.0;
  for (Subset S = 0; S < law.size(); ++S) {
    bool ok = true;
    for (std::size_t i = 0; i < masks.size() && ok; ++i) ok = popcount(S & masks[i]) == counts[i];
    if (ok) p += law[S];
  }
  return p;
}

std::vector<double> count_law(const std::vector<double>& law, Subset U) {
  std::vector<double> c(popcount(U) + 1, 0.0);
  for (Subset S = 0; S < law.size(); ++S) c[popcount(S & U)] += law[S];
  return c;
}

FiniteDPP condition(const FiniteDPP& d, const std::vector<int>& anchors) {
  require(!anchors.empty(), "condition: at least one anchor");
  const auto& K = d.kernel();
  int N = d.size();
  std::vector<int> all(N);
  for (int i = 0; i < N; ++i) all[i] = i;
  Eigen::MatrixXcd Kuu = sub(K, anchors, anchors);
  Eigen::LLT<Eigen::MatrixXcd> llt(Kuu);
  require(llt.info() == Eigen::Success && det_real(Kuu) > 1e-14, "condition: K(u;u) must be positive");
  Eigen::MatrixXcd Kxu = sub(K, all, anchors);
  Eigen::MatrixXcd out = K - Kxu * llt.solve(Kxu.adjoint());
  for (int a : anchors) {
    out.row(a).setZero();
    out.col(a).setZero();
  }
  out = 0.5 * (out + out.adjoint()).eval();
  return FiniteDPP(out);
}

Eigen::MatrixXcd resolvent(const FiniteDPP& d, Subset A) {
  const auto& K = d.kernel();
  int N = d.size();
  auto a = elements(A);
  std::vector<int> all(N);
  for (int i = 0; i < N; ++i) all[i] = i;
  if (a.empty()) return K;
  Eigen::MatrixXcd IK = Eigen::MatrixXcd::Identity(a.size(), a.size()) - sub(K, a, a);
  Eigen::LLT<Eigen::MatrixXcd> llt(IK);
  if (llt.info() != Eigen::Success) throw NumericalError("resolvent: I - K_A is singular");
  Eigen::MatrixXcd KxA = sub(K, all, a);
  return K + KxA * llt.solve(KxA.adjoint());
}

double void_probability(const FiniteDPP& d, Subset A) {
  auto a = elements(A);
  Eigen::MatrixXcd IK = Eigen::MatrixXcd::Identity(a.size(), a.size()) - sub(d.kernel(), a, a);
  double v = det_real(IK);
  if (!(v > 0.0)) throw NumericalError("void_probability: I - K_A is singular");
  return v;
}

double counting_distribution(const FiniteDPP& d, const Blocks& blocks, const std::vector<int>& counts) {
  check_blocks(d, blocks, counts);
  Subset A = union_mask(blocks);
  double v = void_probability(d, A);
  for (std::size_t i = 0; i < blocks.size(); ++i)
    if (counts[i] > static_cast<int>(blocks[i].size())) return 0.0;
  auto R = resolvent(d, A);
  // each subset appears prod k_i! times among the ordered tuples of B
  return v * block_sum(R, {}, blocks, counts, A);
}

double conditioned_counting(const FiniteDPP& d, const std::vector<int>& anchors, const Blocks& blocks,
                            const std::vector<int>& counts) {
  check_blocks(d, blocks, counts);
  require(!anchors.empty(), "conditioned_counting: at least one anchor");
  double kuu = det_real(sub(d.kernel(), anchors, anchors));
  require(kuu > 1e-14, "conditioned_counting: K(u;u) must be positive");
  Subset A = union_mask(blocks);
  for (std::size_t i = 0; i < blocks.size(); ++i)
    if (counts[i] > static_cast<int>(blocks[i].size())) return 0.0;
  double v = void_probability(d, A);
  auto R = resolvent(d, A);
  return v / kuu * block_sum(R, anchors, blocks, counts, A);
}

CdfDifferenceReport prop9_difference(const FiniteDPP& d, int anchor, const std::vector<int>& U, int k) {
  require(k >= 0, "prop9_difference: k >= 0");
  auto it = std::find(U.begin(), U.end(), anchor);
  require(it != U.end(), "prop9_difference: anchor must lie in U");
  double kuu = d.kernel()(anchor, anchor).real();
  require(kuu > 0.0, "prop9_difference: K(u,u) must be positive");
  int pos = static_cast<int>(it - U.begin());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sub(d.kernel(), U, U));
  Eigen::VectorXd a = es.eigenvalues().cwiseMax(0.0);
  int m = static_cast<int>(a.size());
  std::vector<double> x(m);
  for (int n = 0; n < m; ++n) x[n] = a[n] / (1.0 - a[n]);
  double sigma = 0.0;
  for (int n = 0; n < m; ++n) {
    std::vector<double> rest;
    for (int j = 0; j < m; ++j)
      if (j != n) rest.push_back(x[j]);
    double ek = 0.0;
    if (k <= static_cast<int>(rest.size())) ek = special::elementary_symmetric(rest, k)[k];
    sigma += std::norm(es.eigenvectors()(pos, n)) * a[n] * a[n] / (1.0 - a[n]) * ek;
  }
  Subset Um = to_mask(U);
  CdfDifferenceReport r{};
  r.formula = void_probability(d, Um) / kuu * sigma;
  auto law = count_law(exact_law(d), Um);
  auto lawu = count_law(exact_law(condition(d, {anchor})), Um);
  for (int j = 0; j <= std::min<int>(k, static_cast<int>(law.size()) - 1); ++j) {
    r.cdf += law[j];
    r.conditioned_cdf += lawu[j];
  }
  r.brute = r.conditioned_cdf - r.cdf;
  r.alpha_max = a.maxCoeff();
  r.cdf_bound = r.cdf / (1.0 - r.alpha_max);
  return r;
}

CdfBoundReport conditioned_cdf_bound(const FiniteDPP& d, const std::vector<int>& anchors, const std::vector<int>& U, int k) {
  Subset Um = to_mask(U);
  for (int a : anchors) require((Um >> a) & 1u, "conditioned_cdf_bound: anchors must lie in U");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sub(d.kernel(), U, U), Eigen::EigenvaluesOnly);
  double amax = es.eigenvalues().maxCoeff();
  auto law = count_law(exact_law(d), Um);
  auto lawu = count_law(exact_law(condition(d, anchors)), Um);
  CdfBoundReport r{0.0, 0.0};
  double cdf = 0.0;
  for (int j = 0; j <= std::min<int>(k, static_cast<int>(law.size()) - 1); ++j) {
    cdf += law[j];
    r.lhs += lawu[j];
  }
  r.rhs = std::pow(1.0 - amax, -static_cast<double>(anchors.size())) * cdf;
  return r;
}

double palm_cdf_from_resolvent(const FiniteDPP& d, int anchor, const std::vector<int>& A, int k) {
  require(k >= 0, "palm_cdf_from_resolvent: k >= 0");
  double kuu = d.kernel()(anchor, anchor).real();
  require(kuu > 0.0, "palm_cdf_from_resolvent: K(u,u) must be positive");
  Subset Am = to_mask(A);
  auto law = count_law(exact_law(d), Am);
  double cdf = 0.0;
  for (int j = 0; j <= std::min<int>(k, static_cast<int>(law.size()) - 1); ++j) cdf += law[j];
  if (k > popcount(Am)) return cdf;
  auto R = resolvent(d, Am);
  double sum = 0.0;
  for (Subset S = Am;; S = (S - 1) & Am) {
    if (popcount(S) == k) {
      std::vector<int> idx{anchor};
      for (int e : elements(S)) idx.push_back(e);
      Eigen::MatrixXcd m = sub(R, idx, idx);
      for (std::size_t i = 0; i < idx.size(); ++i) m(i, 0) -= d.kernel()(idx[i], anchor);
      sum += det_real(m);
    }
    if (S == 0) break;
  }
  return cdf + void_probability(d, Am) / kuu * sum;
}

double max_decreasing_family_brute(const std::vector<double>& w, int N) {
  require(N <= 4, "max_decreasing_family_brute: N <= 4");
  std::size_t n = std::size_t{1} << N;
  double best = 0.0;
  for (std::uint32_t fam = 0; fam < (1u << n); ++fam) {
    bool down = true;
    double v = 0.0;
    for (Subset S = 0; S < n && down; ++S) {
      if (!((fam >> S) & 1u)) continue;
      v += w[S];
      for (int j = 0; j < N; ++j)
        if ((S >> j) & 1u && !((fam >> (S & ~(Subset{1} << j))) & 1u)) down = false;
    }
    if (down) best = std::max(best, v);
  }
  return best;
}

double max_decreasing_family(const std::vector<double>& w, int N) {
  require(N <= 10, "max_decreasing_family: N <= 10");
  std::size_t n = std::size_t{1} << N;
  require(w.size() == n, "max_decreasing_family: one weight per subset");
  int src = static_cast<int>(n), snk = src + 1;
  MaxFlow g(static_cast<int>(n) + 2);
  double positive = 0.0;
  const double inf = std::numeric_limits<double>::infinity();
  for (Subset S = 0; S < n; ++S) {
    if (w[S] > 0.0) {
      g.add_edge(src, S, w[S]);
      positive += w[S];
    } else if (w[S] < 0.0) {
      g.add_edge(S, snk, -w[S]);
    }
    for (int j = 0; j < N; ++j)
      if ((S >> j) & 1u) g.add_edge(S, S & ~(Subset{1} << j), inf);
  }
  return positive - g.run(src, snk);
}

DominationReport domination_check(const FiniteDPP& dominant, const FiniteDPP& dominated, DominationMode mode,
                                  double tolerance) {
  int N = dominant.size();
  require(dominated.size() == N, "domination_check: ground sets differ");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dominant.kernel() - dominated.kernel(), Eigen::EigenvaluesOnly);
  require(es.eigenvalues().minCoeff() >= -1e-10, "domination_check: kernels are not Loewner ordered");
  auto pk = exact_law(dominant);
  auto pl = exact_law(dominated);
  std::vector<double> D(pk.size());
  for (std::size_t i = 0; i < D.size(); ++i) D[i] = pk[i] - pl[i];

  DominationReport rep;
  rep.ground_size = N;
  rep.mode = mode;
  rep.worst_margin = -std::numeric_limits<double>::infinity();

  if (mode == DominationMode::Full) {
    require(N <= 8, "domination_check: full mode needs N <= 8");
    rep.events_checked = static_cast<std::int64_t>(D.size());
    rep.worst_margin = max_decreasing_family(D, N);
    if (rep.worst_margin > tolerance) {
      rep.violations = 1;
      rep.violation_list.push_back("decreasing family with margin " + std::to_string(rep.worst_margin));
    }
    return rep;
  }

  require(N <= 12, "domination_check: elementary mode needs N <= 12");
  std::vector<int> label(N, 0);
  std::vector<double> h;
  std::array<int, 64> lo{}, hi{};
  // restricted growth strings with at most 3 labels
  while (true) {
    int nb = *std::max_element(label.begin(), label.end()) + 1;
    std::vector<Subset> masks(nb, 0);
    for (int i = 0; i < N; ++i) masks[label[i]] |= Subset{1} << i;
    std::vector<int> size(3, 0), stride(3, 0);
    for (int b = 0; b < nb; ++b) size[b] = popcount(masks[b]);
    stride[0] = 1;
    stride[1] = size[0] + 1;
    stride[2] = stride[1] * (size[1] + 1);
    int total = stride[2] * (size[2] + 1);
    h.assign(total, 0.0);
    // the histogram index is additive over elements
    lo[0] = hi[0] = 0;
    for (Subset S = 1; S < 64; ++S) {
      int b = std::countr_zero(S);
      lo[S] = lo[S & (S - 1)] + (b < N ? stride[label[b]] : 0);
      hi[S] = hi[S & (S - 1)] + (b + 6 < N ? stride[label[b + 6]] : 0);
    }
    for (Subset H = 0; H < (D.size() + 63) / 64; ++H) {
      double* hh = h.data() + hi[H];
      const double* dd = D.data() + 64 * H;
      for (Subset L = 0; L < std::min<std::size_t>(64, D.size()); ++L) hh[lo[L]] += dd[L];
    }
    for (int c2 = 0; c2 <= size[2]; ++c2)
      for (int c1 = 0; c1 <= size[1]; ++c1) {
        double* row = h.data() + c2 * stride[2] + c1 * stride[1];
        for (int c0 = 1; c0 <= size[0]; ++c0) row[c0] += row[c0 - 1];
        if (c1 > 0)
          for (int c0 = 0; c0 <= size[0]; ++c0) row[c0] += row[c0 - stride[1]];
        if (c2 > 0)
          for (int c0 = 0; c0 <= size[0]; ++c0) row[c0] += row[c0 - stride[2]];
      }
    rep.events_checked += total;
    for (int idx = 0; idx < total; ++idx) {
      if (h[idx] > rep.worst_margin) rep.worst_margin = h[idx];
      if (h[idx] > tolerance) {
        ++rep.violations;
        if (rep.violation_list.size() < 10) {
          std::vector<int> k(nb);
          for (int b = 0; b < nb; ++b) k[b] = (idx / stride[b]) % (size[b] + 1);
          rep.violation_list.push_back(describe_event(masks, k, h[idx]));
        }
      }
    }
    // next restricted growth string
    int i = N - 1;
    for (; i >= 1; --i) {
      int mx = *std::max_element(label.begin(), label.begin() + i);
      if (label[i] <= mx && label[i] < 2) break;
    }
    if (i < 1) break;
    ++label[i];
    std::fill(label.begin() + i + 1, label.end(), 0);
  }
  return rep;
}

FiniteDPP random_dpp(int N, RngStream& rng, double max_eig) {
  require(N >= 1 && max_eig > 0.0 && max_eig < 1.0, "random_dpp: N >= 1, max_eig in (0,1)");
  Eigen::MatrixXcd U = haar_unitary(N, rng);
  Eigen::VectorXd lam(N);
  for (int i = 0; i < N; ++i) lam[i] = max_eig * rng.uniform();
  Eigen::MatrixXcd K = U * lam.asDiagonal() * U.adjoint();
  return FiniteDPP(0.5 * (K + K.adjoint()));
}

std::pair<FiniteDPP, FiniteDPP> random_loewner_pair(int N, RngStream& rng) {
  FiniteDPP K = random_dpp(N, rng);
  int r = std::min(N, rng.uniform() < 0.5 ? 1 : 2);
  Eigen::MatrixXcd V(N, r);
  for (int j = 0; j < r; ++j)
    for (int i = 0; i < N; ++i) V(i, j) = Complex(rng.normal(), rng.normal());
  double t = 1.0 - rng.uniform();
  Eigen::LLT<Eigen::MatrixXcd> lk(K.kernel());
  Eigen::MatrixXcd KiV = lk.solve(V);
  Eigen::MatrixXcd G = V.adjoint() * KiV;
  Eigen::MatrixXcd L = K.kernel() - t * V * G.ldlt().solve(V.adjoint());
  L = 0.5 * (L + L.adjoint()).eval();
  // t = 1 leaves exact zeros in the spectrum; clip rounding below zero
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(L);
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
  L = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
  return {K, FiniteDPP(0.5 * (L + L.adjoint()))};
}

FiniteDPP ModalDPP::dpp() const {
  Eigen::MatrixXcd K = features * alpha.asDiagonal() * features.adjoint();
  return FiniteDPP(0.5 * (K + K.adjoint()));
}

std::vector<Eigen::MatrixXcd> ModalDPP::block_grams() const {
  std::vector<Eigen::MatrixXcd> g;
  for (const auto& b : blocks) {
    Eigen::MatrixXcd F(b.size(), features.cols());
    for (std::size_t i = 0; i < b.size(); ++i) F.row(i) = features.row(b[i]);
    g.push_back(F.adjoint() * F);
  }
  return g;
}

ModalDPP random_modal(int N, int M, int n_blocks, RngStream& rng) {
  require(M >= 1 && M <= N && n_blocks >= 1 && n_blocks <= N, "random_modal: 1 <= M <= N, 1 <= blocks <= N");
  ModalDPP m;
  m.features = haar_unitary(N, rng).leftCols(M);
  m.alpha.resize(M);
  for (int i = 0; i < M; ++i) m.alpha[i] = 0.95 * rng.uniform();
  std::vector<int> perm(N);
  for (int i = 0; i < N; ++i) perm[i] = i;
  for (int i = N - 1; i > 0; --i) std::swap(perm[i], perm[static_cast<int>(rng.uniform() * (i + 1))]);
  m.blocks.assign(n_blocks, {});
  for (int i = 0; i < N; ++i) m.blocks[i < n_blocks ? i : static_cast<int>(rng.uniform() * n_blocks)].push_back(perm[i]);
  for (auto& b : m.blocks) std::sort(b.begin(), b.end());
  return m;
}

ModalDPP rotate_blocks(const ModalDPP& m, RngStream& rng) {
  ModalDPP out = m;
  for (const auto& b : m.blocks) {
    int s = static_cast<int>(b.size());
    Eigen::MatrixXcd U = haar_unitary(s, rng);
    Eigen::MatrixXcd F(s, m.features.cols());
    for (int i = 0; i < s; ++i) F.row(i) = m.features.row(b[i]);
    F = U * F;
    for (int i = 0; i < s; ++i) out.features.row(b[i]) = F.row(i);
  }
  return out;
}

ModalDPP gram_realization(const ModalDPP& m) {
  auto grams = m.block_grams();
  std::vector<Eigen::MatrixXcd> rows;
  int total = 0;
  for (const auto& G : grams) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(G);
    double top = std::max(es.eigenvalues().maxCoeff(), 0.0);
    std::vector<int> keep;
    for (int i = 0; i < es.eigenvalues().size(); ++i)
      if (es.eigenvalues()[i] > 1e-12 * std::max(1.0, top)) keep.push_back(i);
    Eigen::MatrixXcd C(keep.size(), G.cols());
    for (std::size_t j = 0; j < keep.size(); ++j)
      C.row(j) = std::sqrt(es.eigenvalues()[keep[j]]) * es.eigenvectors().col(keep[j]).adjoint();
    rows.push_back(C);
    total += static_cast<int>(keep.size());
  }
  ModalDPP out;
  out.alpha = m.alpha;
  out.features.resize(total, m.features.cols());
  int at = 0;
  for (const auto& C : rows) {
    std::vector<int> b;
    for (int j = 0; j < C.rows(); ++j) {
      out.features.row(at) = C.row(j);
      b.push_back(at++);
    }
    out.blocks.push_back(b);
  }
  return out;
}

std::vector<double> block_count_law(const ModalDPP& m, std::vector<int>* dims) {
  auto law = exact_law(m.dpp());
  std::vector<Subset> masks;
  std::vector<int> stride{1}, size;
  for (const auto& b : m.blocks) {
    masks.push_back(to_mask(b));
    size.push_back(static_cast<int>(b.size()));
    stride.push_back(stride.back() * (size.back() + 1));
  }
  std::vector<double> out(stride.back(), 0.0);
  for (Subset S = 0; S < law.size(); ++S) {
    int idx = 0;
    for (std::size_t i = 0; i < masks.size(); ++i) idx += stride[i] * popcount(S & masks[i]);
    out[idx] += law[S];
  }
  if (dims) *dims = size;
  return out;
}

double prop12_equivalence(const ModalDPP& a, const ModalDPP& b) {
  require(a.blocks.size() == b.blocks.size() && a.alpha.size() == b.alpha.size(),
          "prop12_equivalence: block and mode counts must agree");
  require((a.alpha - b.alpha).cwiseAbs().maxCoeff() <= 1e-10, "prop12_equivalence: mode eigenvalues differ");
  auto ga = a.block_grams(), gb = b.block_grams();
  for (std::size_t i = 0; i < ga.size(); ++i)
    require((ga[i] - gb[i]).cwiseAbs().maxCoeff() <= 1e-10, "prop12_equivalence: block Gramians differ");
  std::vector<int> da, db;
  auto la = block_count_law(a, &da);
  auto lb = block_count_law(b, &db);
  // compare on the union of count tuples; missing tuples have probability 0
  std::size_t nb = da.size();
  std::vector<int> dim(nb);
  for (std::size_t i = 0; i < nb; ++i) dim[i] = std::max(da[i], db[i]);
  std::vector<int> c(nb, 0);
  double worst = 0.0;
  while (true) {
    auto lookup = [&](const std::vector<double>& law, const std::vector<int>& d) {
      std::size_t idx = 0, st = 1;
      for (std::size_t i = 0; i < nb; ++i) {
        if (c[i] > d[i]) return 0.0;
        idx += st * c[i];
        st *= d[i] + 1;
      }
      return law[idx];
    };
    worst = std::max(worst, std::abs(lookup(la, da) - lookup(lb, db)));
    std::size_t i = 0;
    while (i < nb && ++c[i] > dim[i]) c[i++] = 0;
    if (i == nb) break;
  }
  return worst;
}

}  // namespace ginibre::discrete
