#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ginibre/rng.hpp"
#include "ginibre/types.hpp"

namespace ginibre::discrete {

/// Disjoint subsets of the ground set {0, ..., N-1}.
using Blocks = std::vector<std::vector<int>>;
using Subset = std::uint32_t;

/// DPP on a finite ground set; kernel Hermitian with spectrum in [0, 1).
class FiniteDPP {
 public:
  explicit FiniteDPP(Eigen::MatrixXcd kernel);
  int size() const { return static_cast<int>(k_.rows()); }
  const Eigen::MatrixXcd& kernel() const { return k_; }
  double max_eigenvalue() const;

 private:
  Eigen::MatrixXcd k_;
};

/// det K_S for every subset S (bit i of the index = element i).
std::vector<double> principal_minors(const FiniteDPP& d);

/// P{psi = S} for every subset S, by Moebius inversion of the principal minors. N <= 14.
std::vector<double> exact_law(const FiniteDPP& d);

/// P{N_{B_i} = k_i for all i} read off an exact law.
double law_marginal(const std::vector<double>& law, const Blocks& blocks, const std::vector<int>& counts);
/// P{N_U = k}, k = 0..|U|.
std::vector<double> count_law(const std::vector<double>& law, Subset U);

Subset to_mask(const std::vector<int>& elements);

/// Reduced Palm kernel at the anchors (Schur complement; anchor rows and columns are zero).
FiniteDPP condition(const FiniteDPP& d, const std::vector<int>& anchors);

/// R_A(x, y) = K(x, y) + K(x, A)(I - K_AA)^{-1} K(A, y) for all x, y in the ground set.
Eigen::MatrixXcd resolvent(const FiniteDPP& d, Subset A);
/// det(I - K_AA).
double void_probability(const FiniteDPP& d, Subset A);

/// det(I - K_AA) / prod k_i! * sum over z in prod A_i^{k_i} of det R_A(z; z).
double counting_distribution(const FiniteDPP& d, const Blocks& blocks, const std::vector<int>& counts);

/// Counting law of the process conditioned on the anchors, from the resolvent of K:
/// det(I - K_AA) / (det K(u;u) prod k_i!) * sum det R_A(u,z; u,z).
double conditioned_counting(const FiniteDPP& d, const std::vector<int>& anchors, const Blocks& blocks,
                            const std::vector<int>& counts);

struct CdfDifferenceReport {
  double formula;        // P{N_U = 0} / K(u,u) * Sigma~_k
  double brute;          // P{N_U(psi_u) <= k} - P{N_U(psi) <= k} from exact laws
  double conditioned_cdf;
  double cdf;
  double alpha_max;
  double cdf_bound;    // (1 - alpha_max)^{-1} P{N_U(psi) <= k}
  bool nonnegative() const { return formula >= -1e-12; }
  bool bound_holds() const { return conditioned_cdf <= cdf_bound + 1e-12; }
};
/// anchor must lie in U.
CdfDifferenceReport prop9_difference(const FiniteDPP& d, int anchor, const std::vector<int>& U, int k);

struct CdfBoundReport {
  double lhs;  // P{N_U(psi_u) <= k}
  double rhs;  // (1 - alpha_max)^{-p} P{N_U(psi) <= k}
  bool holds() const { return lhs <= rhs + 1e-12; }
};
CdfBoundReport conditioned_cdf_bound(const FiniteDPP& d, const std::vector<int>& anchors, const std::vector<int>& U, int k);

/// P{N_A(psi) <= k} + det(I - K_AA)/(k! K(u,u)) * sum_{z in A^k} R^K_A(u, z), where R^K is
/// det R_A(u,z; u,z) with its first column replaced by R_A(., u) - K(., u).
double palm_cdf_from_resolvent(const FiniteDPP& d, int anchor, const std::vector<int>& A, int k);

enum class DominationMode { Elementary, Full };

struct DominationReport {
  int ground_size = 0;
  DominationMode mode = DominationMode::Elementary;
  std::int64_t events_checked = 0;
  std::int64_t violations = 0;
  double worst_margin = 0.0;  // max over checked events of P_dominant - P_dominated
  std::vector<std::string> violation_list;  // first few offending events
};

/// Elementary mode: events {N_{B_i} <= k_i} over all partitions into <= 3 blocks (N <= 12).
/// Full mode: every decreasing family of subsets (N <= 8), via a maximum-weight closure.
/// Throws PreconditionError unless dominant - dominated is PSD (to 1e-10).
DominationReport domination_check(const FiniteDPP& dominant, const FiniteDPP& dominated, DominationMode mode,
                                  double tolerance = 1e-10);

/// Maximum of sum_{S in F} w(S) over decreasing families F, by brute-force enumeration. N <= 4.
double max_decreasing_family_brute(const std::vector<double>& w, int N);
/// Same maximum via min cut. N <= 10.
double max_decreasing_family(const std::vector<double>& w, int N);

/// K = U diag(lambda) U*, lambda uniform on (0, max_eig), U Haar.
FiniteDPP random_dpp(int N, RngStream& rng, double max_eig = 0.95);
/// (K, L) with L = K - t V (V* K^{-1} V)^{-1} V*, rank V in {1, 2}, t in (0, 1]; then 0 <= L <= K.
std::pair<FiniteDPP, FiniteDPP> random_loewner_pair(int N, RngStream& rng);

/// K = F diag(alpha) F* with F orthonormal columns on the union of the blocks.
struct ModalDPP {
  Eigen::MatrixXcd features;  // N x M
  Eigen::VectorXd alpha;      // M, in (0, 1)
  Blocks blocks;

  FiniteDPP dpp() const;
  /// G_i = F_{A_i}* F_{A_i}.
  std::vector<Eigen::MatrixXcd> block_grams() const;
};

ModalDPP random_modal(int N, int M, int n_blocks, RngStream& rng);
/// Rows of each block multiplied by an independent Haar unitary.
ModalDPP rotate_blocks(const ModalDPP& m, RngStream& rng);
/// New ground set with rank(G_i) elements per block and the same block Gramians.
ModalDPP gram_realization(const ModalDPP& m);

/// Joint law of the block counts, indexed by count tuples.
std::vector<double> block_count_law(const ModalDPP& m, std::vector<int>* dims = nullptr);

/// max |P_a - P_b| over all block count tuples. Throws PreconditionError when the block
/// Gramians or the alphas differ by more than 1e-10.
double prop12_equivalence(const ModalDPP& a, const ModalDPP& b);

}  // namespace ginibre::discrete
