#pragma once

#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "ginibre/types.hpp"

namespace ginibre {

/// Self-adjoint kernel tagged by family. Immutable; copies share state.
class KernelSpec {
 public:
  enum class Family { Ginibre, Palm, Thinned, Translated, TruncatedGinibre, TruncatedPalm, Conditioned, FiniteMatrix };

  static KernelSpec ginibre();
  static KernelSpec palm();
  static KernelSpec thinned(double alpha);
  static KernelSpec translated(ComplexPoint a);
  static KernelSpec truncated_ginibre(int M);
  static KernelSpec truncated_palm(int M);
  /// Ground element i sits at the point (i, 0); other points evaluate to 0.
  static KernelSpec finite_matrix(const Eigen::MatrixXcd& H);

  Family family() const;
  double alpha() const;
  ComplexPoint shift() const;
  int truncation() const;
  const Eigen::MatrixXcd& matrix() const;
  KernelSpec base() const;
  const std::vector<ComplexPoint>& anchors() const;

  Complex operator()(ComplexPoint z1, ComplexPoint z2) const;

  struct Impl;

 private:
  explicit KernelSpec(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
  friend KernelSpec condition(const KernelSpec&, std::vector<ComplexPoint>);
};

inline Complex eval(const KernelSpec& k, ComplexPoint z1, ComplexPoint z2) { return k(z1, z2); }

/// Palm transform at the origin. Ginibre maps to Palm and TruncatedGinibre(M)
/// to TruncatedPalm(M); a FiniteMatrix maps to its Schur complement at element 0.
KernelSpec palm_of(const KernelSpec& k);

/// Kernel of the process conditioned on containing the anchors (reduced Palm).
/// Throws PreconditionError when the normalized anchor Gram determinant is <= 1e-12.
KernelSpec condition(const KernelSpec& k, std::vector<ComplexPoint> anchors);

Eigen::MatrixXcd gram(const KernelSpec& k, std::span<const ComplexPoint> a, std::span<const ComplexPoint> b);
Eigen::MatrixXcd gram(const KernelSpec& k, std::span<const ComplexPoint> pts);

/// (1/k!) det K(z_i, z_j).
double correlation(const KernelSpec& k, std::span<const ComplexPoint> z);

/// f_n(z) = z^n e^{-|z|^2/2} / sqrt(pi n!).
Complex mode_function(int n, ComplexPoint z);

/// (f_first(z), ..., f_{first+count-1}(z)).
Eigen::VectorXcd mode_vector(int first, int count, ComplexPoint z);

}  // namespace ginibre
