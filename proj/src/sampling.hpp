#pragma once

#include <Eigen/Core>
#include <optional>

#include "linalg.hpp"

namespace rkhs {

/// The interpolant s = sum_j c_j K_{x_j} to samples f_X on X, with
/// c = A^{-1} f_X. Immutable; evaluation is pure and concurrently callable.
class SamplingModel {
 public:
  SamplingModel(KernelSpec kernel, PointSet points, Eigen::VectorXd samples, Eigen::VectorXd coeffs,
                std::optional<GramMatrix> gram);

  const KernelSpec& kernel() const { return kernel_; }
  const PointSet& points() const { return points_; }
  const Eigen::VectorXd& samples() const { return samples_; }
  const Eigen::VectorXd& coeffs() const { return coeffs_; }
  /// Present for dense fits; empty for Kronecker-structured fits, where the
  /// full matrix is deliberately never materialized.
  const std::optional<GramMatrix>& gram() const { return gram_; }

  /// s(x) = sum_j c_j K(x_j, x).
  double operator()(std::span<const double> x) const;
  double operator()(const Point& x) const { return (*this)(x.view()); }

 private:
  KernelSpec kernel_;
  PointSet points_;
  Eigen::VectorXd samples_;
  Eigen::VectorXd coeffs_;
  std::optional<GramMatrix> gram_;
};

/// Interpolates samples f_X at X: coeffs = A^{-1} f_X.
SamplingModel fit(const KernelSpec& k, const PointSet& X, const Eigen::VectorXd& f_x);
SamplingModel fit(const GramMatrix& gram, const Eigen::VectorXd& f_x);

/// One element of the dual (Lagrange) basis: coefficients A^{-1} e_k, with
/// pointwise value l_k(x) = <A^{-1} e_k, R_X(x)>. Cardinal at the nodes:
/// l_k(x_j) = delta_jk.
class DualBasisVector {
 public:
  DualBasisVector(std::size_t index, Eigen::VectorXd coeffs, KernelSpec kernel, PointSet points);

  std::size_t index() const { return index_; }
  const Eigen::VectorXd& coeffs() const { return coeffs_; }
  const KernelSpec& kernel() const { return kernel_; }
  const PointSet& points() const { return points_; }

  double operator()(std::span<const double> x) const;
  double operator()(const Point& x) const { return (*this)(x.view()); }

 private:
  std::size_t index_;
  Eigen::VectorXd coeffs_;
  KernelSpec kernel_;
  PointSet points_;
};

/// The k-th dual basis vector (0-based index), one triangular solve pair.
DualBasisVector lagrange_basis(const GramMatrix& gram, std::size_t k);

/// max_{j,k} |(K_{x_j}, l_k)_K - delta_jk|, computed as the max-abs entry of
/// A A^{-1} - I. The primary numerical health metric of a configuration.
double biorthogonality_residual(const GramMatrix& gram);

struct StabilityCheck {
  double lhs;
  double mid;
  double rhs;
  bool ok;
};

/// Dual-side estimate: Lambda^{-1} |f_X|^2 <= |sum f(x_j) l_j|_K^2 <=
/// lambda^{-1} |f_X|^2, with mid = f_X^T A^{-1} f_X.
StabilityCheck stability_check_dual(const GramMatrix& gram, const Eigen::VectorXd& f_x, double slack = 1e-10);

/// Primal-side estimate for s = sum c_j K_{x_j}: lambda |s|_K^2 <= |s_X|^2
/// <= Lambda |s|_K^2, with mid = |A c|^2.
StabilityCheck stability_check_primal(const GramMatrix& gram, const Eigen::VectorXd& c, double slack = 1e-10);

/// The two expansions of f = sum c_j K_{x_j}: node values A c (coefficients
/// against the dual basis) and the kernel-basis coefficients c themselves.
struct DualRepresentations {
  Eigen::VectorXd lagrange_coeffs;  // f(x_j) = (f, K_{x_j})_K
  Eigen::VectorXd kernel_coeffs;    // c_j = (f, l_j)_K
};

DualRepresentations dual_representations(const GramMatrix& gram, const Eigen::VectorXd& c);

}  // namespace rkhs
