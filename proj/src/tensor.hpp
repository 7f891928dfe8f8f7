#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "sampling.hpp"

namespace rkhs {

/// The product grid X x Y with the fixed linearization
/// (j, k) -> j * m + k (0-based, second factor fastest) and points
/// point(j, k) = (x_j || y_k). All Kronecker identities in this module are
/// stated relative to this vec convention.
class TensorGrid {
 public:
  TensorGrid(PointSet factor_x, PointSet factor_y);

  const PointSet& factor_x() const;
  const PointSet& factor_y() const;
  std::size_t rows() const;  // n = |X|
  std::size_t cols() const;  // m = |Y|
  std::size_t linear_index(std::size_t j, std::size_t k) const;

  /// The n*m concatenated points, in linearization order (cached).
  const PointSet& linearized() const;

 private:
  struct State;
  std::shared_ptr<State> state_;
};

/// The Gram matrix A1 (x) A2 of a product kernel over a tensor grid,
/// represented by its factors only; the Kronecker product itself is never
/// materialized here.
class KroneckerGram {
 public:
  KroneckerGram(GramMatrix gram_x, GramMatrix gram_y);

  const GramMatrix& gram_x() const { return gram_x_; }
  const GramMatrix& gram_y() const { return gram_y_; }

  /// Solves (A1 (x) A2) vec(C) = vec(F) as C = A1^{-1} F A2^{-1} through the
  /// factor Cholesky solves: O(n^3 + m^3 + nm(n+m)) instead of O((nm)^3).
  Eigen::MatrixXd solve(const Eigen::MatrixXd& f) const;

  /// (lambda1 * lambda2, Lambda1 * Lambda2): the extreme eigenvalues of the
  /// Kronecker product are the products of the factor extremes since all
  /// factor eigenvalues are positive.
  RieszBounds riesz_constants() const;

 private:
  GramMatrix gram_x_;
  GramMatrix gram_y_;
};

/// Solves (A1 (x) A2) vec(C) = vec(F) for explicit SPD factor matrices.
Eigen::MatrixXd kron_solve(const Eigen::MatrixXd& a1, const Eigen::MatrixXd& a2, const Eigen::MatrixXd& f);

/// K1(x1,y1) * K2(x2,y2) on concatenated coordinates.
inline KernelSpec product_kernel(KernelSpec k1, KernelSpec k2) {
  return KernelSpec::tensor_product(std::move(k1), std::move(k2));
}

/// Fits the product-kernel interpolant to an n x m sample matrix over the
/// grid via the factored solve. The model lives on the linearized grid; its
/// Gram matrix is not materialized.
SamplingModel tensor_fit(const KernelSpec& k1, const KernelSpec& k2, const TensorGrid& grid,
                         const Eigen::MatrixXd& samples);

/// The sampling function at grid node (j, k): coefficients
/// vec((A1^{-1} e_j)(A2^{-1} e_k)^T), pointwise L_{1,j}(x) * L_{2,k}(y).
DualBasisVector tensor_dual(const KroneckerGram& kg, const TensorGrid& grid, std::size_t j, std::size_t k);

struct BenchRow {
  std::size_t n;
  std::size_t m;
  double t_tensor_ms;
  double t_dense_ms;  // NaN when skipped
  double speedup;     // NaN when skipped
  bool dense_skipped;
};

/// Times the factored solve against dense assemble + factor + solve of the
/// materialized product Gram on integer factor grids (Gaussian factors,
/// seeded random right-hand side). The dense path is skipped beyond
/// dense_budget grid points. Median over `trials` runs.
std::vector<BenchRow> bench_tensor_vs_dense(const std::vector<std::pair<std::size_t, std::size_t>>& sizes,
                                            int trials, std::size_t dense_budget = 4096);

}  // namespace rkhs
