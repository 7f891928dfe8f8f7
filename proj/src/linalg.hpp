#pragma once

#include <Eigen/Core>
#include <memory>

#include "kernels.hpp"
#include "points.hpp"

namespace rkhs {

/// Extreme eigenvalues of a kernel matrix: the two-sided coefficient
/// stability constants of the kernel basis.
struct RieszBounds {
  double lambda_min;
  double lambda_max;
  double condition;  // lambda_max / lambda_min
};

/// The kernel matrix A of K over a point set X, with cached Cholesky factor
/// and spectrum.
///
/// Entries are assembled once per unordered pair, so the matrix is
/// bit-exactly symmetric. The factor and the spectrum are computed lazily
/// with compute-once semantics; instances are value types sharing one
/// immutable state block, safe for concurrent read access.
class GramMatrix {
 public:
  GramMatrix(KernelSpec kernel, PointSet points);

  const KernelSpec& kernel() const;
  const PointSet& points() const;
  std::size_t size() const;
  const Eigen::MatrixXd& entries() const;

  /// Lower-triangular Cholesky factor L with L L^T = entries. A pivot at or
  /// below n * u * max_diag (u = unit roundoff) raises
  /// NotPositiveDefiniteError carrying the pivot index; success certifies
  /// numerical positive definiteness.
  const Eigen::MatrixXd& cholesky() const;

  /// Full spectrum, ascending. O(n^3); intended for n <= 2048.
  const Eigen::VectorXd& eigenvalues() const;

  RieszBounds riesz_constants() const;

  /// c^T A c.
  double native_norm_sq(const Eigen::VectorXd& c) const;
  /// c_f^T A c_g; the inner product of the two span elements.
  double native_inner(const Eigen::VectorXd& c_f, const Eigen::VectorXd& c_g) const;

  /// Solves A x = b through the Cholesky factor.
  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;
  Eigen::MatrixXd solve(const Eigen::MatrixXd& b) const;

 private:
  struct State;
  std::shared_ptr<State> state_;
};

inline GramMatrix assemble_gram(KernelSpec kernel, PointSet points) {
  return GramMatrix(std::move(kernel), std::move(points));
}

}  // namespace rkhs
