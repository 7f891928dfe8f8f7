#include "sampling.hpp"

#include <sstream>

namespace rkhs {

SamplingModel::SamplingModel(KernelSpec kernel, PointSet points, Eigen::VectorXd samples, Eigen::VectorXd coeffs,
                             std::optional<GramMatrix> gram)
    : kernel_(std::move(kernel)),
      points_(std::move(points)),
      samples_(std::move(samples)),
      coeffs_(std::move(coeffs)),
      gram_(std::move(gram)) {
  if (samples_.size() != static_cast<Eigen::Index>(points_.size()) || coeffs_.size() != samples_.size())
    throw DimensionError("model samples/coefficients must match the point count");
}

double SamplingModel::operator()(std::span<const double> x) const {
  return coeffs_.dot(kernel_section(kernel_, x, points_));
}

SamplingModel fit(const GramMatrix& gram, const Eigen::VectorXd& f_x) {
  if (f_x.size() != static_cast<Eigen::Index>(gram.size()))
    throw DimensionError("sample vector length does not match the point count");
  Eigen::VectorXd coeffs = gram.solve(f_x);
  return SamplingModel(gram.kernel(), gram.points(), f_x, std::move(coeffs), gram);
}

SamplingModel fit(const KernelSpec& k, const PointSet& X, const Eigen::VectorXd& f_x) {
  return fit(GramMatrix(k, X), f_x);
}

DualBasisVector::DualBasisVector(std::size_t index, Eigen::VectorXd coeffs, KernelSpec kernel, PointSet points)
    : index_(index), coeffs_(std::move(coeffs)), kernel_(std::move(kernel)), points_(std::move(points)) {
  if (coeffs_.size() != static_cast<Eigen::Index>(points_.size()))
    throw DimensionError("dual coefficients must match the point count");
}

double DualBasisVector::operator()(std::span<const double> x) const {
  return coeffs_.dot(kernel_section(kernel_, x, points_));
}

DualBasisVector lagrange_basis(const GramMatrix& gram, std::size_t k) {
  const auto n = gram.size();
  if (k >= n) {
    std::ostringstream msg;
    msg << "dual basis index " << k << " out of range for " << n << " points";
    throw IndexError(msg.str());
  }
  Eigen::VectorXd e = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  e[static_cast<Eigen::Index>(k)] = 1.0;
  return DualBasisVector(k, gram.solve(e), gram.kernel(), gram.points());
}

double biorthogonality_residual(const GramMatrix& gram) {
  const auto n = static_cast<Eigen::Index>(gram.size());
  const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd inverse = gram.solve(identity);
  return (gram.entries() * inverse - identity).cwiseAbs().maxCoeff();
}

namespace {

bool sandwich_holds(double lhs, double mid, double rhs, double slack) {
  return lhs <= mid * (1.0 + slack) && mid <= rhs * (1.0 + slack);
}

}  // namespace

StabilityCheck stability_check_dual(const GramMatrix& gram, const Eigen::VectorXd& f_x, double slack) {
  if (f_x.size() != static_cast<Eigen::Index>(gram.size()))
    throw DimensionError("sample vector length does not match the point count");
  const RieszBounds bounds = gram.riesz_constants();
  const double norm_sq = f_x.squaredNorm();
  const double lhs = norm_sq / bounds.lambda_max;
  const double rhs = norm_sq / bounds.lambda_min;
  const double mid = f_x.dot(gram.solve(f_x));
  return StabilityCheck{lhs, mid, rhs, sandwich_holds(lhs, mid, rhs, slack)};
}

StabilityCheck stability_check_primal(const GramMatrix& gram, const Eigen::VectorXd& c, double slack) {
  if (c.size() != static_cast<Eigen::Index>(gram.size()))
    throw DimensionError("coefficient length does not match the point count");
  const RieszBounds bounds = gram.riesz_constants();
  const double energy = gram.native_norm_sq(c);
  const double lhs = bounds.lambda_min * energy;
  const double rhs = bounds.lambda_max * energy;
  const double mid = (gram.entries() * c).squaredNorm();
  return StabilityCheck{lhs, mid, rhs, sandwich_holds(lhs, mid, rhs, slack)};
}

DualRepresentations dual_representations(const GramMatrix& gram, const Eigen::VectorXd& c) {
  if (c.size() != static_cast<Eigen::Index>(gram.size()))
    throw DimensionError("coefficient length does not match the point count");
  return DualRepresentations{gram.entries() * c, c};
}

}  // namespace rkhs
