#include "linalg.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <mutex>
#include <sstream>

namespace rkhs {

struct GramMatrix::State {
  KernelSpec kernel;
  PointSet points;
  Eigen::MatrixXd entries;

  std::once_flag chol_once;
  Eigen::MatrixXd chol;

  std::once_flag eig_once;
  Eigen::VectorXd eigenvalues;

  State(KernelSpec k, PointSet x) : kernel(std::move(k)), points(std::move(x)) {}
};

GramMatrix::GramMatrix(KernelSpec kernel, PointSet points) : state_(std::make_shared<State>(std::move(kernel), std::move(points))) {
  const auto& k = state_->kernel;
  const auto& x = state_->points;
  if (x.dim() != k.dim()) throw DimensionError("point set dimension does not match kernel dimension");
  const auto n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    a(j, j) = k(x.row(static_cast<std::size_t>(j)), x.row(static_cast<std::size_t>(j)));
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const double v = k(x.row(static_cast<std::size_t>(i)), x.row(static_cast<std::size_t>(j)));
      a(i, j) = v;
      a(j, i) = v;
    }
  }
  state_->entries = std::move(a);
}

const KernelSpec& GramMatrix::kernel() const { return state_->kernel; }
const PointSet& GramMatrix::points() const { return state_->points; }
std::size_t GramMatrix::size() const { return state_->points.size(); }
const Eigen::MatrixXd& GramMatrix::entries() const { return state_->entries; }

const Eigen::MatrixXd& GramMatrix::cholesky() const {
  // call_once rethrows and leaves the flag unset on failure, so a failed
  // factorization is reported on every call.
  std::call_once(state_->chol_once, [&] {
    const Eigen::MatrixXd& a = state_->entries;
    const auto n = a.rows();
    // Numerical PD threshold: pivots must clear n * u * max_diag.
    const double u = std::numeric_limits<double>::epsilon() / 2.0;
    const double threshold = static_cast<double>(n) * u * a.diagonal().maxCoeff();

    Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
      double d = a(j, j);
      for (Eigen::Index t = 0; t < j; ++t) d -= l(j, t) * l(j, t);
      if (!(d > threshold)) {
        std::ostringstream msg;
        msg << "kernel matrix is not numerically positive definite: pivot " << j << " is " << d
            << " (threshold " << threshold << ")";
        throw NotPositiveDefiniteError(msg.str(), static_cast<std::size_t>(j));
      }
      l(j, j) = std::sqrt(d);
      for (Eigen::Index i = j + 1; i < n; ++i) {
        double s = a(i, j);
        for (Eigen::Index t = 0; t < j; ++t) s -= l(i, t) * l(j, t);
        l(i, j) = s / l(j, j);
      }
    }
    state_->chol = std::move(l);
  });
  return state_->chol;
}

const Eigen::VectorXd& GramMatrix::eigenvalues() const {
  std::call_once(state_->eig_once, [&] {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(state_->entries, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw NumericalError("symmetric eigendecomposition did not converge");
    state_->eigenvalues = solver.eigenvalues();
  });
  return state_->eigenvalues;
}

RieszBounds GramMatrix::riesz_constants() const {
  const Eigen::VectorXd& w = eigenvalues();
  const double lo = w[0];
  const double hi = w[w.size() - 1];
  if (!(lo > 0.0)) {
    std::ostringstream msg;
    msg << "kernel matrix is numerically singular: smallest eigenvalue " << lo;
    throw NotPositiveDefiniteError(msg.str());
  }
  return RieszBounds{lo, hi, hi / lo};
}

double GramMatrix::native_norm_sq(const Eigen::VectorXd& c) const {
  if (c.size() != state_->entries.rows()) throw DimensionError("coefficient length does not match matrix size");
  return c.dot(state_->entries * c);
}

double GramMatrix::native_inner(const Eigen::VectorXd& c_f, const Eigen::VectorXd& c_g) const {
  if (c_f.size() != state_->entries.rows() || c_g.size() != state_->entries.rows())
    throw DimensionError("coefficient length does not match matrix size");
  return c_f.dot(state_->entries * c_g);
}

Eigen::VectorXd GramMatrix::solve(const Eigen::VectorXd& b) const {
  if (b.size() != state_->entries.rows()) throw DimensionError("right-hand side length does not match matrix size");
  const Eigen::MatrixXd& l = cholesky();
  Eigen::VectorXd y = l.triangularView<Eigen::Lower>().solve(b);
  return l.transpose().triangularView<Eigen::Upper>().solve(y);
}

Eigen::MatrixXd GramMatrix::solve(const Eigen::MatrixXd& b) const {
  if (b.rows() != state_->entries.rows()) throw DimensionError("right-hand side rows do not match matrix size");
  const Eigen::MatrixXd& l = cholesky();
  Eigen::MatrixXd y = l.triangularView<Eigen::Lower>().solve(b);
  return l.transpose().triangularView<Eigen::Upper>().solve(y);
}

}  // namespace rkhs
