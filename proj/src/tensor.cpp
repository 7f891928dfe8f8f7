#include "tensor.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <mutex>
#include <sstream>

#include <Eigen/Cholesky>

#include "rng.hpp"

namespace rkhs {

struct TensorGrid::State {
  PointSet factor_x;
  PointSet factor_y;
  std::once_flag linearized_once;
  std::optional<PointSet> linearized;

  State(PointSet x, PointSet y) : factor_x(std::move(x)), factor_y(std::move(y)) {}
};

TensorGrid::TensorGrid(PointSet factor_x, PointSet factor_y)
    : state_(std::make_shared<State>(std::move(factor_x), std::move(factor_y))) {}

const PointSet& TensorGrid::factor_x() const { return state_->factor_x; }
const PointSet& TensorGrid::factor_y() const { return state_->factor_y; }
std::size_t TensorGrid::rows() const { return state_->factor_x.size(); }
std::size_t TensorGrid::cols() const { return state_->factor_y.size(); }

std::size_t TensorGrid::linear_index(std::size_t j, std::size_t k) const {
  if (j >= rows() || k >= cols()) throw IndexError("grid index out of range");
  return j * cols() + k;
}

const PointSet& TensorGrid::linearized() const {
  std::call_once(state_->linearized_once, [&] {
    const auto& x = state_->factor_x;
    const auto& y = state_->factor_y;
    const auto d1 = x.dim();
    const auto d2 = y.dim();
    PointSet::Storage rows(static_cast<Eigen::Index>(x.size() * y.size()), d1 + d2);
    Eigen::Index r = 0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      for (std::size_t k = 0; k < y.size(); ++k, ++r) {
        rows.row(r).head(d1) = x.data().row(static_cast<Eigen::Index>(j));
        rows.row(r).tail(d2) = y.data().row(static_cast<Eigen::Index>(k));
      }
    }
    state_->linearized.emplace(std::move(rows));
  });
  return *state_->linearized;
}

KroneckerGram::KroneckerGram(GramMatrix gram_x, GramMatrix gram_y)
    : gram_x_(std::move(gram_x)), gram_y_(std::move(gram_y)) {}

Eigen::MatrixXd KroneckerGram::solve(const Eigen::MatrixXd& f) const {
  const auto n = static_cast<Eigen::Index>(gram_x_.size());
  const auto m = static_cast<Eigen::Index>(gram_y_.size());
  if (f.rows() != n || f.cols() != m) {
    std::ostringstream msg;
    msg << "sample matrix is " << f.rows() << "x" << f.cols() << ", factors need " << n << "x" << m;
    throw DimensionError(msg.str());
  }
  // (A1 (x) A2) vec(C) = vec(F)  <=>  A1 C A2 = F (row-major vec, A2 = A2^T).
  const Eigen::MatrixXd c = gram_x_.solve(f);
  const Eigen::MatrixXd ct = c.transpose();
  return gram_y_.solve(ct).transpose();
}

RieszBounds KroneckerGram::riesz_constants() const {
  const RieszBounds bx = gram_x_.riesz_constants();
  const RieszBounds by = gram_y_.riesz_constants();
  const double lo = bx.lambda_min * by.lambda_min;
  const double hi = bx.lambda_max * by.lambda_max;
  return RieszBounds{lo, hi, hi / lo};
}

Eigen::MatrixXd kron_solve(const Eigen::MatrixXd& a1, const Eigen::MatrixXd& a2, const Eigen::MatrixXd& f) {
  if (f.rows() != a1.rows() || f.cols() != a2.rows()) throw DimensionError("sample matrix shape does not match factors");
  Eigen::LLT<Eigen::MatrixXd> l1(a1);
  if (l1.info() != Eigen::Success) throw NotPositiveDefiniteError("first Kronecker factor is not positive definite");
  Eigen::LLT<Eigen::MatrixXd> l2(a2);
  if (l2.info() != Eigen::Success) throw NotPositiveDefiniteError("second Kronecker factor is not positive definite");
  const Eigen::MatrixXd c = l1.solve(f);
  return l2.solve(c.transpose()).transpose();
}

SamplingModel tensor_fit(const KernelSpec& k1, const KernelSpec& k2, const TensorGrid& grid,
                         const Eigen::MatrixXd& samples) {
  KroneckerGram kg(GramMatrix(k1, grid.factor_x()), GramMatrix(k2, grid.factor_y()));
  const Eigen::MatrixXd c = kg.solve(samples);

  const auto total = static_cast<Eigen::Index>(grid.rows() * grid.cols());
  Eigen::VectorXd coeffs(total), values(total);
  Eigen::Index i = 0;
  for (Eigen::Index j = 0; j < c.rows(); ++j) {
    for (Eigen::Index k = 0; k < c.cols(); ++k, ++i) {
      coeffs[i] = c(j, k);
      values[i] = samples(j, k);
    }
  }
  return SamplingModel(product_kernel(k1, k2), grid.linearized(), std::move(values), std::move(coeffs), std::nullopt);
}

DualBasisVector tensor_dual(const KroneckerGram& kg, const TensorGrid& grid, std::size_t j, std::size_t k) {
  const auto n = kg.gram_x().size();
  const auto m = kg.gram_y().size();
  if (grid.rows() != n || grid.cols() != m) throw DimensionError("grid does not match the Kronecker factors");
  if (j >= n || k >= m) throw IndexError("sampling-function index out of range");

  Eigen::VectorXd ej = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  ej[static_cast<Eigen::Index>(j)] = 1.0;
  Eigen::VectorXd ek = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
  ek[static_cast<Eigen::Index>(k)] = 1.0;
  const Eigen::VectorXd cx = kg.gram_x().solve(ej);
  const Eigen::VectorXd cy = kg.gram_y().solve(ek);

  Eigen::VectorXd coeffs(static_cast<Eigen::Index>(n * m));
  Eigen::Index i = 0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < m; ++b, ++i) coeffs[i] = cx[static_cast<Eigen::Index>(a)] * cy[static_cast<Eigen::Index>(b)];

  KernelSpec product = product_kernel(kg.gram_x().kernel(), kg.gram_y().kernel());
  return DualBasisVector(grid.linear_index(j, k), std::move(coeffs), std::move(product), grid.linearized());
}

namespace {

PointSet integer_grid_1d(std::size_t n) {
  PointSet::Storage rows(static_cast<Eigen::Index>(n), 1);
  for (std::size_t i = 0; i < n; ++i) rows(static_cast<Eigen::Index>(i), 0) = static_cast<double>(i);
  return PointSet(std::move(rows));
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

}  // namespace

std::vector<BenchRow> bench_tensor_vs_dense(const std::vector<std::pair<std::size_t, std::size_t>>& sizes,
                                            int trials, std::size_t dense_budget) {
  if (trials < 1) throw InvalidArgumentError("benchmark needs at least one trial");
  using clock = std::chrono::steady_clock;
  const auto ms_since = [](clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(clock::now() - t0).count();
  };

  std::vector<BenchRow> rows;
  for (const auto& [n, m] : sizes) {
    if (n < 1 || m < 1) throw InvalidArgumentError("benchmark sizes must be >= 1");
    const KernelSpec k1 = KernelSpec::gaussian(1);
    const KernelSpec k2 = KernelSpec::gaussian(1);
    const PointSet px = integer_grid_1d(n);
    const PointSet py = integer_grid_1d(m);

    UnitRng rng(UnitRng::kDefaultSeed);
    Eigen::MatrixXd f(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
    for (Eigen::Index i = 0; i < f.rows(); ++i)
      for (Eigen::Index j = 0; j < f.cols(); ++j) f(i, j) = rng.symmetric();

    double sink = 0.0;  // keeps the solves observable
    std::vector<double> t_tensor, t_dense;
    for (int t = 0; t < trials; ++t) {
      const auto t0 = clock::now();
      KroneckerGram kg(GramMatrix(k1, px), GramMatrix(k2, py));
      Eigen::MatrixXd c = kg.solve(f);
      t_tensor.push_back(ms_since(t0));
      sink += c(0, 0);
    }

    BenchRow row{n, m, median(t_tensor), std::numeric_limits<double>::quiet_NaN(),
                 std::numeric_limits<double>::quiet_NaN(), true};

    if (n * m <= dense_budget) {
      const TensorGrid grid(px, py);
      const KernelSpec product = product_kernel(k1, k2);
      Eigen::VectorXd vec_f(static_cast<Eigen::Index>(n * m));
      Eigen::Index i = 0;
      for (Eigen::Index a = 0; a < f.rows(); ++a)
        for (Eigen::Index b = 0; b < f.cols(); ++b, ++i) vec_f[i] = f(a, b);

      for (int t = 0; t < trials; ++t) {
        const auto t0 = clock::now();
        GramMatrix dense(product, grid.linearized());
        Eigen::VectorXd c = dense.solve(vec_f);
        t_dense.push_back(ms_since(t0));
        sink += c[0];
      }
      row.t_dense_ms = median(t_dense);
      row.speedup = row.t_dense_ms / row.t_tensor_ms;
      row.dense_skipped = false;
    }
    if (!std::isfinite(sink)) throw NumericalError("benchmark solve produced non-finite values");
    rows.push_back(row);
  }
  return rows;
}

}  // namespace rkhs
