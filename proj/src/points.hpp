#pragma once

#include <Eigen/Core>
#include <initializer_list>
#include <span>

#include "errors.hpp"

namespace rkhs {

/// A single sampling point in R^d. Coordinates are validated to be finite
/// and non-empty at construction; instances are immutable afterwards.
class Point {
 public:
  explicit Point(Eigen::VectorXd coords);
  Point(std::initializer_list<double> coords);

  int dim() const { return static_cast<int>(coords_.size()); }
  double operator[](int i) const { return coords_[i]; }
  const Eigen::VectorXd& coords() const { return coords_; }
  std::span<const double> view() const { return {coords_.data(), static_cast<std::size_t>(coords_.size())}; }

 private:
  Eigen::VectorXd coords_;
};

/// An ordered set of pairwise-distinct points, all of the same dimension.
/// Distinctness is checked with exact coordinate comparison; near-duplicates
/// are legal and surface later through conditioning diagnostics.
///
/// Rows are stored contiguously (row-major), so row(i) is a cheap view.
class PointSet {
 public:
  using Storage = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  /// One point per row; n x d. Throws InvalidArgumentError for empty or
  /// non-finite input and DuplicatePointError for coordinate-equal rows.
  explicit PointSet(Storage rows);
  explicit PointSet(const std::vector<Point>& pts);

  std::size_t size() const { return static_cast<std::size_t>(rows_.rows()); }
  int dim() const { return static_cast<int>(rows_.cols()); }
  std::span<const double> row(std::size_t i) const {
    return {rows_.data() + i * static_cast<std::size_t>(rows_.cols()), static_cast<std::size_t>(rows_.cols())};
  }
  Point point(std::size_t i) const { return Point(rows_.row(static_cast<Eigen::Index>(i)).transpose()); }
  const Storage& data() const { return rows_; }

 private:
  Storage rows_;
};

namespace detail {
/// Validates finiteness/shape and locates an exact duplicate pair if any;
/// shared between PointSet and the CSV reader (which reports file rows).
void check_point_matrix(const PointSet::Storage& rows, std::size_t* dup_first, std::size_t* dup_second);
}  // namespace detail

}  // namespace rkhs
