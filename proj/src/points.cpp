#include "points.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

namespace rkhs {

Point::Point(Eigen::VectorXd coords) : coords_(std::move(coords)) {
  if (coords_.size() < 1) throw InvalidArgumentError("point must have dimension >= 1");
  for (Eigen::Index i = 0; i < coords_.size(); ++i) {
    if (!std::isfinite(coords_[i])) throw InvalidArgumentError("point coordinate is not finite");
  }
}

Point::Point(std::initializer_list<double> coords)
    : Point(Eigen::Map<const Eigen::VectorXd>(coords.begin(), static_cast<Eigen::Index>(coords.size()))) {}

namespace detail {

void check_point_matrix(const PointSet::Storage& rows, std::size_t* dup_first, std::size_t* dup_second) {
  if (rows.rows() == 0) throw InvalidArgumentError("point set must be nonempty");
  if (rows.cols() < 1) throw InvalidArgumentError("point set must have dimension >= 1");
  if (!rows.allFinite()) throw InvalidArgumentError("point set contains non-finite coordinates");

  // Lexicographic sort of row indices; exact duplicates end up adjacent.
  const auto n = static_cast<std::size_t>(rows.rows());
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto row_less = [&](std::size_t a, std::size_t b) {
    for (Eigen::Index c = 0; c < rows.cols(); ++c) {
      if (rows(static_cast<Eigen::Index>(a), c) < rows(static_cast<Eigen::Index>(b), c)) return true;
      if (rows(static_cast<Eigen::Index>(a), c) > rows(static_cast<Eigen::Index>(b), c)) return false;
    }
    return false;
  };
  std::sort(order.begin(), order.end(), row_less);
  for (std::size_t i = 1; i < n; ++i) {
    const auto a = order[i - 1], b = order[i];
    if (rows.row(static_cast<Eigen::Index>(a)) == rows.row(static_cast<Eigen::Index>(b))) {
      *dup_first = std::min(a, b);
      *dup_second = std::max(a, b);
      return;
    }
  }
  *dup_first = *dup_second = static_cast<std::size_t>(-1);
}

}  // namespace detail

PointSet::PointSet(Storage rows) : rows_(std::move(rows)) {
  std::size_t a, b;
  detail::check_point_matrix(rows_, &a, &b);
  if (a != static_cast<std::size_t>(-1)) {
    std::ostringstream msg;
    msg << "duplicate points at indices " << a << " and " << b;
    throw DuplicatePointError(a, b, msg.str());
  }
}

PointSet::PointSet(const std::vector<Point>& pts)
    : PointSet([&] {
        if (pts.empty()) throw InvalidArgumentError("point set must be nonempty");
        Storage m(static_cast<Eigen::Index>(pts.size()), pts.front().dim());
        for (std::size_t i = 0; i < pts.size(); ++i) {
          if (pts[i].dim() != pts.front().dim())
            throw DimensionError("all points in a set must share one dimension");
          m.row(static_cast<Eigen::Index>(i)) = pts[i].coords().transpose();
        }
        return m;
      }()) {}

}  // namespace rkhs
