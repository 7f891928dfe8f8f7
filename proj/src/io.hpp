#pragma once

#include <optional>
#include <string>
#include <vector>

#include "linalg.hpp"
#include "sampling.hpp"
#include "tensor.hpp"

namespace rkhs::io {

/// Shortest round-trip decimal representation; the canonical float format
/// for every file this library emits.
std::string format_double(double v);

/// Points CSV: header "x1,...,xd" with an optional trailing "f" column for
/// sample values, one point per row. Parsing enforces a constant column
/// count, finite values, and no duplicate points (reported with 1-based file
/// row numbers).
struct PointFile {
  PointSet points;
  std::optional<Eigen::VectorXd> samples;
};

PointFile parse_point_file(const std::string& text, const std::string& origin);
PointFile read_point_file(const std::string& path);

std::string point_file_text(const PointSet& points, const Eigen::VectorXd* values);

/// Full symmetric Gram storage, row-major, no header.
std::string gram_csv(const Eigen::MatrixXd& entries);
Eigen::MatrixXd parse_gram_csv(const std::string& text, const std::string& origin);

/// Tensor sample matrices: header row "n,m", then n rows of m values.
std::string matrix_csv(const Eigen::MatrixXd& values);
Eigen::MatrixXd parse_matrix_csv(const std::string& text, const std::string& origin);
Eigen::MatrixXd read_matrix_csv(const std::string& path);

std::string riesz_json(const RieszBounds& bounds);
std::string stability_json(const StabilityCheck& dual, const StabilityCheck& primal);
std::string bench_csv(const std::vector<BenchRow>& rows);

/// Writes via a temporary file in the same directory plus an atomic rename;
/// failures leave no partial output behind.
void write_text_atomic(const std::string& path, const std::string& text);

std::string read_text(const std::string& path);

}  // namespace rkhs::io
