#pragma once

#include <Eigen/Core>
#include <memory>
#include <span>

#include <nlohmann/json_fwd.hpp>

#include "errors.hpp"
#include "points.hpp"

namespace rkhs {

enum class KernelKind { Gaussian, InverseMultiquadric, TensorProduct };

/// An evaluable positive definite kernel on R^d.
///
/// Built-ins: Gaussian exp(-eps^2 |x-y|^2) and inverse multiquadric
/// (1 + eps^2 |x-y|^2)^(-1/2), both with shape eps > 0 (eps = 1 by default),
/// plus tensor products K1(x1,y1) * K2(x2,y2) acting on concatenated
/// coordinates. Tensor products nest, so d-fold products are built pairwise.
///
/// Specs are immutable and cheap to copy (shared internal node); concurrent
/// read-only evaluation is safe.
class KernelSpec {
 public:
  static KernelSpec gaussian(int dim, double shape = 1.0);
  static KernelSpec inverse_multiquadric(int dim, double shape = 1.0);
  static KernelSpec tensor_product(KernelSpec left, KernelSpec right);

  KernelKind kind() const;
  int dim() const;
  /// Shape parameter; only meaningful for Gaussian / inverse multiquadric.
  double shape() const;
  KernelSpec left() const;   // tensor products only
  KernelSpec right() const;  // tensor products only

  /// K(x, y). Both arguments must have length dim().
  double operator()(std::span<const double> x, std::span<const double> y) const;
  double operator()(const Point& x, const Point& y) const { return (*this)(x.view(), y.view()); }

  /// JSON schema: {"type":"gaussian"|"imq"|"tensor", "shape":number,
  /// "dim":int, "left":{...}, "right":{...}}. Unknown keys are rejected.
  static KernelSpec from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  struct Node;  // opaque; defined in kernels.cpp

 private:
  explicit KernelSpec(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// K(x, y) evaluated after checking both dimensions (spec-facing helper;
/// operator() assumes the spans are already the right length).
double eval_kernel(const KernelSpec& k, const Point& x, const Point& y);

/// The kernel section vector R_X(x) = (K(x_1, x), ..., K(x_n, x)).
Eigen::VectorXd kernel_section(const KernelSpec& k, std::span<const double> x, const PointSet& X);
Eigen::VectorXd kernel_section(const KernelSpec& k, const Point& x, const PointSet& X);

}  // namespace rkhs
