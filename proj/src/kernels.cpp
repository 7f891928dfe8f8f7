#include "kernels.hpp"

#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

namespace rkhs {

struct KernelSpec::Node {
  KernelKind kind;
  int dim;
  double shape = 1.0;                    // Gaussian / IMQ
  std::shared_ptr<const Node> left;      // tensor
  std::shared_ptr<const Node> right;     // tensor
};

namespace {

// Squared Euclidean distance, accumulated in the widest native precision.
// No reassociation: Gram symmetry and PD checks are tolerance-sensitive.
long double squared_distance(std::span<const double> x, std::span<const double> y) {
  long double acc = 0.0L;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const long double d = static_cast<long double>(x[i]) - static_cast<long double>(y[i]);
    acc += d * d;
  }
  return acc;
}

double eval_node(const KernelSpec::Node& n, std::span<const double> x, std::span<const double> y) {
  switch (n.kind) {
    case KernelKind::Gaussian: {
      const long double e = static_cast<long double>(n.shape);
      return static_cast<double>(std::exp(-e * e * squared_distance(x, y)));
    }
    case KernelKind::InverseMultiquadric: {
      const long double e = static_cast<long double>(n.shape);
      return static_cast<double>(1.0L / std::sqrt(1.0L + e * e * squared_distance(x, y)));
    }
    case KernelKind::TensorProduct: {
      const auto d1 = static_cast<std::size_t>(n.left->dim);
      return eval_node(*n.left, x.first(d1), y.first(d1)) * eval_node(*n.right, x.subspan(d1), y.subspan(d1));
    }
  }
  throw NumericalError("unreachable kernel kind");
}

KernelSpec::Node make_radial(KernelKind kind, int dim, double shape) {
  if (dim < 1) throw InvalidArgumentError("kernel dimension must be >= 1");
  if (!(shape > 0.0) || !std::isfinite(shape)) throw InvalidArgumentError("kernel shape must be positive and finite");
  KernelSpec::Node n;
  n.kind = kind;
  n.dim = dim;
  n.shape = shape;
  return n;
}

}  // namespace

KernelSpec KernelSpec::gaussian(int dim, double shape) {
  return KernelSpec(std::make_shared<const Node>(make_radial(KernelKind::Gaussian, dim, shape)));
}

KernelSpec KernelSpec::inverse_multiquadric(int dim, double shape) {
  return KernelSpec(std::make_shared<const Node>(make_radial(KernelKind::InverseMultiquadric, dim, shape)));
}

KernelSpec KernelSpec::tensor_product(KernelSpec left, KernelSpec right) {
  Node n;
  n.kind = KernelKind::TensorProduct;
  n.dim = left.dim() + right.dim();
  n.left = std::move(left.node_);
  n.right = std::move(right.node_);
  return KernelSpec(std::make_shared<const Node>(std::move(n)));
}

KernelKind KernelSpec::kind() const { return node_->kind; }
int KernelSpec::dim() const { return node_->dim; }

double KernelSpec::shape() const {
  if (node_->kind == KernelKind::TensorProduct)
    throw InvalidArgumentError("tensor product kernels have no shape parameter");
  return node_->shape;
}

KernelSpec KernelSpec::left() const {
  if (node_->kind != KernelKind::TensorProduct) throw InvalidArgumentError("kernel is not a tensor product");
  return KernelSpec(node_->left);
}

KernelSpec KernelSpec::right() const {
  if (node_->kind != KernelKind::TensorProduct) throw InvalidArgumentError("kernel is not a tensor product");
  return KernelSpec(node_->right);
}

double KernelSpec::operator()(std::span<const double> x, std::span<const double> y) const {
  if (x.size() != static_cast<std::size_t>(node_->dim) || y.size() != static_cast<std::size_t>(node_->dim)) {
    std::ostringstream msg;
    msg << "kernel of dimension " << node_->dim << " evaluated at points of dimension " << x.size() << " and "
        << y.size();
    throw DimensionError(msg.str());
  }
  return eval_node(*node_, x, y);
}

double eval_kernel(const KernelSpec& k, const Point& x, const Point& y) { return k(x.view(), y.view()); }

Eigen::VectorXd kernel_section(const KernelSpec& k, std::span<const double> x, const PointSet& X) {
  if (X.dim() != k.dim()) throw DimensionError("point set dimension does not match kernel dimension");
  if (x.size() != static_cast<std::size_t>(k.dim()))
    throw DimensionError("evaluation point dimension does not match kernel dimension");
  Eigen::VectorXd out(static_cast<Eigen::Index>(X.size()));
  for (std::size_t j = 0; j < X.size(); ++j) out[static_cast<Eigen::Index>(j)] = k(X.row(j), x);
  return out;
}

Eigen::VectorXd kernel_section(const KernelSpec& k, const Point& x, const PointSet& X) {
  return kernel_section(k, x.view(), X);
}

namespace {

const char* kind_name(KernelKind k) {
  switch (k) {
    case KernelKind::Gaussian: return "gaussian";
    case KernelKind::InverseMultiquadric: return "imq";
    case KernelKind::TensorProduct: return "tensor";
  }
  return "?";
}

void reject_unknown_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* key : allowed) known = known || (it.key() == key);
    if (!known) throw ParseError("unknown kernel config key: " + it.key());
  }
}

}  // namespace

KernelSpec KernelSpec::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("kernel spec must be a JSON object");
  if (!j.contains("type") || !j.at("type").is_string()) throw ParseError("kernel spec needs a string \"type\"");
  const std::string type = j.at("type").get<std::string>();

  try {
    if (type == "gaussian" || type == "imq") {
      reject_unknown_keys(j, {"type", "shape", "dim"});
      if (!j.contains("dim") || !j.at("dim").is_number_integer()) throw ParseError("kernel spec needs an integer \"dim\"");
      const int dim = j.at("dim").get<int>();
      const double shape = j.contains("shape") ? j.at("shape").get<double>() : 1.0;
      return type == "gaussian" ? gaussian(dim, shape) : inverse_multiquadric(dim, shape);
    }
    if (type == "tensor") {
      reject_unknown_keys(j, {"type", "dim", "left", "right"});
      if (!j.contains("left") || !j.contains("right")) throw ParseError("tensor kernel spec needs \"left\" and \"right\"");
      KernelSpec k = tensor_product(from_json(j.at("left")), from_json(j.at("right")));
      if (j.contains("dim") && j.at("dim").get<int>() != k.dim())
        throw ParseError("tensor kernel \"dim\" does not match left.dim + right.dim");
      return k;
    }
  } catch (const Error&) {
    throw;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed kernel spec: ") + e.what());
  }
  throw ParseError("unknown kernel type: " + type);
}

nlohmann::json KernelSpec::to_json() const {
  nlohmann::json j;
  j["type"] = kind_name(kind());
  j["dim"] = dim();
  if (kind() == KernelKind::TensorProduct) {
    j["left"] = left().to_json();
    j["right"] = right().to_json();
  } else {
    j["shape"] = shape();
  }
  return j;
}

}  // namespace rkhs
