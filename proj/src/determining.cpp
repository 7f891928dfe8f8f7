#include "determining.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <sstream>

#include <nlohmann/json.hpp>

#include "io.hpp"
#include "rng.hpp"

namespace rkhs {

namespace {

constexpr std::size_t kEigensolverBudget = 2048;

// Integer lattice points of Z^d with sup-norm <= bound, ordered by
// (squared Euclidean norm, lexicographic). Any point outside the box has
// Euclidean norm > bound, so the first m entries are final whenever the
// m-th has norm <= bound.
std::vector<std::vector<long>> lattice_shell(int dim, long bound) {
  std::vector<std::vector<long>> out;
  std::vector<long> cur(static_cast<std::size_t>(dim), -bound);
  const double bound_sq = static_cast<double>(bound) * static_cast<double>(bound);
  while (true) {
    double norm_sq = 0.0;
    for (long v : cur) norm_sq += static_cast<double>(v) * static_cast<double>(v);
    if (norm_sq <= bound_sq) out.push_back(cur);
    int i = dim - 1;
    while (i >= 0 && cur[static_cast<std::size_t>(i)] == bound) {
      cur[static_cast<std::size_t>(i)] = -bound;
      --i;
    }
    if (i < 0) break;
    ++cur[static_cast<std::size_t>(i)];
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    double na = 0.0, nb = 0.0;
    for (long v : a) na += static_cast<double>(v) * static_cast<double>(v);
    for (long v : b) nb += static_cast<double>(v) * static_cast<double>(v);
    if (na != nb) return na < nb;
    return a < b;
  });
  return out;
}

}  // namespace

struct PointSequence::State {
  int dim = 0;

  // generator selection; neither flag set means an explicit list
  double lattice_spacing = 0.0;
  bool is_lattice = false;
  bool is_random = false;
  double min_separation = 0.0;
  double low = 0.0, high = 0.0;
  std::uint64_t seed = 0;

  mutable std::mutex mutex;
  mutable std::vector<double> cache;  // row-major, cache.size() == count * dim
  mutable std::size_t count = 0;
  mutable std::unique_ptr<UnitRng> rng;  // random stream position == cache

  void grow_to(std::size_t n) const {
    if (count >= n) return;
    if (is_lattice) {
      // The ball of radius `bound` is contained in the enumerated box, so
      // once it holds n points the sorted list is the true global prefix.
      long bound = 1;
      while (true) {
        auto pts = lattice_shell(dim, bound);
        if (pts.size() >= n) {
          cache.clear();
          cache.reserve(n * static_cast<std::size_t>(dim));
          for (std::size_t i = 0; i < n; ++i)
            for (long v : pts[i]) cache.push_back(lattice_spacing * static_cast<double>(v));
          count = n;
          return;
        }
        bound *= 2;
      }
    }
    if (is_random) {
      if (!rng) rng = std::make_unique<UnitRng>(seed);
      const double sep_sq = min_separation * min_separation;
      std::size_t attempts = 0;
      const std::size_t max_attempts = 10000 * n;
      std::vector<double> cand(static_cast<std::size_t>(dim));
      while (count < n) {
        if (++attempts > max_attempts) {
          std::ostringstream msg;
          msg << "random stream could not place " << n << " points with separation " << min_separation
              << " in [" << low << ", " << high << "]^" << dim;
          throw NumericalError(msg.str());
        }
        for (int c = 0; c < dim; ++c) cand[static_cast<std::size_t>(c)] = rng->uniform(low, high);
        bool ok = true;
        for (std::size_t p = 0; p < count && ok; ++p) {
          double dist_sq = 0.0;
          for (int c = 0; c < dim; ++c) {
            const double d = cache[p * static_cast<std::size_t>(dim) + static_cast<std::size_t>(c)] -
                             cand[static_cast<std::size_t>(c)];
            dist_sq += d * d;
          }
          ok = dist_sq >= sep_sq;
        }
        if (ok) {
          cache.insert(cache.end(), cand.begin(), cand.end());
          ++count;
        }
      }
      return;
    }
    throw IndexError("prefix size exceeds the explicit point list");
  }
};

PointSequence PointSequence::explicit_list(PointSet points) {
  auto state = std::make_shared<State>();
  state->dim = points.dim();
  state->count = points.size();
  state->cache.assign(points.data().data(),
                      points.data().data() + points.size() * static_cast<std::size_t>(points.dim()));
  return PointSequence(std::move(state));
}

PointSequence PointSequence::lattice(int dim, double spacing) {
  if (dim < 1) throw InvalidArgumentError("lattice dimension must be >= 1");
  if (!(spacing > 0.0) || !std::isfinite(spacing)) throw InvalidArgumentError("lattice spacing must be positive");
  auto state = std::make_shared<State>();
  state->dim = dim;
  state->is_lattice = true;
  state->lattice_spacing = spacing;
  return PointSequence(std::move(state));
}

PointSequence PointSequence::random_stream(int dim, double min_separation, double low, double high,
                                           std::uint64_t seed) {
  if (dim < 1) throw InvalidArgumentError("random stream dimension must be >= 1");
  if (!(min_separation > 0.0)) throw InvalidArgumentError("minimum separation must be positive");
  if (!(low < high)) throw InvalidArgumentError("random stream needs low < high");
  auto state = std::make_shared<State>();
  state->dim = dim;
  state->is_random = true;
  state->min_separation = min_separation;
  state->low = low;
  state->high = high;
  state->seed = seed;
  return PointSequence(std::move(state));
}

int PointSequence::dim() const { return state_->dim; }

PointSet PointSequence::prefix(std::size_t n) const {
  if (n < 1) throw IndexError("prefix size must be >= 1");
  std::lock_guard<std::mutex> lock(state_->mutex);
  state_->grow_to(n);
  PointSet::Storage rows(static_cast<Eigen::Index>(n), state_->dim);
  std::copy(state_->cache.begin(), state_->cache.begin() + static_cast<std::ptrdiff_t>(n * static_cast<std::size_t>(state_->dim)),
            rows.data());
  return PointSet(std::move(rows));
}

namespace {

void reject_unknown_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* key : allowed) known = known || (it.key() == key);
    if (!known) throw ParseError("unknown generator config key: " + it.key());
  }
}

}  // namespace

PointSequence PointSequence::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("generator spec must be a JSON object");
  if (!j.contains("type") || !j.at("type").is_string()) throw ParseError("generator spec needs a string \"type\"");
  const std::string type = j.at("type").get<std::string>();
  try {
    if (type == "lattice") {
      reject_unknown_keys(j, {"type", "dim", "spacing"});
      return lattice(j.at("dim").get<int>(), j.at("spacing").get<double>());
    }
    if (type == "random") {
      reject_unknown_keys(j, {"type", "dim", "min_separation", "low", "high", "seed"});
      const auto seed = j.contains("seed") ? j.at("seed").get<std::uint64_t>() : UnitRng::kDefaultSeed;
      return random_stream(j.at("dim").get<int>(), j.at("min_separation").get<double>(), j.at("low").get<double>(),
                           j.at("high").get<double>(), seed);
    }
    if (type == "explicit") {
      reject_unknown_keys(j, {"type", "points"});
      const auto& pts = j.at("points");
      if (!pts.is_array() || pts.empty()) throw ParseError("explicit generator needs a nonempty \"points\" array");
      const auto dim = static_cast<Eigen::Index>(pts.front().size());
      PointSet::Storage rows(static_cast<Eigen::Index>(pts.size()), dim);
      for (std::size_t i = 0; i < pts.size(); ++i) {
        if (static_cast<Eigen::Index>(pts[i].size()) != dim) throw ParseError("explicit generator rows differ in length");
        for (Eigen::Index c = 0; c < dim; ++c) rows(static_cast<Eigen::Index>(i), c) = pts[i][static_cast<std::size_t>(c)].get<double>();
      }
      return explicit_list(PointSet(std::move(rows)));
    }
  } catch (const Error&) {
    throw;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed generator spec: ") + e.what());
  }
  throw ParseError("unknown generator type: " + type);
}

DualBasisVector truncated_dual(const KernelSpec& k, const PointSequence& seq, std::size_t n, std::size_t index) {
  if (index >= n) throw IndexError("sampling-function index out of range for the section size");
  return lagrange_basis(GramMatrix(k, seq.prefix(n)), index);
}

SamplingModel truncated_reconstruct(const KernelSpec& k, const PointSequence& seq, const Eigen::VectorXd& samples,
                                    std::size_t n) {
  if (samples.size() < static_cast<Eigen::Index>(n)) throw DimensionError("fewer samples than the section size");
  return fit(k, seq.prefix(n), samples.head(static_cast<Eigen::Index>(n)));
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Stable: return "stable";
    case Verdict::Degrading: return "degrading";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

nlohmann::json TruncationReport::to_json() const {
  nlohmann::json j;
  j["sizes"] = sizes;
  j["lambda_mins"] = lambda_mins;
  j["condition_numbers"] = condition_numbers;
  j["biortho_residuals"] = biortho_residuals;
  nlohmann::json drift = nlohmann::json::array();
  for (double d : dual_drift) {
    if (std::isnan(d)) drift.push_back(nullptr);
    else drift.push_back(d);
  }
  j["dual_drift"] = drift;
  j["verdict"] = verdict_name(verdict);
  if (failed_size) j["failed_size"] = *failed_size;
  return j;
}

std::string TruncationReport::to_csv() const {
  std::string out = "n,lambda_min,condition,biortho_residual,dual_drift\n";
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    out += std::to_string(sizes[i]);
    out += ',';
    out += io::format_double(lambda_mins[i]);
    out += ',';
    out += io::format_double(condition_numbers[i]);
    out += ',';
    out += io::format_double(biortho_residuals[i]);
    out += ',';
    out += io::format_double(dual_drift[i]);
    out += '\n';
  }
  return out;
}

TruncationReport determining_diagnostic(const KernelSpec& k, const PointSequence& seq,
                                        std::span<const std::size_t> sizes, const DiagnosticPolicy& policy) {
  if (sizes.empty()) throw InvalidArgumentError("diagnostic needs at least one section size");
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] < 1 || sizes[i] > kEigensolverBudget)
      throw InvalidArgumentError("section sizes must lie in [1, 2048]");
    if (i > 0 && sizes[i] <= sizes[i - 1]) throw InvalidArgumentError("section sizes must be strictly increasing");
  }

  TruncationReport report;
  Eigen::VectorXd prev_dual;
  double last_max_diag = 1.0;

  for (const std::size_t n : sizes) {
    try {
      GramMatrix gram(k, seq.prefix(n));
      const RieszBounds bounds = gram.riesz_constants();
      const double biortho = biorthogonality_residual(gram);

      Eigen::VectorXd e0 = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
      e0[0] = 1.0;
      Eigen::VectorXd dual = gram.solve(e0);

      double drift = std::numeric_limits<double>::quiet_NaN();
      if (prev_dual.size() > 0) {
        Eigen::VectorXd delta = dual;
        delta.head(prev_dual.size()) -= prev_dual;
        drift = std::sqrt(std::max(0.0, gram.native_norm_sq(delta)));
      }

      report.sizes.push_back(n);
      report.lambda_mins.push_back(bounds.lambda_min);
      report.condition_numbers.push_back(bounds.condition);
      report.biortho_residuals.push_back(biortho);
      report.dual_drift.push_back(drift);

      prev_dual = std::move(dual);
      last_max_diag = gram.entries().diagonal().maxCoeff();
    } catch (const NotPositiveDefiniteError&) {
      report.failed_size = n;
      report.verdict = Verdict::Degrading;
      return report;
    }
  }

  const double u = std::numeric_limits<double>::epsilon() / 2.0;
  const double pd_threshold = static_cast<double>(sizes.back()) * u * last_max_diag;
  const double lambda_last = report.lambda_mins.back();

  if (lambda_last < policy.stable_lambda_factor * pd_threshold) {
    report.verdict = Verdict::Degrading;
  } else if (sizes.size() >= 3) {
    const std::size_t last = sizes.size() - 1;
    const bool drift_decreasing = report.dual_drift[last] < report.dual_drift[last - 1];
    report.verdict = drift_decreasing ? Verdict::Stable : Verdict::Inconclusive;
  } else {
    report.verdict = Verdict::Inconclusive;
  }
  return report;
}

}  // namespace rkhs
