#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "sampling.hpp"

namespace rkhs {

/// A countable sequence of pairwise-distinct sampling points, consumed
/// through nested finite prefixes. The emitted prefix is cached and grows
/// monotonically (compute-once, mutex-guarded), so prefix(n) rows are
/// bit-identical across calls and nested for increasing n.
///
/// Generators:
///  - explicit list,
///  - lattice: the integer grid in d dimensions scaled by spacing h > 0,
///    enumerated by increasing Euclidean norm with lexicographic
///    tie-breaking (deterministic prefixes),
///  - random stream: rejection-sampled uniform points in a box with a
///    minimum pairwise separation.
class PointSequence {
 public:
  static PointSequence explicit_list(PointSet points);
  static PointSequence lattice(int dim, double spacing);
  static PointSequence random_stream(int dim, double min_separation, double low, double high,
                                     std::uint64_t seed = 0xC0FFEE);

  /// JSON schema:
  ///   {"type":"lattice","dim":d,"spacing":h}
  ///   {"type":"random","dim":d,"min_separation":s,"low":a,"high":b,"seed":n}
  ///   {"type":"explicit","points":[[...],...]}
  /// Unknown keys are rejected; "seed" is optional.
  static PointSequence from_json(const nlohmann::json& j);

  int dim() const;
  PointSet prefix(std::size_t n) const;

 private:
  struct State;
  explicit PointSequence(std::shared_ptr<State> state) : state_(std::move(state)) {}
  std::shared_ptr<State> state_;
};

/// The index-th sampling function of the size-n section: coefficients
/// A_n^{-1} e_index over prefix(n).
DualBasisVector truncated_dual(const KernelSpec& k, const PointSequence& seq, std::size_t n, std::size_t index);

/// Interpolant on prefix(n) from the first n samples. Identical to fit() on
/// the prefix; equals sum_{k<n} f(x_k) L_k^(n) by linearity.
SamplingModel truncated_reconstruct(const KernelSpec& k, const PointSequence& seq, const Eigen::VectorXd& samples,
                                    std::size_t n);

enum class Verdict { Stable, Degrading, Inconclusive };

const char* verdict_name(Verdict v);

/// Per-section conditioning trace over nested prefixes. dual_drift[i] is the
/// native-norm distance |c_i - c_{i-1}|_{A_i} between the first sampling
/// function's coefficients at consecutive sizes (previous embedded by zero
/// padding); NaN for the first section.
struct TruncationReport {
  std::vector<std::size_t> sizes;
  std::vector<double> lambda_mins;
  std::vector<double> condition_numbers;
  std::vector<double> biortho_residuals;
  std::vector<double> dual_drift;
  Verdict verdict = Verdict::Inconclusive;
  /// Set when a section failed the numerical PD test; rows stop before it.
  std::optional<std::size_t> failed_size;

  nlohmann::json to_json() const;
  /// Plot-ready CSV: n,lambda_min,condition,biortho_residual,dual_drift.
  std::string to_csv() const;
};

struct DiagnosticPolicy {
  /// "stable" requires lambda_min of the largest section to clear
  /// stable_lambda_factor times the PD pivot threshold.
  double stable_lambda_factor = 1e3;
};

/// Runs nested sections of increasing size and records the conditioning
/// trace. The verdict is a numerical trend indicator, never a certificate:
/// stable requires at least three sections, lambda_min clear of the PD
/// threshold and strictly decreasing dual drift over the last three
/// sections; a PD failure (or lambda_min heading into the threshold) is
/// degrading; anything else is inconclusive.
TruncationReport determining_diagnostic(const KernelSpec& k, const PointSequence& seq,
                                        std::span<const std::size_t> sizes, const DiagnosticPolicy& policy = {});

}  // namespace rkhs
