#include <cstring>
#include <new>
#include <string>

#include <nlohmann/json.hpp>

#include "determining.hpp"
#include "io.hpp"
#include "kernels.hpp"
#include "linalg.hpp"
#include "sampling.hpp"
#include "tensor.hpp"

#include "rkhs/rkhs.h"

struct rkhs_kernel {
  rkhs::KernelSpec spec;
};
struct rkhs_points {
  rkhs::PointSet set;
};
struct rkhs_gram {
  rkhs::GramMatrix gram;
};
struct rkhs_model {
  rkhs::SamplingModel model;
};
struct rkhs_dual {
  rkhs::DualBasisVector dual;
};
struct rkhs_sequence {
  rkhs::PointSequence seq;
};
struct rkhs_report {
  rkhs::TruncationReport report;
};

namespace {

thread_local std::string t_last_error;

rkhs_status map_code(rkhs::ErrorCode code) {
  switch (code) {
    case rkhs::ErrorCode::InvalidArgument: return RKHS_ERR_INVALID_ARGUMENT;
    case rkhs::ErrorCode::Dimension: return RKHS_ERR_DIMENSION;
    case rkhs::ErrorCode::DuplicatePoint: return RKHS_ERR_DUPLICATE_POINT;
    case rkhs::ErrorCode::NotPositiveDefinite: return RKHS_ERR_NOT_POSITIVE_DEFINITE;
    case rkhs::ErrorCode::Index: return RKHS_ERR_INDEX;
    case rkhs::ErrorCode::Numerical: return RKHS_ERR_NUMERICAL;
    case rkhs::ErrorCode::Parse: return RKHS_ERR_PARSE;
    case rkhs::ErrorCode::Io: return RKHS_ERR_IO;
  }
  return RKHS_ERR_NUMERICAL;
}

template <typename Fn>
rkhs_status guarded(Fn&& fn) noexcept {
  try {
    fn();
    t_last_error.clear();
    return RKHS_OK;
  } catch (const rkhs::Error& e) {
    t_last_error = e.what();
    return map_code(e.code());
  } catch (const nlohmann::json::exception& e) {
    t_last_error = e.what();
    return RKHS_ERR_PARSE;
  } catch (const std::bad_alloc&) {
    t_last_error = "out of memory";
    return RKHS_ERR_NUMERICAL;
  } catch (const std::exception& e) {
    t_last_error = e.what();
    return RKHS_ERR_NUMERICAL;
  }
}

void require(bool cond, const char* what) {
  if (!cond) throw rkhs::InvalidArgumentError(what);
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

rkhs::PointSet make_points(const double* coords, size_t count, int dim) {
  require(coords != nullptr, "coords must not be null");
  require(count > 0 && dim > 0, "point count and dimension must be positive");
  rkhs::PointSet::Storage rows(static_cast<Eigen::Index>(count), dim);
  std::memcpy(rows.data(), coords, count * static_cast<size_t>(dim) * sizeof(double));
  return rkhs::PointSet(std::move(rows));
}

Eigen::VectorXd make_vector(const double* data, size_t len, const char* what) {
  require(data != nullptr, what);
  return Eigen::Map<const Eigen::VectorXd>(data, static_cast<Eigen::Index>(len));
}

}  // namespace

extern "C" {

const char* rkhs_last_error(void) { return t_last_error.c_str(); }

const char* rkhs_status_name(rkhs_status status) {
  switch (status) {
    case RKHS_OK: return "ok";
    case RKHS_ERR_INVALID_ARGUMENT: return "invalid argument";
    case RKHS_ERR_DIMENSION: return "dimension mismatch";
    case RKHS_ERR_DUPLICATE_POINT: return "duplicate point";
    case RKHS_ERR_NOT_POSITIVE_DEFINITE: return "not positive definite";
    case RKHS_ERR_INDEX: return "index out of range";
    case RKHS_ERR_NUMERICAL: return "numerical error";
    case RKHS_ERR_PARSE: return "parse error";
    case RKHS_ERR_IO: return "io error";
  }
  return "unknown";
}

void rkhs_buffer_free(void* buffer) { delete[] static_cast<char*>(buffer); }

/* ---- kernels ---------------------------------------------------------- */

rkhs_status rkhs_kernel_gaussian(int dim, double shape, rkhs_kernel** out) {
  return guarded([&] {
    require(out != nullptr, "out must not be null");
    *out = new rkhs_kernel{rkhs::KernelSpec::gaussian(dim, shape)};
  });
}

rkhs_status rkhs_kernel_imq(int dim, double shape, rkhs_kernel** out) {
  return guarded([&] {
    require(out != nullptr, "out must not be null");
    *out = new rkhs_kernel{rkhs::KernelSpec::inverse_multiquadric(dim, shape)};
  });
}

rkhs_status rkhs_kernel_tensor(const rkhs_kernel* left, const rkhs_kernel* right, rkhs_kernel** out) {
  return guarded([&] {
    require(left != nullptr && right != nullptr && out != nullptr, "arguments must not be null");
    *out = new rkhs_kernel{rkhs::KernelSpec::tensor_product(left->spec, right->spec)};
  });
}

rkhs_status rkhs_kernel_from_json(const char* json_text, rkhs_kernel** out) {
  return guarded([&] {
    require(json_text != nullptr && out != nullptr, "arguments must not be null");
    nlohmann::json j = nlohmann::json::parse(json_text, nullptr, false);
    if (j.is_discarded()) throw rkhs::ParseError("kernel spec is not valid JSON");
    *out = new rkhs_kernel{rkhs::KernelSpec::from_json(j)};
  });
}

rkhs_status rkhs_kernel_read_json(const char* path, rkhs_kernel** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "arguments must not be null");
    nlohmann::json j = nlohmann::json::parse(rkhs::io::read_text(path), nullptr, false);
    if (j.is_discarded()) throw rkhs::ParseError(std::string(path) + ": not valid JSON");
    *out = new rkhs_kernel{rkhs::KernelSpec::from_json(j)};
  });
}

rkhs_status rkhs_kernel_to_json(const rkhs_kernel* kernel, char** out_json) {
  return guarded([&] {
    require(kernel != nullptr && out_json != nullptr, "arguments must not be null");
    *out_json = dup_string(kernel->spec.to_json().dump());
  });
}

rkhs_status rkhs_kernel_split(const rkhs_kernel* kernel, rkhs_kernel** out_left, rkhs_kernel** out_right) {
  return guarded([&] {
    require(kernel != nullptr && out_left != nullptr && out_right != nullptr, "arguments must not be null");
    rkhs::KernelSpec left = kernel->spec.left();
    rkhs::KernelSpec right = kernel->spec.right();
    *out_left = new rkhs_kernel{std::move(left)};
    *out_right = new rkhs_kernel{std::move(right)};
  });
}

int rkhs_kernel_dim(const rkhs_kernel* kernel) { return kernel ? kernel->spec.dim() : 0; }

rkhs_status rkhs_kernel_eval(const rkhs_kernel* kernel, const double* x, const double* y, int dim, double* out) {
  return guarded([&] {
    require(kernel != nullptr && x != nullptr && y != nullptr && out != nullptr, "arguments must not be null");
    require(dim > 0, "dim must be positive");
    *out = kernel->spec(std::span<const double>(x, static_cast<size_t>(dim)),
                        std::span<const double>(y, static_cast<size_t>(dim)));
  });
}

rkhs_status rkhs_kernel_section(const rkhs_kernel* kernel, const double* x, int dim, const rkhs_points* points,
                                double* out) {
  return guarded([&] {
    require(kernel != nullptr && x != nullptr && points != nullptr && out != nullptr, "arguments must not be null");
    require(dim > 0, "dim must be positive");
    const Eigen::VectorXd section =
        rkhs::kernel_section(kernel->spec, std::span<const double>(x, static_cast<size_t>(dim)), points->set);
    std::memcpy(out, section.data(), static_cast<size_t>(section.size()) * sizeof(double));
  });
}

void rkhs_kernel_free(rkhs_kernel* kernel) { delete kernel; }

/* ---- point sets -------------------------------------------------------- */

rkhs_status rkhs_points_create(const double* coords_rowmajor, size_t count, int dim, rkhs_points** out) {
  return guarded([&] {
    require(out != nullptr, "out must not be null");
    *out = new rkhs_points{make_points(coords_rowmajor, count, dim)};
  });
}

rkhs_status rkhs_points_read_csv(const char* path, rkhs_points** out, double** out_samples) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "arguments must not be null");
    rkhs::io::PointFile file = rkhs::io::read_point_file(path);
    double* samples = nullptr;
    if (out_samples != nullptr && file.samples) {
      samples = reinterpret_cast<double*>(new char[static_cast<size_t>(file.samples->size()) * sizeof(double)]);
      std::memcpy(samples, file.samples->data(), static_cast<size_t>(file.samples->size()) * sizeof(double));
    }
    *out = new rkhs_points{std::move(file.points)};
    if (out_samples != nullptr) *out_samples = samples;
  });
}

rkhs_status rkhs_points_write_csv(const rkhs_points* points, const double* values_or_null, const char* path) {
  return guarded([&] {
    require(points != nullptr && path != nullptr, "arguments must not be null");
    if (values_or_null != nullptr) {
      const Eigen::VectorXd values = make_vector(values_or_null, points->set.size(), "values");
      rkhs::io::write_text_atomic(path, rkhs::io::point_file_text(points->set, &values));
    } else {
      rkhs::io::write_text_atomic(path, rkhs::io::point_file_text(points->set, nullptr));
    }
  });
}

size_t rkhs_points_count(const rkhs_points* points) { return points ? points->set.size() : 0; }
int rkhs_points_dim(const rkhs_points* points) { return points ? points->set.dim() : 0; }

rkhs_status rkhs_points_get(const rkhs_points* points, size_t index, double* out_coords) {
  return guarded([&] {
    require(points != nullptr && out_coords != nullptr, "arguments must not be null");
    if (index >= points->set.size()) throw rkhs::IndexError("point index out of range");
    const auto row = points->set.row(index);
    std::memcpy(out_coords, row.data(), row.size() * sizeof(double));
  });
}

void rkhs_points_free(rkhs_points* points) { delete points; }

/* ---- kernel matrix ----------------------------------------------------- */

rkhs_status rkhs_gram_assemble(const rkhs_kernel* kernel, const rkhs_points* points, rkhs_gram** out) {
  return guarded([&] {
    require(kernel != nullptr && points != nullptr && out != nullptr, "arguments must not be null");
    *out = new rkhs_gram{rkhs::GramMatrix(kernel->spec, points->set)};
  });
}

size_t rkhs_gram_size(const rkhs_gram* gram) { return gram ? gram->gram.size() : 0; }

rkhs_status rkhs_gram_entries(const rkhs_gram* gram, double* out) {
  return guarded([&] {
    require(gram != nullptr && out != nullptr, "arguments must not be null");
    const Eigen::MatrixXd& a = gram->gram.entries();
    for (Eigen::Index r = 0; r < a.rows(); ++r)
      for (Eigen::Index c = 0; c < a.cols(); ++c) out[r * a.cols() + c] = a(r, c);
  });
}

rkhs_status rkhs_gram_cholesky(const rkhs_gram* gram) {
  return guarded([&] {
    require(gram != nullptr, "gram must not be null");
    gram->gram.cholesky();
  });
}

rkhs_status rkhs_gram_riesz(const rkhs_gram* gram, double* lambda_min, double* lambda_max, double* condition) {
  return guarded([&] {
    require(gram != nullptr, "gram must not be null");
    const rkhs::RieszBounds b = gram->gram.riesz_constants();
    if (lambda_min) *lambda_min = b.lambda_min;
    if (lambda_max) *lambda_max = b.lambda_max;
    if (condition) *condition = b.condition;
  });
}

rkhs_status rkhs_gram_native_norm_sq(const rkhs_gram* gram, const double* coeffs, size_t len, double* out) {
  return guarded([&] {
    require(gram != nullptr && out != nullptr, "arguments must not be null");
    *out = gram->gram.native_norm_sq(make_vector(coeffs, len, "coeffs must not be null"));
  });
}

rkhs_status rkhs_gram_native_inner(const rkhs_gram* gram, const double* coeffs_f, const double* coeffs_g, size_t len,
                                   double* out) {
  return guarded([&] {
    require(gram != nullptr && out != nullptr, "arguments must not be null");
    *out = gram->gram.native_inner(make_vector(coeffs_f, len, "coeffs_f must not be null"),
                                   make_vector(coeffs_g, len, "coeffs_g must not be null"));
  });
}

rkhs_status rkhs_gram_solve(const rkhs_gram* gram, const double* rhs, size_t len, double* out) {
  return guarded([&] {
    require(gram != nullptr && out != nullptr, "arguments must not be null");
    const Eigen::VectorXd x = gram->gram.solve(make_vector(rhs, len, "rhs must not be null"));
    std::memcpy(out, x.data(), static_cast<size_t>(x.size()) * sizeof(double));
  });
}

rkhs_status rkhs_gram_biortho_residual(const rkhs_gram* gram, double* out) {
  return guarded([&] {
    require(gram != nullptr && out != nullptr, "arguments must not be null");
    *out = rkhs::biorthogonality_residual(gram->gram);
  });
}

rkhs_status rkhs_gram_write_csv(const rkhs_gram* gram, const char* path) {
  return guarded([&] {
    require(gram != nullptr && path != nullptr, "arguments must not be null");
    rkhs::io::write_text_atomic(path, rkhs::io::gram_csv(gram->gram.entries()));
  });
}

rkhs_status rkhs_gram_write_riesz_json(const rkhs_gram* gram, const char* path) {
  return guarded([&] {
    require(gram != nullptr && path != nullptr, "arguments must not be null");
    rkhs::io::write_text_atomic(path, rkhs::io::riesz_json(gram->gram.riesz_constants()));
  });
}

void rkhs_gram_free(rkhs_gram* gram) { delete gram; }

/* ---- interpolation ----------------------------------------------------- */

rkhs_status rkhs_fit(const rkhs_kernel* kernel, const rkhs_points* points, const double* samples, rkhs_model** out) {
  return guarded([&] {
    require(kernel != nullptr && points != nullptr && out != nullptr, "arguments must not be null");
    const Eigen::VectorXd f = make_vector(samples, points->set.size(), "samples must not be null");
    *out = new rkhs_model{rkhs::fit(kernel->spec, points->set, f)};
  });
}

rkhs_status rkhs_model_eval(const rkhs_model* model, const double* x, int dim, double* out) {
  return guarded([&] {
    require(model != nullptr && x != nullptr && out != nullptr, "arguments must not be null");
    require(dim > 0, "dim must be positive");
    *out = model->model(std::span<const double>(x, static_cast<size_t>(dim)));
  });
}

rkhs_status rkhs_model_eval_many(const rkhs_model* model, const rkhs_points* probes, double* out) {
  return guarded([&] {
    require(model != nullptr && probes != nullptr && out != nullptr, "arguments must not be null");
    for (size_t i = 0; i < probes->set.size(); ++i) out[i] = model->model(probes->set.row(i));
  });
}

size_t rkhs_model_size(const rkhs_model* model) { return model ? model->model.points().size() : 0; }

rkhs_status rkhs_model_coeffs(const rkhs_model* model, double* out) {
  return guarded([&] {
    require(model != nullptr && out != nullptr, "arguments must not be null");
    const Eigen::VectorXd& c = model->model.coeffs();
    std::memcpy(out, c.data(), static_cast<size_t>(c.size()) * sizeof(double));
  });
}

void rkhs_model_free(rkhs_model* model) { delete model; }

rkhs_status rkhs_lagrange_basis(const rkhs_gram* gram, size_t k, rkhs_dual** out) {
  return guarded([&] {
    require(gram != nullptr && out != nullptr, "arguments must not be null");
    *out = new rkhs_dual{rkhs::lagrange_basis(gram->gram, k)};
  });
}

rkhs_status rkhs_dual_eval(const rkhs_dual* dual, const double* x, int dim, double* out) {
  return guarded([&] {
    require(dual != nullptr && x != nullptr && out != nullptr, "arguments must not be null");
    require(dim > 0, "dim must be positive");
    *out = dual->dual(std::span<const double>(x, static_cast<size_t>(dim)));
  });
}

size_t rkhs_dual_size(const rkhs_dual* dual) { return dual ? dual->dual.points().size() : 0; }

rkhs_status rkhs_dual_coeffs(const rkhs_dual* dual, double* out) {
  return guarded([&] {
    require(dual != nullptr && out != nullptr, "arguments must not be null");
    const Eigen::VectorXd& c = dual->dual.coeffs();
    std::memcpy(out, c.data(), static_cast<size_t>(c.size()) * sizeof(double));
  });
}

void rkhs_dual_free(rkhs_dual* dual) { delete dual; }

rkhs_status rkhs_stability_dual(const rkhs_gram* gram, const double* f_x, size_t len, double slack,
                                double out_lmr[3], int* out_ok) {
  return guarded([&] {
    require(gram != nullptr && out_lmr != nullptr && out_ok != nullptr, "arguments must not be null");
    const rkhs::StabilityCheck c =
        rkhs::stability_check_dual(gram->gram, make_vector(f_x, len, "f_x must not be null"), slack);
    out_lmr[0] = c.lhs;
    out_lmr[1] = c.mid;
    out_lmr[2] = c.rhs;
    *out_ok = c.ok ? 1 : 0;
  });
}

rkhs_status rkhs_stability_primal(const rkhs_gram* gram, const double* coeffs, size_t len, double slack,
                                  double out_lmr[3], int* out_ok) {
  return guarded([&] {
    require(gram != nullptr && out_lmr != nullptr && out_ok != nullptr, "arguments must not be null");
    const rkhs::StabilityCheck c =
        rkhs::stability_check_primal(gram->gram, make_vector(coeffs, len, "coeffs must not be null"), slack);
    out_lmr[0] = c.lhs;
    out_lmr[1] = c.mid;
    out_lmr[2] = c.rhs;
    *out_ok = c.ok ? 1 : 0;
  });
}

rkhs_status rkhs_stability_write_json(const double dual_lmr[3], int dual_ok, const double primal_lmr[3],
                                      int primal_ok, const char* path) {
  return guarded([&] {
    require(dual_lmr != nullptr && primal_lmr != nullptr && path != nullptr, "arguments must not be null");
    const rkhs::StabilityCheck dual{dual_lmr[0], dual_lmr[1], dual_lmr[2], dual_ok != 0};
    const rkhs::StabilityCheck primal{primal_lmr[0], primal_lmr[1], primal_lmr[2], primal_ok != 0};
    rkhs::io::write_text_atomic(path, rkhs::io::stability_json(dual, primal));
  });
}

rkhs_status rkhs_dual_representations(const rkhs_gram* gram, const double* coeffs, size_t len, double* out_lagrange,
                                      double* out_kernel) {
  return guarded([&] {
    require(gram != nullptr && out_lagrange != nullptr && out_kernel != nullptr, "arguments must not be null");
    const rkhs::DualRepresentations reps =
        rkhs::dual_representations(gram->gram, make_vector(coeffs, len, "coeffs must not be null"));
    std::memcpy(out_lagrange, reps.lagrange_coeffs.data(), len * sizeof(double));
    std::memcpy(out_kernel, reps.kernel_coeffs.data(), len * sizeof(double));
  });
}

/* ---- point sequences & truncation diagnostics -------------------------- */

rkhs_status rkhs_sequence_explicit(const rkhs_points* points, rkhs_sequence** out) {
  return guarded([&] {
    require(points != nullptr && out != nullptr, "arguments must not be null");
    *out = new rkhs_sequence{rkhs::PointSequence::explicit_list(points->set)};
  });
}

rkhs_status rkhs_sequence_lattice(int dim, double spacing, rkhs_sequence** out) {
  return guarded([&] {
    require(out != nullptr, "out must not be null");
    *out = new rkhs_sequence{rkhs::PointSequence::lattice(dim, spacing)};
  });
}

rkhs_status rkhs_sequence_random(int dim, double min_separation, double low, double high, uint64_t seed,
                                 rkhs_sequence** out) {
  return guarded([&] {
    require(out != nullptr, "out must not be null");
    *out = new rkhs_sequence{rkhs::PointSequence::random_stream(dim, min_separation, low, high, seed)};
  });
}

rkhs_status rkhs_sequence_from_json(const char* json_text, rkhs_sequence** out) {
  return guarded([&] {
    require(json_text != nullptr && out != nullptr, "arguments must not be null");
    nlohmann::json j = nlohmann::json::parse(json_text, nullptr, false);
    if (j.is_discarded()) throw rkhs::ParseError("generator spec is not valid JSON");
    *out = new rkhs_sequence{rkhs::PointSequence::from_json(j)};
  });
}

rkhs_status rkhs_sequence_read_json(const char* path, rkhs_sequence** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "arguments must not be null");
    nlohmann::json j = nlohmann::json::parse(rkhs::io::read_text(path), nullptr, false);
    if (j.is_discarded()) throw rkhs::ParseError(std::string(path) + ": not valid JSON");
    *out = new rkhs_sequence{rkhs::PointSequence::from_json(j)};
  });
}

rkhs_status rkhs_sequence_prefix(const rkhs_sequence* sequence, size_t n, rkhs_points** out) {
  return guarded([&] {
    require(sequence != nullptr && out != nullptr, "arguments must not be null");
    *out = new rkhs_points{sequence->seq.prefix(n)};
  });
}

void rkhs_sequence_free(rkhs_sequence* sequence) { delete sequence; }

rkhs_status rkhs_truncated_dual(const rkhs_kernel* kernel, const rkhs_sequence* sequence, size_t n, size_t index,
                                rkhs_dual** out) {
  return guarded([&] {
    require(kernel != nullptr && sequence != nullptr && out != nullptr, "arguments must not be null");
    *out = new rkhs_dual{rkhs::truncated_dual(kernel->spec, sequence->seq, n, index)};
  });
}

rkhs_status rkhs_truncated_reconstruct(const rkhs_kernel* kernel, const rkhs_sequence* sequence,
                                       const double* samples, size_t len, size_t n, rkhs_model** out) {
  return guarded([&] {
    require(kernel != nullptr && sequence != nullptr && out != nullptr, "arguments must not be null");
    const Eigen::VectorXd f = make_vector(samples, len, "samples must not be null");
    *out = new rkhs_model{rkhs::truncated_reconstruct(kernel->spec, sequence->seq, f, n)};
  });
}

rkhs_status rkhs_determining_diagnostic(const rkhs_kernel* kernel, const rkhs_sequence* sequence, const size_t* sizes,
                                        size_t size_count, double stable_lambda_factor, rkhs_report** out) {
  return guarded([&] {
    require(kernel != nullptr && sequence != nullptr && sizes != nullptr && out != nullptr,
            "arguments must not be null");
    rkhs::DiagnosticPolicy policy;
    if (stable_lambda_factor > 0.0) policy.stable_lambda_factor = stable_lambda_factor;
    *out = new rkhs_report{rkhs::determining_diagnostic(
        kernel->spec, sequence->seq, std::span<const size_t>(sizes, size_count), policy)};
  });
}

size_t rkhs_report_rows(const rkhs_report* report) { return report ? report->report.sizes.size() : 0; }

rkhs_status rkhs_report_data(const rkhs_report* report, size_t* sizes, double* lambda_mins, double* conditions,
                             double* biorthos, double* drifts) {
  return guarded([&] {
    require(report != nullptr, "report must not be null");
    const rkhs::TruncationReport& r = report->report;
    for (size_t i = 0; i < r.sizes.size(); ++i) {
      if (sizes) sizes[i] = r.sizes[i];
      if (lambda_mins) lambda_mins[i] = r.lambda_mins[i];
      if (conditions) conditions[i] = r.condition_numbers[i];
      if (biorthos) biorthos[i] = r.biortho_residuals[i];
      if (drifts) drifts[i] = r.dual_drift[i];
    }
  });
}

const char* rkhs_report_verdict(const rkhs_report* report) {
  return report ? rkhs::verdict_name(report->report.verdict) : "?";
}

int rkhs_report_failed_size(const rkhs_report* report, size_t* out_size) {
  if (report == nullptr || !report->report.failed_size) return 0;
  if (out_size) *out_size = *report->report.failed_size;
  return 1;
}

rkhs_status rkhs_report_to_json(const rkhs_report* report, char** out_json) {
  return guarded([&] {
    require(report != nullptr && out_json != nullptr, "arguments must not be null");
    *out_json = dup_string(report->report.to_json().dump(2) + "\n");
  });
}

rkhs_status rkhs_report_write_json(const rkhs_report* report, const char* path) {
  return guarded([&] {
    require(report != nullptr && path != nullptr, "arguments must not be null");
    rkhs::io::write_text_atomic(path, report->report.to_json().dump(2) + "\n");
  });
}

rkhs_status rkhs_report_write_csv(const rkhs_report* report, const char* path) {
  return guarded([&] {
    require(report != nullptr && path != nullptr, "arguments must not be null");
    rkhs::io::write_text_atomic(path, report->report.to_csv());
  });
}

void rkhs_report_free(rkhs_report* report) { delete report; }

/* ---- tensor-product fast path ------------------------------------------ */

rkhs_status rkhs_kron_solve(const rkhs_gram* gram_x, const rkhs_gram* gram_y, const double* f, double* out_c) {
  return guarded([&] {
    require(gram_x != nullptr && gram_y != nullptr && f != nullptr && out_c != nullptr,
            "arguments must not be null");
    const auto n = static_cast<Eigen::Index>(gram_x->gram.size());
    const auto m = static_cast<Eigen::Index>(gram_y->gram.size());
    Eigen::MatrixXd fm(n, m);
    for (Eigen::Index r = 0; r < n; ++r)
      for (Eigen::Index c = 0; c < m; ++c) fm(r, c) = f[r * m + c];
    const rkhs::KroneckerGram kg(gram_x->gram, gram_y->gram);
    const Eigen::MatrixXd cm = kg.solve(fm);
    for (Eigen::Index r = 0; r < n; ++r)
      for (Eigen::Index c = 0; c < m; ++c) out_c[r * m + c] = cm(r, c);
  });
}

rkhs_status rkhs_tensor_fit(const rkhs_kernel* k1, const rkhs_kernel* k2, const rkhs_points* grid_x,
                            const rkhs_points* grid_y, const double* samples, rkhs_model** out) {
  return guarded([&] {
    require(k1 != nullptr && k2 != nullptr && grid_x != nullptr && grid_y != nullptr && samples != nullptr &&
                out != nullptr,
            "arguments must not be null");
    const auto n = static_cast<Eigen::Index>(grid_x->set.size());
    const auto m = static_cast<Eigen::Index>(grid_y->set.size());
    Eigen::MatrixXd fm(n, m);
    for (Eigen::Index r = 0; r < n; ++r)
      for (Eigen::Index c = 0; c < m; ++c) fm(r, c) = samples[r * m + c];
    const rkhs::TensorGrid grid(grid_x->set, grid_y->set);
    *out = new rkhs_model{rkhs::tensor_fit(k1->spec, k2->spec, grid, fm)};
  });
}

rkhs_status rkhs_tensor_dual(const rkhs_gram* gram_x, const rkhs_gram* gram_y, size_t j, size_t k, rkhs_dual** out) {
  return guarded([&] {
    require(gram_x != nullptr && gram_y != nullptr && out != nullptr, "arguments must not be null");
    const rkhs::KroneckerGram kg(gram_x->gram, gram_y->gram);
    const rkhs::TensorGrid grid(gram_x->gram.points(), gram_y->gram.points());
    *out = new rkhs_dual{rkhs::tensor_dual(kg, grid, j, k)};
  });
}

rkhs_status rkhs_tensor_riesz(const rkhs_gram* gram_x, const rkhs_gram* gram_y, double* lambda_min,
                              double* lambda_max, double* condition) {
  return guarded([&] {
    require(gram_x != nullptr && gram_y != nullptr, "arguments must not be null");
    const rkhs::KroneckerGram kg(gram_x->gram, gram_y->gram);
    const rkhs::RieszBounds b = kg.riesz_constants();
    if (lambda_min) *lambda_min = b.lambda_min;
    if (lambda_max) *lambda_max = b.lambda_max;
    if (condition) *condition = b.condition;
  });
}

rkhs_status rkhs_matrix_read_csv(const char* path, double** out_data, size_t* out_n, size_t* out_m) {
  return guarded([&] {
    require(path != nullptr && out_data != nullptr && out_n != nullptr && out_m != nullptr,
            "arguments must not be null");
    const Eigen::MatrixXd m = rkhs::io::read_matrix_csv(path);
    double* data = reinterpret_cast<double*>(new char[static_cast<size_t>(m.size()) * sizeof(double)]);
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      for (Eigen::Index c = 0; c < m.cols(); ++c) data[r * m.cols() + c] = m(r, c);
    *out_data = data;
    *out_n = static_cast<size_t>(m.rows());
    *out_m = static_cast<size_t>(m.cols());
  });
}

rkhs_status rkhs_matrix_write_csv(const double* data, size_t n, size_t m, const char* path) {
  return guarded([&] {
    require(data != nullptr && path != nullptr, "arguments must not be null");
    require(n > 0 && m > 0, "matrix must be nonempty");
    Eigen::MatrixXd values(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
    for (size_t r = 0; r < n; ++r)
      for (size_t c = 0; c < m; ++c) values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = data[r * m + c];
    rkhs::io::write_text_atomic(path, rkhs::io::matrix_csv(values));
  });
}

rkhs_status rkhs_bench_run(const size_t* ns, const size_t* ms, size_t size_count, int trials, size_t dense_budget,
                           rkhs_bench_row* out_rows) {
  return guarded([&] {
    require(ns != nullptr && ms != nullptr && out_rows != nullptr, "arguments must not be null");
    std::vector<std::pair<size_t, size_t>> sizes;
    for (size_t i = 0; i < size_count; ++i) sizes.emplace_back(ns[i], ms[i]);
    const auto rows = rkhs::bench_tensor_vs_dense(sizes, trials, dense_budget);
    for (size_t i = 0; i < rows.size(); ++i) {
      out_rows[i] = rkhs_bench_row{rows[i].n,       rows[i].m,       rows[i].t_tensor_ms,
                                   rows[i].t_dense_ms, rows[i].speedup, rows[i].dense_skipped ? 1 : 0};
    }
  });
}

rkhs_status rkhs_bench_write_csv(const rkhs_bench_row* rows, size_t count, const char* path) {
  return guarded([&] {
    require(rows != nullptr && path != nullptr, "arguments must not be null");
    std::vector<rkhs::BenchRow> v;
    for (size_t i = 0; i < count; ++i) {
      v.push_back(rkhs::BenchRow{rows[i].n, rows[i].m, rows[i].t_tensor_ms, rows[i].t_dense_ms, rows[i].speedup,
                                 rows[i].dense_skipped != 0});
    }
    rkhs::io::write_text_atomic(path, rkhs::io::bench_csv(v));
  });
}

int rkhs_format_double(double value, char* buffer, size_t buffer_size) {
  const std::string s = rkhs::io::format_double(value);
  if (buffer == nullptr || buffer_size < s.size() + 1) return -1;
  std::memcpy(buffer, s.c_str(), s.size() + 1);
  return static_cast<int>(s.size());
}

}  // extern "C"
