// rkhs — batch front end for kernel interpolation and sampling diagnostics.
//
// Subcommands map one-to-one onto the library: gram, fit, stability,
// determining, tensor, bench. All numerics and file formats live behind the
// C API in librkhs; this tool parses arguments, sequences the calls and maps
// failures onto the exit-code contract:
//   0  success (determining: verdict stable or inconclusive)
//   2  input problem (parse error, duplicate points, bad config)
//   3  kernel matrix not numerically positive definite
//   4  determining verdict: degrading
//   5  other numerical failure

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "rkhs/rkhs.h"

namespace {

constexpr std::uint64_t kDefaultSeed = 0xC0FFEE;

struct Config {
  std::string kernel_path;
  std::string points_path;
  std::string probes_path;
  std::string generator;  // path or inline JSON
  std::string samples_path;
  std::string grid_x_path;
  std::string grid_y_path;
  std::string out_dir = ".";
  std::string sizes;
  std::uint64_t seed = kDefaultSeed;
  int trials = 3;
  std::vector<std::string> tol_overrides;

  // named tolerances; unknown names are rejected
  double stability_slack = 1e-10;
  double stable_lambda_factor = 1e3;
  double dense_budget = 4096;
};

class CliError : public std::runtime_error {
 public:
  CliError(int exit_code, const std::string& what) : std::runtime_error(what), exit_code_(exit_code) {}
  int exit_code() const { return exit_code_; }

 private:
  int exit_code_;
};

int exit_code_for(rkhs_status status) {
  switch (status) {
    case RKHS_OK: return 0;
    case RKHS_ERR_PARSE:
    case RKHS_ERR_IO:
    case RKHS_ERR_DUPLICATE_POINT:
    case RKHS_ERR_INVALID_ARGUMENT:
    case RKHS_ERR_DIMENSION:
    case RKHS_ERR_INDEX: return 2;
    case RKHS_ERR_NOT_POSITIVE_DEFINITE: return 3;
    case RKHS_ERR_NUMERICAL: return 5;
  }
  return 5;
}

void check(rkhs_status status) {
  if (status != RKHS_OK) throw CliError(exit_code_for(status), rkhs_last_error());
}

void apply_tolerances(Config& config) {
  for (const std::string& entry : config.tol_overrides) {
    const auto eq = entry.find('=');
    if (eq == std::string::npos) throw CliError(2, "--tol expects name=value, got '" + entry + "'");
    const std::string name = entry.substr(0, eq);
    double value = 0.0;
    try {
      value = std::stod(entry.substr(eq + 1));
    } catch (const std::exception&) {
      throw CliError(2, "--tol " + name + ": not a number");
    }
    if (name == "stability_slack") {
      config.stability_slack = value;
    } else if (name == "stable_lambda_factor") {
      config.stable_lambda_factor = value;
    } else if (name == "dense_budget") {
      config.dense_budget = value;
    } else {
      throw CliError(2, "unknown tolerance name '" + name + "'");
    }
  }
}

std::string out_path(const Config& config, const std::string& name) {
  return (std::filesystem::path(config.out_dir) / name).string();
}

// RAII wrappers for the C handles.
template <typename T, void (*Free)(T*)>
struct Handle {
  T* ptr = nullptr;
  Handle() = default;
  ~Handle() { Free(ptr); }
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  T** operator&() { return &ptr; }
  operator T*() const { return ptr; }
};
using KernelHandle = Handle<rkhs_kernel, rkhs_kernel_free>;
using PointsHandle = Handle<rkhs_points, rkhs_points_free>;
using GramHandle = Handle<rkhs_gram, rkhs_gram_free>;
using ModelHandle = Handle<rkhs_model, rkhs_model_free>;
using SequenceHandle = Handle<rkhs_sequence, rkhs_sequence_free>;
using ReportHandle = Handle<rkhs_report, rkhs_report_free>;

struct Buffer {
  double* data = nullptr;
  ~Buffer() { rkhs_buffer_free(data); }
};

void load_kernel(const Config& config, KernelHandle& kernel) {
  if (config.kernel_path.empty()) throw CliError(2, "--kernel is required");
  check(rkhs_kernel_read_json(config.kernel_path.c_str(), &kernel));
}

// require_samples: 1 = file must carry an f column, 0 = it must not.
void load_points(const std::string& path, int require_samples, PointsHandle& points, Buffer* samples) {
  double* raw = nullptr;
  check(rkhs_points_read_csv(path.c_str(), &points, &raw));
  if (samples) samples->data = raw;
  else rkhs_buffer_free(raw);
  if (require_samples == 1 && raw == nullptr) throw CliError(2, path + ": an f column with sample values is required");
  if (require_samples == 0 && raw != nullptr) throw CliError(2, path + ": expected points only, found an f column");
}

std::vector<std::size_t> parse_size_list(const std::string& text) {
  std::vector<std::size_t> sizes;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    try {
      sizes.push_back(static_cast<std::size_t>(std::stoull(item)));
    } catch (const std::exception&) {
      throw CliError(2, "--sizes: not a positive integer: '" + item + "'");
    }
  }
  if (sizes.empty()) throw CliError(2, "--sizes is required (comma-separated integers)");
  return sizes;
}

int cmd_gram(const Config& config) {
  KernelHandle kernel;
  load_kernel(config, kernel);
  PointsHandle points;
  load_points(config.points_path, -1, points, nullptr);

  GramHandle gram;
  check(rkhs_gram_assemble(kernel, points, &gram));
  check(rkhs_gram_cholesky(gram));  // fails with the pivot index on non-PD input
  check(rkhs_gram_write_csv(gram, out_path(config, "gram.csv").c_str()));
  check(rkhs_gram_write_riesz_json(gram, out_path(config, "riesz.json").c_str()));
  return 0;
}

int cmd_fit(const Config& config) {
  KernelHandle kernel;
  load_kernel(config, kernel);
  PointsHandle train;
  Buffer samples;
  load_points(config.points_path, 1, train, &samples);
  PointsHandle probes;
  load_points(config.probes_path, 0, probes, nullptr);

  ModelHandle model;
  check(rkhs_fit(kernel, train, samples.data, &model));
  std::vector<double> predictions(rkhs_points_count(probes));
  check(rkhs_model_eval_many(model, probes, predictions.data()));
  check(rkhs_points_write_csv(probes, predictions.data(), out_path(config, "predictions.csv").c_str()));
  return 0;
}

int cmd_stability(const Config& config) {
  KernelHandle kernel;
  load_kernel(config, kernel);
  PointsHandle train;
  Buffer samples;
  load_points(config.points_path, 1, train, &samples);

  GramHandle gram;
  check(rkhs_gram_assemble(kernel, train, &gram));
  const std::size_t n = rkhs_points_count(train);

  double dual[3];
  int dual_ok = 0;
  check(rkhs_stability_dual(gram, samples.data, n, config.stability_slack, dual, &dual_ok));

  std::vector<double> coeffs(n);
  check(rkhs_gram_solve(gram, samples.data, n, coeffs.data()));
  double primal[3];
  int primal_ok = 0;
  check(rkhs_stability_primal(gram, coeffs.data(), n, config.stability_slack, primal, &primal_ok));

  check(rkhs_stability_write_json(dual, dual_ok, primal, primal_ok, out_path(config, "stability.json").c_str()));
  return 0;
}

int cmd_determining(const Config& config) {
  KernelHandle kernel;
  load_kernel(config, kernel);
  if (config.generator.empty()) throw CliError(2, "--generator is required (JSON file or inline JSON)");

  // Inline JSON starts with '{'; anything else is a path. A random generator
  // without an explicit seed inherits the run seed.
  std::string text = config.generator;
  if (text.find('{') == std::string::npos) {
    std::ifstream in(text);
    if (!in) throw CliError(2, "cannot open generator spec: " + text);
    std::stringstream buf;
    buf << in.rdbuf();
    text = buf.str();
  }
  nlohmann::json spec = nlohmann::json::parse(text, nullptr, false);
  if (spec.is_discarded()) throw CliError(2, "generator spec is not valid JSON");
  if (spec.is_object() && spec.value("type", "") == "random" && !spec.contains("seed")) spec["seed"] = config.seed;

  SequenceHandle sequence;
  check(rkhs_sequence_from_json(spec.dump().c_str(), &sequence));

  const auto sizes = parse_size_list(config.sizes);
  ReportHandle report;
  check(rkhs_determining_diagnostic(kernel, sequence, sizes.data(), sizes.size(), config.stable_lambda_factor,
                                    &report));
  check(rkhs_report_write_json(report, out_path(config, "report.json").c_str()));
  check(rkhs_report_write_csv(report, out_path(config, "report.csv").c_str()));

  const std::string verdict = rkhs_report_verdict(report);
  std::fprintf(stdout, "verdict: %s\n", verdict.c_str());
  return verdict == "degrading" ? 4 : 0;
}

int cmd_tensor(const Config& config) {
  KernelHandle kernel;
  load_kernel(config, kernel);
  KernelHandle k1, k2;
  {
    const rkhs_status status = rkhs_kernel_split(kernel, &k1, &k2);
    if (status != RKHS_OK) throw CliError(2, "tensor command needs a kernel of type \"tensor\"");
  }
  PointsHandle grid_x, grid_y;
  load_points(config.grid_x_path, 0, grid_x, nullptr);
  load_points(config.grid_y_path, 0, grid_y, nullptr);

  Buffer samples;
  std::size_t n = 0, m = 0;
  check(rkhs_matrix_read_csv(config.samples_path.c_str(), &samples.data, &n, &m));
  if (n != rkhs_points_count(grid_x) || m != rkhs_points_count(grid_y)) {
    std::ostringstream msg;
    msg << config.samples_path << ": sample matrix is " << n << "x" << m << " but the grid is "
        << rkhs_points_count(grid_x) << "x" << rkhs_points_count(grid_y);
    throw CliError(2, msg.str());
  }

  ModelHandle model;
  check(rkhs_tensor_fit(k1, k2, grid_x, grid_y, samples.data, &model));
  PointsHandle probes;
  load_points(config.probes_path, 0, probes, nullptr);
  std::vector<double> predictions(rkhs_points_count(probes));
  check(rkhs_model_eval_many(model, probes, predictions.data()));
  check(rkhs_points_write_csv(probes, predictions.data(), out_path(config, "predictions.csv").c_str()));
  return 0;
}

int cmd_bench(const Config& config) {
  std::vector<std::size_t> ns, ms;
  std::stringstream stream(config.sizes);
  std::string item;
  while (std::getline(stream, item, ',')) {
    const auto x = item.find('x');
    try {
      if (x == std::string::npos) {
        const auto n = static_cast<std::size_t>(std::stoull(item));
        ns.push_back(n);
        ms.push_back(n);
      } else {
        ns.push_back(static_cast<std::size_t>(std::stoull(item.substr(0, x))));
        ms.push_back(static_cast<std::size_t>(std::stoull(item.substr(x + 1))));
      }
    } catch (const std::exception&) {
      throw CliError(2, "--sizes: expected N or NxM entries, got '" + item + "'");
    }
  }
  if (ns.empty()) throw CliError(2, "--sizes is required (comma-separated N or NxM)");

  std::vector<rkhs_bench_row> rows(ns.size());
  check(rkhs_bench_run(ns.data(), ms.data(), ns.size(), config.trials,
                       static_cast<std::size_t>(config.dense_budget), rows.data()));
  check(rkhs_bench_write_csv(rows.data(), rows.size(), out_path(config, "bench.csv").c_str()));
  for (const auto& row : rows) {
    if (row.dense_skipped) {
      std::fprintf(stdout, "%zu x %zu: tensor %.3f ms, dense skipped (budget)\n", row.n, row.m, row.t_tensor_ms);
    } else {
      std::fprintf(stdout, "%zu x %zu: tensor %.3f ms, dense %.3f ms, speedup %.1fx\n", row.n, row.m,
                   row.t_tensor_ms, row.t_dense_ms, row.speedup);
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kernel interpolation and sampling toolkit"};
  app.require_subcommand(1);
  Config config;

  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--kernel", config.kernel_path, "kernel spec (JSON file)");
    cmd->add_option("--out", config.out_dir, "output directory (default .)");
    cmd->add_option("--seed", config.seed, "seed for randomized routines (default 0xC0FFEE)");
    cmd->add_option("--tol", config.tol_overrides,
                    "tolerance override name=value (stability_slack, stable_lambda_factor, dense_budget)");
  };

  CLI::App* gram = app.add_subcommand("gram", "assemble the kernel matrix; emit gram.csv and riesz.json");
  add_common(gram);
  gram->add_option("--points", config.points_path, "points CSV")->required();

  CLI::App* fit = app.add_subcommand("fit", "interpolate samples and evaluate at probes; emit predictions.csv");
  add_common(fit);
  fit->add_option("--points", config.points_path, "training CSV with an f column")->required();
  fit->add_option("--probes", config.probes_path, "probe points CSV")->required();

  CLI::App* stability = app.add_subcommand("stability", "two-sided stability estimates; emit stability.json");
  add_common(stability);
  stability->add_option("--points", config.points_path, "training CSV with an f column")->required();

  CLI::App* determining =
      app.add_subcommand("determining", "nested-section conditioning diagnostic; emit report.json and report.csv");
  add_common(determining);
  determining->add_option("--generator", config.generator, "point sequence spec (JSON file or inline JSON)")
      ->required();
  determining->add_option("--sizes", config.sizes, "section sizes, e.g. 8,16,32")->required();

  CLI::App* tensor =
      app.add_subcommand("tensor", "tensor-product fit on a grid via the factored solve; emit predictions.csv");
  add_common(tensor);
  tensor->add_option("--grid-x", config.grid_x_path, "first factor points CSV")->required();
  tensor->add_option("--grid-y", config.grid_y_path, "second factor points CSV")->required();
  tensor->add_option("--samples", config.samples_path, "sample matrix CSV (header n,m)")->required();
  tensor->add_option("--probes", config.probes_path, "probe points CSV")->required();

  CLI::App* bench = app.add_subcommand("bench", "time the factored solve against the dense path; emit bench.csv");
  add_common(bench);
  bench->add_option("--sizes", config.sizes, "grid sizes, e.g. 10,20,40 or 40x60")->required();
  bench->add_option("--trials", config.trials, "timing repetitions (default 3)");

  CLI11_PARSE(app, argc, argv);

  try {
    apply_tolerances(config);
    if (gram->parsed()) return cmd_gram(config);
    if (fit->parsed()) return cmd_fit(config);
    if (stability->parsed()) return cmd_stability(config);
    if (determining->parsed()) return cmd_determining(config);
    if (tensor->parsed()) return cmd_tensor(config);
    if (bench->parsed()) return cmd_bench(config);
  } catch (const CliError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return e.exit_code();
  }
  return 0;
}
