#include "io.hpp"

#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace rkhs::io {

std::string format_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

double parse_double(std::string_view token, const std::string& origin, std::size_t line_no) {
  double value = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc{} || res.ptr != last) {
    std::ostringstream msg;
    msg << origin << ":" << line_no << ": not a number: '" << std::string(token) << "'";
    throw ParseError(msg.str());
  }
  return value;
}

std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> nonempty_lines(std::string_view text, std::vector<std::size_t>* line_numbers) {
  std::vector<std::string_view> lines;
  std::size_t start = 0, line_no = 0;
  while (start <= text.size()) {
    const std::size_t pos = text.find('\n', start);
    const std::string_view raw =
        pos == std::string_view::npos ? text.substr(start) : text.substr(start, pos - start);
    ++line_no;
    if (!trim(raw).empty()) {
      lines.push_back(raw);
      if (line_numbers) line_numbers->push_back(line_no);
    }
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return lines;
}

}  // namespace

PointFile parse_point_file(const std::string& text, const std::string& origin) {
  std::vector<std::size_t> line_numbers;
  const auto lines = nonempty_lines(text, &line_numbers);
  if (lines.size() < 2) throw ParseError(origin + ": expected a header row and at least one point row");

  const auto header = split_csv_line(lines[0]);
  bool has_samples = false;
  int dim = 0;
  for (std::size_t c = 0; c < header.size(); ++c) {
    const auto name = trim(header[c]);
    if (name == "f") {
      if (c + 1 != header.size()) throw ParseError(origin + ": the f column must be last");
      has_samples = true;
    } else {
      std::ostringstream expected;
      expected << "x" << c + 1;
      if (name != expected.str()) {
        throw ParseError(origin + ": bad header column '" + std::string(name) + "', expected '" + expected.str() +
                         "' or 'f'");
      }
      ++dim;
    }
  }
  if (dim < 1) throw ParseError(origin + ": no coordinate columns in header");

  const auto n = lines.size() - 1;
  PointSet::Storage rows(static_cast<Eigen::Index>(n), dim);
  Eigen::VectorXd samples(has_samples ? static_cast<Eigen::Index>(n) : 0);
  for (std::size_t r = 0; r < n; ++r) {
    const auto fields = split_csv_line(lines[r + 1]);
    const std::size_t expected_cols = static_cast<std::size_t>(dim) + (has_samples ? 1 : 0);
    if (fields.size() != expected_cols) {
      std::ostringstream msg;
      msg << origin << ":" << line_numbers[r + 1] << ": expected " << expected_cols << " columns, found "
          << fields.size();
      throw ParseError(msg.str());
    }
    for (std::size_t c = 0; c < fields.size(); ++c) {
      const double v = parse_double(trim(fields[c]), origin, line_numbers[r + 1]);
      if (!std::isfinite(v)) {
        std::ostringstream msg;
        msg << origin << ":" << line_numbers[r + 1] << ": non-finite value";
        throw ParseError(msg.str());
      }
      if (has_samples && c == static_cast<std::size_t>(dim)) {
        samples[static_cast<Eigen::Index>(r)] = v;
      } else {
        rows(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v;
      }
    }
  }

  std::size_t dup_a, dup_b;
  detail::check_point_matrix(rows, &dup_a, &dup_b);
  if (dup_a != static_cast<std::size_t>(-1)) {
    std::ostringstream msg;
    msg << origin << ": duplicate points at rows " << line_numbers[dup_a + 1] << " and " << line_numbers[dup_b + 1];
    throw ParseError(msg.str());
  }

  PointFile out{PointSet(std::move(rows)), std::nullopt};
  if (has_samples) out.samples = std::move(samples);
  return out;
}

PointFile read_point_file(const std::string& path) { return parse_point_file(read_text(path), path); }

std::string point_file_text(const PointSet& points, const Eigen::VectorXd* values) {
  std::string out;
  for (int c = 0; c < points.dim(); ++c) {
    if (c) out += ',';
    out += 'x';
    out += std::to_string(c + 1);
  }
  if (values) out += ",f";
  out += '\n';
  for (std::size_t r = 0; r < points.size(); ++r) {
    const auto row = points.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += format_double(row[c]);
    }
    if (values) {
      out += ',';
      out += format_double((*values)[static_cast<Eigen::Index>(r)]);
    }
    out += '\n';
  }
  return out;
}

std::string gram_csv(const Eigen::MatrixXd& entries) {
  std::string out;
  for (Eigen::Index r = 0; r < entries.rows(); ++r) {
    for (Eigen::Index c = 0; c < entries.cols(); ++c) {
      if (c) out += ',';
      out += format_double(entries(r, c));
    }
    out += '\n';
  }
  return out;
}

Eigen::MatrixXd parse_gram_csv(const std::string& text, const std::string& origin) {
  std::vector<std::size_t> line_numbers;
  const auto lines = nonempty_lines(text, &line_numbers);
  if (lines.empty()) throw ParseError(origin + ": empty matrix");
  const auto n = static_cast<Eigen::Index>(lines.size());
  Eigen::MatrixXd out(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto fields = split_csv_line(lines[static_cast<std::size_t>(r)]);
    if (static_cast<Eigen::Index>(fields.size()) != n) {
      std::ostringstream msg;
      msg << origin << ":" << line_numbers[static_cast<std::size_t>(r)] << ": expected " << n << " columns";
      throw ParseError(msg.str());
    }
    for (Eigen::Index c = 0; c < n; ++c)
      out(r, c) = parse_double(trim(fields[static_cast<std::size_t>(c)]), origin, line_numbers[static_cast<std::size_t>(r)]);
  }
  return out;
}

std::string matrix_csv(const Eigen::MatrixXd& values) {
  std::string out = std::to_string(values.rows()) + "," + std::to_string(values.cols()) + "\n";
  for (Eigen::Index r = 0; r < values.rows(); ++r) {
    for (Eigen::Index c = 0; c < values.cols(); ++c) {
      if (c) out += ',';
      out += format_double(values(r, c));
    }
    out += '\n';
  }
  return out;
}

Eigen::MatrixXd parse_matrix_csv(const std::string& text, const std::string& origin) {
  std::vector<std::size_t> line_numbers;
  const auto lines = nonempty_lines(text, &line_numbers);
  if (lines.empty()) throw ParseError(origin + ": empty matrix file");
  const auto header = split_csv_line(lines[0]);
  if (header.size() != 2) throw ParseError(origin + ": header must be 'n,m'");
  const auto n = static_cast<Eigen::Index>(parse_double(trim(header[0]), origin, line_numbers[0]));
  const auto m = static_cast<Eigen::Index>(parse_double(trim(header[1]), origin, line_numbers[0]));
  if (n < 1 || m < 1) throw ParseError(origin + ": factor sizes must be positive");
  if (static_cast<Eigen::Index>(lines.size()) != n + 1) {
    std::ostringstream msg;
    msg << origin << ": header promises " << n << " rows, found " << lines.size() - 1;
    throw ParseError(msg.str());
  }
  Eigen::MatrixXd out(n, m);
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto fields = split_csv_line(lines[static_cast<std::size_t>(r) + 1]);
    if (static_cast<Eigen::Index>(fields.size()) != m) {
      std::ostringstream msg;
      msg << origin << ":" << line_numbers[static_cast<std::size_t>(r) + 1] << ": expected " << m << " columns";
      throw ParseError(msg.str());
    }
    for (Eigen::Index c = 0; c < m; ++c)
      out(r, c) =
          parse_double(trim(fields[static_cast<std::size_t>(c)]), origin, line_numbers[static_cast<std::size_t>(r) + 1]);
  }
  return out;
}

Eigen::MatrixXd read_matrix_csv(const std::string& path) { return parse_matrix_csv(read_text(path), path); }

std::string riesz_json(const RieszBounds& bounds) {
  nlohmann::json j;
  j["lambda_min"] = bounds.lambda_min;
  j["lambda_max"] = bounds.lambda_max;
  j["condition"] = bounds.condition;
  return j.dump(2) + "\n";
}

namespace {

nlohmann::json check_json(const StabilityCheck& c) {
  nlohmann::json j;
  j["lhs"] = c.lhs;
  j["mid"] = c.mid;
  j["rhs"] = c.rhs;
  j["ok"] = c.ok;
  return j;
}

}  // namespace

std::string stability_json(const StabilityCheck& dual, const StabilityCheck& primal) {
  nlohmann::json j;
  j["dual"] = check_json(dual);
  j["primal"] = check_json(primal);
  return j.dump(2) + "\n";
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::string out = "n,m,t_tensor_ms,t_dense_ms,speedup,dense_skipped\n";
  for (const auto& r : rows) {
    out += std::to_string(r.n) + "," + std::to_string(r.m) + "," + format_double(r.t_tensor_ms) + "," +
           format_double(r.t_dense_ms) + "," + format_double(r.speedup) + "," + (r.dense_skipped ? "1" : "0") + "\n";
  }
  return out;
}

void write_text_atomic(const std::string& path, const std::string& text) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path dir = target.parent_path().empty() ? fs::path(".") : target.parent_path();
  std::error_code ec;
  fs::create_directories(dir, ec);

  const fs::path tmp = dir / (target.filename().string() + ".tmp." + std::to_string(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.flush();
    if (!out) {
      std::error_code rm;
      fs::remove(tmp, rm);
      throw IoError("failed writing " + tmp.string());
    }
  }
  fs::rename(tmp, target, ec);
  if (ec) {
    std::error_code rm;
    fs::remove(tmp, rm);
    throw IoError("failed to move " + tmp.string() + " into place: " + ec.message());
  }
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path + ": " + std::strerror(errno));
  std::ostringstream buf;
  buf << in.rdbuf();
  if (!in.good() && !in.eof()) throw IoError("failed reading " + path);
  return buf.str();
}

}  // namespace rkhs::io
