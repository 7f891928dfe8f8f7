#include <doctest.h>

#include <nlohmann/json.hpp>

#include "determining.hpp"
#include "test_helpers.hpp"

using rkhs::KernelSpec;
using rkhs::PointSequence;
using rkhs::PointSet;
using rkhs::Verdict;

namespace {

const KernelSpec kGauss1 = KernelSpec::gaussian(1);

Eigen::VectorXd lattice_samples(const PointSequence& seq, std::size_t n, double center) {
  const PointSet pts = seq.prefix(n);
  Eigen::VectorXd f(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const double x = pts.row(i)[0];
    f[static_cast<Eigen::Index>(i)] = std::exp(-(x - center) * (x - center));
  }
  return f;
}

}  // namespace

TEST_CASE("lattice enumeration: increasing norm, lexicographic ties") {
  const PointSequence seq = PointSequence::lattice(1, 1.0);
  const PointSet p8 = seq.prefix(8);
  const double expected[8] = {0.0, -1.0, 1.0, -2.0, 2.0, -3.0, 3.0, -4.0};
  for (std::size_t i = 0; i < 8; ++i) CHECK(p8.row(i)[0] == expected[i]);

  const PointSequence seq2 = PointSequence::lattice(2, 0.5);
  const PointSet p9 = seq2.prefix(9);
  const double expected2[9][2] = {{0, 0},  {-1, 0}, {0, -1}, {0, 1},  {1, 0},
                                  {-1, -1}, {-1, 1}, {1, -1}, {1, 1}};
  for (std::size_t i = 0; i < 9; ++i) {
    CHECK(p9.row(i)[0] == 0.5 * expected2[i][0]);
    CHECK(p9.row(i)[1] == 0.5 * expected2[i][1]);
  }
}

TEST_CASE("prefixes are nested bit-for-bit") {
  const PointSequence lattice = PointSequence::lattice(2, 1.0);
  const PointSequence random = PointSequence::random_stream(2, 0.5, 0.0, 8.0, 12345);
  for (const PointSequence& seq : {lattice, random}) {
    const PointSet big = seq.prefix(40);
    const PointSet small = seq.prefix(15);
    for (std::size_t i = 0; i < 15; ++i) {
      CHECK(small.row(i)[0] == big.row(i)[0]);
      CHECK(small.row(i)[1] == big.row(i)[1]);
    }
  }
}

TEST_CASE("random stream honors the separation and the seed") {
  const PointSequence seq = PointSequence::random_stream(2, 0.5, 0.0, 6.0, 7);
  const PointSet pts = seq.prefix(30);
  for (std::size_t i = 0; i < 30; ++i) {
    for (std::size_t j = i + 1; j < 30; ++j) {
      double dist_sq = 0.0;
      for (int c = 0; c < 2; ++c) {
        const double d = pts.row(i)[static_cast<std::size_t>(c)] - pts.row(j)[static_cast<std::size_t>(c)];
        dist_sq += d * d;
      }
      CHECK(dist_sq >= 0.25);
    }
  }
  // same seed reproduces the stream; different seed does not
  const PointSet again = PointSequence::random_stream(2, 0.5, 0.0, 6.0, 7).prefix(30);
  CHECK(again.data() == pts.data());
  const PointSet other = PointSequence::random_stream(2, 0.5, 0.0, 6.0, 8).prefix(30);
  CHECK(other.data() != pts.data());

  // unplaceable request fails instead of spinning
  CHECK_THROWS_AS(PointSequence::random_stream(1, 1.0, 0.0, 2.0, 1).prefix(50), rkhs::NumericalError);
}

TEST_CASE("explicit sequences end where the list ends") {
  const PointSet pts = testutil::random_points(1, 6, 0.3, 0.0, 5.0, 3);
  const PointSequence seq = PointSequence::explicit_list(pts);
  CHECK(seq.prefix(6).size() == 6);
  CHECK(seq.prefix(2).size() == 2);
  CHECK_THROWS_AS(seq.prefix(7), rkhs::IndexError);
}

TEST_CASE("generator json round trip") {
  const PointSequence lat = PointSequence::from_json(
      nlohmann::json{{"type", "lattice"}, {"dim", 1}, {"spacing", 1.0}});
  CHECK(lat.prefix(3).row(2)[0] == 1.0);

  const PointSequence rnd = PointSequence::from_json(nlohmann::json{
      {"type", "random"}, {"dim", 2}, {"min_separation", 0.5}, {"low", 0.0}, {"high", 6.0}, {"seed", 7}});
  CHECK(rnd.prefix(5).data() == PointSequence::random_stream(2, 0.5, 0.0, 6.0, 7).prefix(5).data());

  const PointSequence exp = PointSequence::from_json(
      nlohmann::json{{"type", "explicit"}, {"points", {{0.0}, {1.5}}}});
  CHECK(exp.prefix(2).row(1)[0] == 1.5);

  CHECK_THROWS_AS(PointSequence::from_json(nlohmann::json{{"type", "lattice"}, {"dim", 1}, {"h", 1.0}}),
                  rkhs::ParseError);
  CHECK_THROWS_AS(PointSequence::from_json(nlohmann::json{{"type", "mesh"}}), rkhs::ParseError);
}

TEST_CASE("truncated duals are cardinal and stabilize") {
  const PointSequence seq = PointSequence::lattice(1, 1.0);

  // n = 1: the normalized kernel section (unit diagonal)
  const rkhs::DualBasisVector l1 = rkhs::truncated_dual(kGauss1, seq, 1, 0);
  CHECK(l1.coeffs()[0] == 1.0);

  for (std::size_t n : {std::size_t{2}, std::size_t{5}}) {
    const rkhs::DualBasisVector l = rkhs::truncated_dual(kGauss1, seq, n, 0);
    const PointSet pts = seq.prefix(n);
    for (std::size_t j = 0; j < n; ++j)
      CHECK(l(pts.row(j)) == doctest::Approx(j == 0 ? 1.0 : 0.0).epsilon(1e-12));
  }

  CHECK_THROWS_AS(rkhs::truncated_dual(kGauss1, seq, 3, 3), rkhs::IndexError);

  // regression fixture: coefficient movement between consecutive sections,
  // measured as |c_{n+1}[0:n] - c_n|_2 for n = 2..7
  const double expected_drift[6] = {0.2160327400939444,   0.08388841198025075, 0.08603902868724016,
                                    0.031769297193703486, 0.03185477963479468, 0.011723041306503767};
  std::vector<Eigen::VectorXd> coeffs;
  for (std::size_t n = 2; n <= 8; ++n) coeffs.push_back(rkhs::truncated_dual(kGauss1, seq, n, 0).coeffs());
  CHECK(coeffs[0][0] == doctest::Approx(testutil::kCoeff0).epsilon(1e-12));
  CHECK(coeffs[0][1] == doctest::Approx(testutil::kCoeff1).epsilon(1e-12));
  for (std::size_t i = 0; i + 1 < coeffs.size(); ++i) {
    const double drift = (coeffs[i + 1].head(coeffs[i].size()) - coeffs[i]).norm();
    CHECK(drift == doctest::Approx(expected_drift[i]).epsilon(1e-6));
  }
  // the symmetric lattice adds points in +/- pairs, so stabilization is
  // monotone across same-parity steps
  CHECK(expected_drift[2] < expected_drift[0]);
  CHECK(expected_drift[4] < expected_drift[2]);
  CHECK(expected_drift[3] < expected_drift[1]);
  CHECK(expected_drift[5] < expected_drift[3]);
}

TEST_CASE("truncated reconstruction") {
  const PointSequence seq = PointSequence::lattice(1, 1.0);

  SUBCASE("a kernel section is reproduced exactly from any section size") {
    for (std::size_t n : {std::size_t{1}, std::size_t{4}, std::size_t{9}}) {
      const PointSet pts = seq.prefix(n);
      Eigen::VectorXd samples(static_cast<Eigen::Index>(n));
      for (std::size_t i = 0; i < n; ++i) samples[static_cast<Eigen::Index>(i)] = kGauss1(pts.row(i), pts.row(0));
      const rkhs::SamplingModel model = rkhs::truncated_reconstruct(kGauss1, seq, samples, n);
      CHECK(model.coeffs()[0] == doctest::Approx(1.0).epsilon(1e-10));
      for (std::size_t i = 1; i < n; ++i)
        CHECK(model.coeffs()[static_cast<Eigen::Index>(i)] == doctest::Approx(0.0).epsilon(1e-10));
    }
  }

  SUBCASE("zero samples give the zero model") {
    const rkhs::SamplingModel model = rkhs::truncated_reconstruct(kGauss1, seq, Eigen::VectorXd::Zero(6), 6);
    CHECK(model.coeffs().isZero(0.0));
  }

  SUBCASE("matches fit on the prefix exactly") {
    const Eigen::VectorXd samples = lattice_samples(seq, 12, 0.3);
    const rkhs::SamplingModel a = rkhs::truncated_reconstruct(kGauss1, seq, samples, 12);
    const rkhs::SamplingModel b = rkhs::fit(kGauss1, seq.prefix(12), samples);
    CHECK(a.coeffs() == b.coeffs());
  }

  SUBCASE("held-out residual shrinks as the section grows (frozen fixtures)") {
    // f = K_{0.3} sampled on the lattice; residual at the next point x_{n+1}
    const double expected[3] = {0.013701534927282159, 0.003356166099384762, 2.261141775309203e-05};
    const std::size_t ns[3] = {5, 10, 20};
    double previous = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 3; ++i) {
      const std::size_t n = ns[i];
      const Eigen::VectorXd samples = lattice_samples(seq, n, 0.3);
      const rkhs::SamplingModel model = rkhs::truncated_reconstruct(kGauss1, seq, samples, n);

      double node_residual = 0.0;
      const PointSet pts = seq.prefix(n);
      for (std::size_t j = 0; j < n; ++j)
        node_residual = std::max(node_residual, std::abs(model(pts.row(j)) - samples[static_cast<Eigen::Index>(j)]));
      CHECK(node_residual <= 1e-8);

      const PointSet next = seq.prefix(n + 1);
      const double x_next = next.row(n)[0];
      const double held_out = std::abs(model(next.row(n)) - std::exp(-(x_next - 0.3) * (x_next - 0.3)));
      CHECK(held_out == doctest::Approx(expected[i]).epsilon(1e-6));
      CHECK(held_out < previous);
      previous = held_out;
    }
  }
}

TEST_CASE("sections nest and eigenvalues interlace") {
  const PointSequence seq = PointSequence::lattice(1, 1.0);
  const rkhs::GramMatrix a32(kGauss1, seq.prefix(32));
  const rkhs::GramMatrix a16(kGauss1, seq.prefix(16));
  const rkhs::GramMatrix a8(kGauss1, seq.prefix(8));

  CHECK(a16.entries() == a32.entries().topLeftCorner(16, 16));
  CHECK(a8.entries() == a16.entries().topLeftCorner(8, 8));

  const double l8 = a8.riesz_constants().lambda_min;
  const double l16 = a16.riesz_constants().lambda_min;
  const double l32 = a32.riesz_constants().lambda_min;
  CHECK(l16 <= l8 * (1.0 + 1e-12));
  CHECK(l32 <= l16 * (1.0 + 1e-12));

  for (const rkhs::GramMatrix* g : {&a8, &a16, &a32}) {
    CHECK(rkhs::biorthogonality_residual(*g) <= 1e-8 * g->riesz_constants().condition);
  }
}

TEST_CASE("diagnostic on the unit lattice is stable (frozen fixtures)") {
  const PointSequence seq = PointSequence::lattice(1, 1.0);
  const std::size_t sizes[3] = {8, 16, 32};
  const rkhs::TruncationReport report = rkhs::determining_diagnostic(kGauss1, seq, sizes);

  REQUIRE(report.sizes.size() == 3);
  CHECK(report.verdict == Verdict::Stable);
  CHECK(!report.failed_size.has_value());

  const double expected_lambda[3] = {0.33744735108991514, 0.31085218334663345, 0.3033239386565813};
  const double expected_cond[3] = {5.098799868588622, 5.654629036815057, 5.830911682826681};
  for (int i = 0; i < 3; ++i) {
    CHECK(report.lambda_mins[static_cast<std::size_t>(i)] ==
          doctest::Approx(expected_lambda[i]).epsilon(1e-8));
    CHECK(report.condition_numbers[static_cast<std::size_t>(i)] ==
          doctest::Approx(expected_cond[i]).epsilon(1e-8));
    CHECK(report.lambda_mins[static_cast<std::size_t>(i)] > 1e-6);
    CHECK(report.biortho_residuals[static_cast<std::size_t>(i)] <= 1e-12);
  }
  CHECK(std::isnan(report.dual_drift[0]));
  CHECK(report.dual_drift[1] == doctest::Approx(0.026945697666571265).epsilon(1e-6));
  CHECK(report.dual_drift[2] == doctest::Approx(0.0004936537430797626).epsilon(1e-6));
  CHECK(report.dual_drift[2] < report.dual_drift[1]);
}

TEST_CASE("diagnostic with a single size is inconclusive") {
  const PointSequence seq = PointSequence::lattice(1, 1.0);
  const std::size_t sizes[1] = {16};
  const rkhs::TruncationReport report = rkhs::determining_diagnostic(kGauss1, seq, sizes);
  CHECK(report.verdict == Verdict::Inconclusive);
  CHECK(report.sizes.size() == 1);
}

TEST_CASE("clustering degrades and truncates the report (frozen fixtures)") {
  // x_n = 1/n accumulates at 0; sections turn numerically singular
  PointSet::Storage rows(16, 1);
  for (int i = 0; i < 16; ++i) rows(i, 0) = 1.0 / static_cast<double>(i + 1);
  const PointSequence seq = PointSequence::explicit_list(PointSet(std::move(rows)));

  const std::size_t sizes[3] = {4, 8, 16};
  const rkhs::TruncationReport report = rkhs::determining_diagnostic(kGauss1, seq, sizes);
  CHECK(report.verdict == Verdict::Degrading);
  REQUIRE(report.failed_size.has_value());
  CHECK(*report.failed_size == 16);
  REQUIRE(report.sizes.size() == 2);
  CHECK(report.lambda_mins[0] == doctest::Approx(6.616882228959164e-05).epsilon(1e-6));
  CHECK(report.lambda_mins[1] <= 1e-12);  // collapsed to roundoff level
}

TEST_CASE("diagnostic input validation") {
  const PointSequence seq = PointSequence::lattice(1, 1.0);
  const std::size_t decreasing[2] = {16, 8};
  CHECK_THROWS_AS(rkhs::determining_diagnostic(kGauss1, seq, decreasing), rkhs::InvalidArgumentError);
  const std::size_t too_big[1] = {4096};
  CHECK_THROWS_AS(rkhs::determining_diagnostic(kGauss1, seq, too_big), rkhs::InvalidArgumentError);
}

TEST_CASE("report serialization") {
  const PointSequence seq = PointSequence::lattice(1, 1.0);
  const std::size_t sizes[3] = {8, 16, 32};
  const rkhs::TruncationReport report = rkhs::determining_diagnostic(kGauss1, seq, sizes);

  const nlohmann::json j = report.to_json();
  CHECK(j.at("verdict") == "stable");
  CHECK(j.at("sizes") == nlohmann::json({8, 16, 32}));
  CHECK(j.at("dual_drift").at(0).is_null());  // NaN maps to null
  CHECK(j.at("lambda_mins").at(2).get<double>() == report.lambda_mins[2]);

  const std::string csv = report.to_csv();
  CHECK(csv.rfind("n,lambda_min,condition,biortho_residual,dual_drift\n", 0) == 0);
  CHECK(csv.find("\n8,") != std::string::npos);
  CHECK(csv.find("nan") != std::string::npos);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
}
