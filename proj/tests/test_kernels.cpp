#include <doctest.h>

#include <nlohmann/json.hpp>

#include "kernels.hpp"
#include "test_helpers.hpp"

using rkhs::KernelSpec;
using rkhs::Point;
using testutil::kExpNeg1;

TEST_CASE("gaussian evaluation") {
  const KernelSpec k1 = KernelSpec::gaussian(1);
  CHECK(k1(Point{0.0}, Point{1.0}) == doctest::Approx(kExpNeg1).epsilon(1e-15));

  const KernelSpec k2 = KernelSpec::gaussian(2);
  CHECK(k2(Point{0.3, -2.0}, Point{0.3, -2.0}) == 1.0);  // zero distance, exactly one

  // shape scales the squared distance
  const KernelSpec wide = KernelSpec::gaussian(1, 0.5);
  CHECK(wide(Point{0.0}, Point{2.0}) == doctest::Approx(kExpNeg1).epsilon(1e-15));
}

TEST_CASE("inverse multiquadric evaluation") {
  const KernelSpec k = KernelSpec::inverse_multiquadric(2);
  CHECK(k(Point{0.0, 0.0}, Point{1.0, 0.0}) == doctest::Approx(0.7071067811865476).epsilon(1e-15));
  CHECK(k(Point{1.5, 2.5}, Point{1.5, 2.5}) == 1.0);
}

TEST_CASE("tensor product evaluation factorizes") {
  const KernelSpec g1 = KernelSpec::gaussian(1);
  const KernelSpec tensor = KernelSpec::tensor_product(g1, g1);
  REQUIRE(tensor.dim() == 2);
  CHECK(tensor(Point{0.0, 0.0}, Point{1.0, 0.0}) == doctest::Approx(kExpNeg1).epsilon(1e-15));
  CHECK(tensor(Point{0.0, 0.0}, Point{1.0, 1.0}) == doctest::Approx(0.1353352832366127).epsilon(1e-15));

  rkhs::UnitRng rng(7);
  const KernelSpec imq = KernelSpec::inverse_multiquadric(2, 0.7);
  const KernelSpec mixed = KernelSpec::tensor_product(g1, imq);
  for (int trial = 0; trial < 200; ++trial) {
    const Point x{rng.symmetric(), rng.symmetric(), rng.symmetric()};
    const Point y{rng.symmetric(), rng.symmetric(), rng.symmetric()};
    const double whole = mixed(x, y);
    const double parts = g1(Point{x[0]}, Point{y[0]}) * imq(Point{x[1], x[2]}, Point{y[1], y[2]});
    CHECK(testutil::rel_error(whole, parts) <= 1e-15);
  }
}

TEST_CASE("symmetry is exact for every variant") {
  rkhs::UnitRng rng(11);
  const KernelSpec variants[] = {
      KernelSpec::gaussian(3, 1.3),
      KernelSpec::inverse_multiquadric(3, 0.6),
      KernelSpec::tensor_product(KernelSpec::gaussian(1), KernelSpec::inverse_multiquadric(2)),
  };
  for (const KernelSpec& k : variants) {
    for (int trial = 0; trial < 1000; ++trial) {
      const Point x{rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)};
      const Point y{rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)};
      // bit equality: the distance accumulation is order-symmetric
      CHECK(k(x, y) == k(y, x));
    }
  }
}

TEST_CASE("values stay in (0, 1] and equal 1 only on the diagonal region") {
  // box kept inside the kernel's numerically active region (no underflow)
  rkhs::UnitRng rng(13);
  const KernelSpec ks[] = {KernelSpec::gaussian(2), KernelSpec::inverse_multiquadric(2, 0.5)};
  for (const KernelSpec& k : ks) {
    for (int trial = 0; trial < 500; ++trial) {
      const Point x{rng.uniform(-6, 6), rng.uniform(-6, 6)};
      const Point y{rng.uniform(-6, 6), rng.uniform(-6, 6)};
      const double v = k(x, y);
      CHECK(v > 0.0);
      CHECK(v <= 1.0);
      CHECK(k(x, x) == 1.0);
    }
  }
}

TEST_CASE("kernel_section matches the Gram rows") {
  const KernelSpec k = KernelSpec::gaussian(1);
  rkhs::PointSet x(rkhs::PointSet::Storage{{0.0}, {1.0}});
  const Eigen::VectorXd section = rkhs::kernel_section(k, Point{0.0}, x);
  REQUIRE(section.size() == 2);
  CHECK(section[0] == 1.0);
  CHECK(section[1] == doctest::Approx(kExpNeg1).epsilon(1e-15));

  rkhs::PointSet single(rkhs::PointSet::Storage{{0.25}});
  const Eigen::VectorXd s1 = rkhs::kernel_section(k, Point{0.25}, single);
  REQUIRE(s1.size() == 1);
  CHECK(s1[0] == 1.0);
}

TEST_CASE("dimension mismatches are rejected") {
  const KernelSpec k = KernelSpec::gaussian(2);
  CHECK_THROWS_AS(k(Point{0.0}, Point{1.0, 2.0}), rkhs::DimensionError);
  CHECK_THROWS_AS(k(Point{0.0, 1.0}, Point{1.0}), rkhs::DimensionError);
  rkhs::PointSet x1d(rkhs::PointSet::Storage{{0.0}, {1.0}});
  CHECK_THROWS_AS(rkhs::kernel_section(k, Point{0.0, 0.0}, x1d), rkhs::DimensionError);
}

TEST_CASE("invalid construction is rejected") {
  CHECK_THROWS_AS(KernelSpec::gaussian(0), rkhs::InvalidArgumentError);
  CHECK_THROWS_AS(KernelSpec::gaussian(1, 0.0), rkhs::InvalidArgumentError);
  CHECK_THROWS_AS(KernelSpec::gaussian(1, -2.0), rkhs::InvalidArgumentError);
  CHECK_THROWS_AS(Point{std::nan("")}, rkhs::InvalidArgumentError);
  CHECK_THROWS_AS(Point{std::numeric_limits<double>::infinity()}, rkhs::InvalidArgumentError);
}

TEST_CASE("nested tensor products accumulate dimensions") {
  const KernelSpec g = KernelSpec::gaussian(1);
  const KernelSpec threefold = KernelSpec::tensor_product(KernelSpec::tensor_product(g, g), g);
  CHECK(threefold.dim() == 3);
  CHECK(threefold.left().dim() == 2);
  CHECK(threefold.right().dim() == 1);
}

TEST_CASE("json round trip and schema validation") {
  const KernelSpec tensor =
      KernelSpec::tensor_product(KernelSpec::gaussian(2, 1.5), KernelSpec::inverse_multiquadric(1));
  const nlohmann::json j = tensor.to_json();
  CHECK(j.at("type") == "tensor");
  CHECK(j.at("dim") == 3);
  CHECK(j.at("left").at("type") == "gaussian");
  CHECK(j.at("left").at("shape") == 1.5);
  CHECK(j.at("right").at("type") == "imq");

  const KernelSpec back = KernelSpec::from_json(j);
  rkhs::UnitRng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const Point x{rng.symmetric(), rng.symmetric(), rng.symmetric()};
    const Point y{rng.symmetric(), rng.symmetric(), rng.symmetric()};
    CHECK(tensor(x, y) == back(x, y));
  }

  // default shape is 1
  CHECK(KernelSpec::from_json(nlohmann::json{{"type", "gaussian"}, {"dim", 2}}).shape() == 1.0);

  CHECK_THROWS_AS(KernelSpec::from_json(nlohmann::json{{"type", "gaussian"}, {"dim", 1}, {"rogue", 1}}),
                  rkhs::ParseError);
  CHECK_THROWS_AS(KernelSpec::from_json(nlohmann::json{{"type", "spline"}, {"dim", 1}}), rkhs::ParseError);
  CHECK_THROWS_AS(KernelSpec::from_json(nlohmann::json{{"type", "gaussian"}}), rkhs::ParseError);
  CHECK_THROWS_AS(KernelSpec::from_json(nlohmann::json::array()), rkhs::ParseError);
  // tensor dim must be consistent when given
  nlohmann::json bad = {{"type", "tensor"},
                        {"dim", 5},
                        {"left", {{"type", "gaussian"}, {"dim", 1}}},
                        {"right", {{"type", "gaussian"}, {"dim", 1}}}};
  CHECK_THROWS_AS(KernelSpec::from_json(bad), rkhs::ParseError);
}
