#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "io.hpp"
#include "linalg.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return text;
}

struct Workspace {
  fs::path dir;

  Workspace() {
    dir = fs::temp_directory_path() / ("rkhs_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter()));
    fs::create_directories(dir);
  }
  ~Workspace() { fs::remove_all(dir); }

  static int counter() {
    static int n = 0;
    return n++;
  }

  std::string file(const std::string& name, const std::string& content) const {
    const fs::path p = dir / name;
    std::ofstream out(p, std::ios::binary);
    out << content;
    return p.string();
  }
  std::string path(const std::string& name) const { return (dir / name).string(); }

  RunResult run(const std::string& args) const {
    const std::string out_file = path("stdout.txt");
    const std::string err_file = path("stderr.txt");
    const std::string cmd =
        std::string(RKHS_CLI_PATH) + " " + args + " > '" + out_file + "' 2> '" + err_file + "'";
    const int raw = std::system(cmd.c_str());
    RunResult result;
    result.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    result.out = slurp(out_file);
    result.err = slurp(err_file);
    return result;
  }
};

const char* kGaussJson = "{\"type\":\"gaussian\",\"dim\":1,\"shape\":1.0}\n";
const char* kTrainCsv = "x1,f\n0,1\n1,0\n";

}  // namespace

TEST_CASE("gram: golden output and bit-exact round trip") {
  Workspace ws;
  const std::string kernel = ws.file("kernel.json", kGaussJson);
  const std::string points = ws.file("train.csv", kTrainCsv);
  const RunResult r = ws.run("gram --kernel " + kernel + " --points " + points + " --out " + ws.path("out"));
  REQUIRE(r.exit_code == 0);

  const std::string gram_text = slurp(ws.path("out/gram.csv"));
  CHECK(gram_text == "1,0.36787944117144233\n0.36787944117144233,1\n");

  // re-parsed matrix equals the in-memory assembly bit for bit
  const Eigen::MatrixXd parsed = rkhs::io::parse_gram_csv(gram_text, "gram.csv");
  const rkhs::GramMatrix direct(rkhs::KernelSpec::gaussian(1),
                                rkhs::PointSet(rkhs::PointSet::Storage{{0.0}, {1.0}}));
  CHECK(parsed == direct.entries());

  const std::string riesz = slurp(ws.path("out/riesz.json"));
  CHECK(riesz.find("\"lambda_min\"") != std::string::npos);
  CHECK(riesz.find("\"condition\"") != std::string::npos);
}

TEST_CASE("fit: worked-example predictions") {
  Workspace ws;
  const std::string kernel = ws.file("kernel.json", kGaussJson);
  const std::string points = ws.file("train.csv", kTrainCsv);
  const std::string probes = ws.file("probes.csv", "x1\n0.5\n0\n1\n");
  const RunResult r = ws.run("fit --kernel " + kernel + " --points " + points + " --probes " + probes + " --out " +
                             ws.path("out"));
  REQUIRE(r.exit_code == 0);

  const std::string predictions = slurp(ws.path("out/predictions.csv"));
  CHECK(predictions.rfind("x1,f\n", 0) == 0);
  // probe value from the closed-form 2x2 solve; training nodes reproduce f
  CHECK(predictions.find("\n0,1\n") != std::string::npos);
  CHECK(predictions.find("\n1,0\n") != std::string::npos);
  std::istringstream lines(predictions);
  std::string header, first;
  std::getline(lines, header);
  std::getline(lines, first);
  const double value = std::strtod(first.substr(first.find(',') + 1).c_str(), nullptr);
  CHECK(value == doctest::Approx(0.5693489935081161).epsilon(1e-12));

  // probes with an f column are rejected
  const RunResult bad = ws.run("fit --kernel " + kernel + " --points " + points + " --probes " + points + " --out " +
                               ws.path("out2"));
  CHECK(bad.exit_code == 2);
}

TEST_CASE("determinism: identical bytes across runs") {
  Workspace ws;
  const std::string kernel = ws.file("kernel.json", "{\"type\":\"gaussian\",\"dim\":2,\"shape\":1.0}\n");
  const std::string gen = ws.file("gen.json", "{\"type\":\"random\",\"dim\":2,\"min_separation\":0.5,\"low\":0,\"high\":8}");
  const std::string args = "determining --kernel " + kernel + " --generator " + gen + " --sizes 5,10,20";

  REQUIRE(ws.run(args + " --seed 99 --out " + ws.path("a")).exit_code == 0);
  REQUIRE(ws.run(args + " --seed 99 --out " + ws.path("b")).exit_code == 0);
  CHECK(slurp(ws.path("a/report.json")) == slurp(ws.path("b/report.json")));
  CHECK(slurp(ws.path("a/report.csv")) == slurp(ws.path("b/report.csv")));

  // a different seed changes the sampled points and hence the report
  REQUIRE(ws.run(args + " --seed 100 --out " + ws.path("c")).exit_code == 0);
  CHECK(slurp(ws.path("a/report.csv")) != slurp(ws.path("c/report.csv")));
}

TEST_CASE("exit codes follow the contract") {
  Workspace ws;
  const std::string kernel = ws.file("kernel.json", kGaussJson);

  SUBCASE("parse error, with both duplicate rows named") {
    const std::string dup = ws.file("dup.csv", "x1,f\n0,1\n1,0\n0,2\n");
    const RunResult r = ws.run("gram --kernel " + kernel + " --points " + dup + " --out " + ws.path("out"));
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("rows 2 and 4") != std::string::npos);
    CHECK(!fs::exists(ws.path("out/gram.csv")));  // no partial outputs
  }

  SUBCASE("missing input file") {
    const RunResult r = ws.run("gram --kernel " + kernel + " --points " + ws.path("nope.csv") + " --out " + ws.path("out"));
    CHECK(r.exit_code == 2);
  }

  SUBCASE("bad header") {
    const std::string bad = ws.file("bad.csv", "a,b\n0,1\n");
    CHECK(ws.run("gram --kernel " + kernel + " --points " + bad).exit_code == 2);
  }

  SUBCASE("not positive definite names the pivot") {
    const std::string collapse = ws.file("collapse.csv", "x1\n0\n1e-18\n");
    const RunResult r = ws.run("gram --kernel " + kernel + " --points " + collapse + " --out " + ws.path("out"));
    CHECK(r.exit_code == 3);
    CHECK(r.err.find("pivot 1") != std::string::npos);
  }

  SUBCASE("degrading diagnostic exits 4 but still writes the report") {
    const std::string gen = ws.file("cluster.json",
                                    "{\"type\":\"explicit\",\"points\":[[1.0],[0.5],[0.3333333333333333],[0.25],"
                                    "[0.2],[0.16666666666666666],[0.14285714285714285],[0.125],"
                                    "[0.1111111111111111],[0.1],[0.09090909090909091],[0.08333333333333333],"
                                    "[0.07692307692307693],[0.07142857142857142],[0.06666666666666667],[0.0625]]}");
    const RunResult r =
        ws.run("determining --kernel " + kernel + " --generator " + gen + " --sizes 4,8,16 --out " + ws.path("out"));
    CHECK(r.exit_code == 4);
    CHECK(r.out.find("degrading") != std::string::npos);
    CHECK(slurp(ws.path("out/report.json")).find("\"failed_size\": 16") != std::string::npos);
  }

  SUBCASE("unknown tolerance name") {
    const std::string points = ws.file("train.csv", kTrainCsv);
    const RunResult r =
        ws.run("gram --kernel " + kernel + " --points " + points + " --tol typo=3 --out " + ws.path("out"));
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("typo") != std::string::npos);
  }
}

TEST_CASE("stability and bench commands produce their files") {
  Workspace ws;
  const std::string kernel = ws.file("kernel.json", kGaussJson);
  const std::string points = ws.file("train.csv", kTrainCsv);

  REQUIRE(ws.run("stability --kernel " + kernel + " --points " + points + " --out " + ws.path("out")).exit_code == 0);
  const std::string stability = slurp(ws.path("out/stability.json"));
  CHECK(stability.find("\"dual\"") != std::string::npos);
  CHECK(stability.find("\"primal\"") != std::string::npos);
  CHECK(stability.find("\"ok\": true") != std::string::npos);

  REQUIRE(ws.run("bench --sizes 2,3x4 --trials 1 --out " + ws.path("out")).exit_code == 0);
  const std::string bench = slurp(ws.path("out/bench.csv"));
  CHECK(bench.rfind("n,m,t_tensor_ms,t_dense_ms,speedup,dense_skipped\n", 0) == 0);
  CHECK(bench.find("\n3,4,") != std::string::npos);

  // budget override through --tol marks the dense column as skipped
  REQUIRE(ws.run("bench --sizes 3x4 --trials 1 --tol dense_budget=11 --out " + ws.path("small")).exit_code == 0);
  CHECK(slurp(ws.path("small/bench.csv")).find(",1\n") != std::string::npos);
}

TEST_CASE("tensor command matches the dense fit") {
  Workspace ws;
  const std::string kernel = ws.file(
      "tensor.json",
      "{\"type\":\"tensor\",\"left\":{\"type\":\"gaussian\",\"dim\":1},\"right\":{\"type\":\"gaussian\",\"dim\":1}}");
  const std::string gx = ws.file("gx.csv", "x1\n0\n1\n2\n");
  const std::string gy = ws.file("gy.csv", "x1\n0\n0.5\n");
  const std::string samples = ws.file("f.csv", "3,2\n1,0\n0,0\n0,0\n");
  const std::string probes = ws.file("probes.csv", "x1,x2\n0,0\n1,0.5\n0.3,0.2\n");

  const RunResult r = ws.run("tensor --kernel " + kernel + " --grid-x " + gx + " --grid-y " + gy + " --samples " +
                             samples + " --probes " + probes + " --out " + ws.path("out"));
  REQUIRE(r.exit_code == 0);
  const std::string predictions = slurp(ws.path("out/predictions.csv"));
  CHECK(predictions.rfind("x1,x2,f\n", 0) == 0);

  // non-tensor kernel is a config error
  const std::string plain = ws.file("plain.json", kGaussJson);
  CHECK(ws.run("tensor --kernel " + plain + " --grid-x " + gx + " --grid-y " + gy + " --samples " + samples +
               " --probes " + probes)
            .exit_code == 2);

  // sample matrix shape must match the grid
  const std::string wrong = ws.file("wrong.csv", "2,2\n1,0\n0,0\n");
  CHECK(ws.run("tensor --kernel " + kernel + " --grid-x " + gx + " --grid-y " + gy + " --samples " + wrong +
               " --probes " + probes)
            .exit_code == 2);
}

TEST_CASE("point file parser edge cases") {
  using rkhs::io::parse_point_file;
  CHECK_THROWS_AS(parse_point_file("x1,f\n", "t"), rkhs::ParseError);          // no data rows
  CHECK_THROWS_AS(parse_point_file("x1,x2\n1\n", "t"), rkhs::ParseError);      // ragged row
  CHECK_THROWS_AS(parse_point_file("x1\nnan\n", "t"), rkhs::ParseError);       // non-finite
  CHECK_THROWS_AS(parse_point_file("x1\nabc\n", "t"), rkhs::ParseError);       // not a number
  CHECK_THROWS_AS(parse_point_file("f,x1\n0,1\n", "t"), rkhs::ParseError);     // f must be last
  CHECK_THROWS_AS(parse_point_file("x2,x1\n0,1\n", "t"), rkhs::ParseError);    // column order

  // windows line endings and blank lines are tolerated
  const rkhs::io::PointFile file = parse_point_file("x1,f\r\n0,1\r\n\r\n1,0\r\n", "t");
  CHECK(file.points.size() == 2);
  REQUIRE(file.samples.has_value());
  CHECK((*file.samples)[0] == 1.0);
}
