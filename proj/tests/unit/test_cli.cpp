#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using quartz::cli::run;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome call(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "quartz_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("solve writes a trace and a summary") {
  const auto trace = scratch("trace.csv");
  const auto summary = scratch("summary.json");
  const auto r = call({"solve", "--synth-n", "200", "--synth-d", "40", "--normalize", "--loss", "smoothed-hinge",
                       "--gamma", "1", "--lambda", "1e-3", "--sampling", "tau-nice", "--tau", "8",
                       "--epsilon", "1e-9", "--seed", "1", "--trace", trace.string(), "--summary",
                       summary.string()});
  CHECK(r.code == 0);
  const std::string csv = slurp(trace);
  CHECK(csv.rfind("# config ", 0) == 0);
  CHECK(csv.find("iteration,epoch,primal,dual,gap,wall_ns") != std::string::npos);
  const auto j = nlohmann::json::parse(slurp(summary));
  CHECK(j["status"] == "converged");
  CHECK(j["config"]["seeds"][0] == 1);
  CHECK(j["runs"][0]["gap"].get<double>() <= 1e-9);
  CHECK(j["theta"].get<double>() > 0.0);
}

TEST_CASE("solve runs several seeds") {
  const auto trace = scratch("multi.csv");
  const auto r = call({"solve", "--synth-n", "60", "--synth-d", "20", "--seeds", "3,4",
                       "--trace", trace.string(), "--summary", scratch("multi.json").string()});
  CHECK(r.code == 0);
  CHECK(fs::exists(scratch("multi_seed3.csv")));
  CHECK(fs::exists(scratch("multi_seed4.csv")));
}

TEST_CASE("solve reports non-convergence with exit code 3") {
  const auto r = call({"solve", "--synth-n", "200", "--lambda", "1e-5", "--epsilon", "1e-12",
                       "--max-epochs", "1", "--trace", scratch("nc.csv").string(), "--summary",
                       scratch("nc.json").string()});
  CHECK(r.code == 3);
}

TEST_CASE("usage errors exit with 1") {
  const auto r = call({"solve", "--no-such-flag"});
  CHECK(r.code == 1);
  CHECK(r.err.find("Usage") != std::string::npos);
  CHECK(call({}).code == 1);
  CHECK(call({"solve", "--sampling", "serial", "--tau", "3"}).code == 1);
  CHECK(call({"solve", "--option", "III"}).code == 1);
  CHECK(call({"--help"}).code == 0);
}

TEST_CASE("data errors exit with 2") {
  const auto bad = scratch("bad.svm");
  std::ofstream(bad) << "+1 1:1\n3 1:2\n";
  const auto r = call({"solve", "--data", bad.string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("line 2") != std::string::npos);
  CHECK(call({"eso", "--data", scratch("missing.svm").string()}).code == 2);
}

TEST_CASE("eso emits v, theta and the omega histogram") {
  const auto data = scratch("example.svm");
  // Columns of the 4 x 5 example matrix, one example per line.
  std::ofstream(data) << "+1 4:1\n+1 2:3 4:8\n+1 1:6 3:3\n+1 1:4\n+1 1:9 3:1\n";
  const auto r = call({"eso", "--data", data.string(), "--sampling", "tau-nice", "--tau", "2",
                       "--lambda", "0.2"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  const std::vector<double> v = j["v"];
  const std::vector<double> expected = {1.25, 89, 65.25, 24, 122.75};
  REQUIRE(v.size() == expected.size());
  for (std::size_t i = 0; i < v.size(); ++i) CHECK(v[i] == doctest::Approx(expected[i]));
  CHECK(j["omega_histogram"]["2"] == 2);
  CHECK(j["theta"].get<double>() == doctest::Approx(0.4 * 1.0 / (122.75 + 1.0)));
}

TEST_CASE("speedup on fully sparse data is linear in tau") {
  const auto r = call({"speedup", "--sampling", "tau-nice", "--tau-list", "1,2,4,8",
                       "--synth-profile", "fully-sparse", "--synth-n", "64", "--synth-d", "256",
                       "--synth-density", "0.0078125"});
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  std::string line;
  std::vector<std::pair<double, double>> rows;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line[0] == 't') continue;
    double tau = 0, theory = 0;
    char comma;
    std::istringstream ls(line);
    ls >> tau >> comma >> theory;
    rows.emplace_back(tau, theory);
  }
  REQUIRE(rows.size() == 4);
  for (const auto& [tau, theory] : rows) CHECK(theory == doctest::Approx(tau));
}

TEST_CASE("speedup measures practical factors and distributed contours") {
  const auto r = call({"speedup", "--sampling", "tau-nice", "--tau-list", "2", "--practical",
                       "--seeds", "3", "--synth-profile", "fully-sparse", "--synth-n", "64",
                       "--synth-d", "256", "--synth-density", "0.0078125", "--epsilon", "1e-4"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("2,2,") != std::string::npos);

  const auto csv = scratch("contour.csv");
  const auto d = call({"speedup", "--sampling", "distributed", "--synth-n", "64", "--synth-d", "30",
                       "--nodes-list", "1,2,4", "--tau-list", "1,2", "--out", csv.string()});
  REQUIRE(d.code == 0);
  const std::string text = slurp(csv);
  CHECK(text.find("c,tau,T_ctau,speedup") != std::string::npos);
  CHECK(text.find("\n4,2,") != std::string::npos);
}

TEST_CASE("detect-groups writes a partition file") {
  const auto data = scratch("groups.svm");
  std::ofstream(data) << "+1 4:1\n+1 2:3 4:8\n+1 1:6 3:3\n+1 1:4\n+1 1:9 3:1\n";
  const auto out = scratch("groups.txt");
  CHECK(call({"detect-groups", "--data", data.string(), "--out", out.string()}).code == 0);
  CHECK(slurp(out) == "0 1\n2 3 4\n");

  const auto solved = call({"solve", "--data", data.string(), "--sampling", "product",
                            "--partition", out.string(), "--trace", scratch("p.csv").string(),
                            "--summary", scratch("p.json").string()});
  CHECK(solved.code == 0);

  const auto dense = scratch("dense.svm");
  std::ofstream(dense) << "+1 1:1 2:1\n-1 1:2\n";
  const auto none = call({"detect-groups", "--data", dense.string()});
  CHECK(none.code == 0);
  CHECK(none.out.find("no product partition") != std::string::npos);
}

TEST_CASE("verify runs the property suite") {
  const auto r = call({"verify", "--instances", "5", "--vectors", "3", "--runs", "20"});
  CHECK(r.code == 0);
  CHECK(r.out.find("PASS eso-certification") != std::string::npos);
}
