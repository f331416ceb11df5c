#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "quartz/eso.hpp"
#include "quartz/errors.hpp"
#include "quartz/libsvm.hpp"
#include "quartz/synth.hpp"

using namespace quartz;
using doctest::Approx;

namespace {

LoadedData parse(const std::string& text, LibsvmOptions opt = {}) {
  std::istringstream in(text);
  return read_libsvm(in, opt);
}

std::size_t error_line(const std::string& text, LibsvmOptions opt = {}) {
  try {
    parse(text, opt);
  } catch (const DataError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST_CASE("LIBSVM parsing with label folding") {
  const auto one = parse("+1 1:3 2:4\n");
  CHECK(one.matrix.cols() == 1);
  CHECK(one.matrix.rows() == 2);
  CHECK(v_serial(one.matrix)[0] == 25.0);

  LibsvmOptions norm;
  norm.normalize = true;
  const auto unit = parse("+1 1:3 2:4\n", norm);
  CHECK(unit.matrix.col_values(0)[0] == Approx(0.6));
  CHECK(unit.matrix.col_values(0)[1] == Approx(0.8));
  CHECK(v_serial(unit.matrix)[0] == Approx(1.0));

  const auto neg = parse("-1 1:2\n");
  CHECK(neg.matrix.col_values(0)[0] == -2.0);
  CHECK(neg.labels == std::vector<int>{-1});
}

TEST_CASE("LIBSVM comments, blank lines and declared feature counts") {
  LibsvmOptions opt;
  opt.features = 5;
  const auto d = parse("# header\n\n+1 2:1.5 # trailing\n-1 5:2\n", opt);
  CHECK(d.matrix.cols() == 2);
  CHECK(d.matrix.rows() == 5);
  CHECK(d.labels == std::vector<int>{1, -1});
}

TEST_CASE("LIBSVM errors carry the line number") {
  CHECK(error_line("+1 1:1\n+1 2:x\n") == 2);
  CHECK(error_line("+1 1:1\n\n2 1:1\n") == 3);
  CHECK(error_line("+1 0:1\n") == 1);
  CHECK(error_line("+1 1-1\n") == 1);
  LibsvmOptions opt;
  opt.features = 3;
  CHECK(error_line("+1 1:1\n-1 4:1\n", opt) == 2);
  CHECK_THROWS_AS(parse(""), DataError);
  CHECK_THROWS_AS(load_libsvm("/nonexistent/file.svm"), DataError);
}

TEST_CASE("duplicate features keep the last value with a warning") {
  const auto d = parse("+1 1:1 3:2 1:5\n");
  CHECK(d.matrix.col_values(0)[0] == 5.0);
  CHECK(d.warnings.size() == 1);
}

TEST_CASE("write then read reproduces the matrix exactly") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    SynthSpec spec{.n = 40, .d = 25, .density = 0.3, .seed = seed};
    const auto m = synth_instance(spec);
    std::stringstream buf;
    write_libsvm(buf, m);
    LibsvmOptions opt;
    opt.features = 25;
    CHECK(read_libsvm(buf, opt).matrix == m);
  }
  const auto odd = DataMatrix::from_dense({{1e-300, 0.1}, {-3.141592653589793, 1e300}});
  std::stringstream buf;
  write_libsvm(buf, odd);
  CHECK(read_libsvm(buf).matrix == odd);
}

TEST_CASE("normalization is idempotent") {
  SynthSpec spec{.n = 50, .d = 20, .density = 0.3, .seed = 4};
  const auto once = normalize_columns(synth_instance(spec));
  CHECK(normalize_columns(once) == once);
  for (double v : v_serial(once)) CHECK(v == Approx(1.0));
}

TEST_CASE("partition files round trip") {
  const Partition p = {{0, 4, 2}, {1}, {3, 5}};
  std::stringstream buf;
  write_partition(buf, p);
  CHECK(read_partition(buf) == p);
  std::istringstream bad("0 1\n2 x\n");
  CHECK_THROWS_AS(read_partition(bad), DataError);
}

TEST_CASE("synthetic profiles") {
  SynthSpec sparse{.n = 8, .d = 64, .density = 1.0 / 64, .profile = OmegaProfile::fully_sparse};
  const auto ms = synth_instance(sparse);
  for (auto w : ms.row_nnz()) CHECK(w <= 1);
  for (std::size_t i = 0; i < 8; ++i) CHECK(ms.col_rows(i).size() == 1);

  SynthSpec dense{.n = 8, .d = 4, .density = 1.0, .profile = OmegaProfile::fully_dense};
  const auto md = synth_instance(dense);
  for (auto w : md.row_nnz()) CHECK(w == 8);

  SynthSpec uni{.n = 30, .d = 10, .density = 0.05};
  const auto mu = synth_instance(uni);
  for (std::size_t i = 0; i < 30; ++i) CHECK(mu.col_rows(i).size() >= 1);

  SynthSpec too_many{.n = 10, .d = 20, .density = 0.2, .profile = OmegaProfile::fully_sparse};
  CHECK_THROWS_AS(synth_instance(too_many), std::invalid_argument);
  CHECK(parse_omega_profile("fully-sparse") == OmegaProfile::fully_sparse);
  CHECK_THROWS_AS(parse_omega_profile("diagonal"), std::invalid_argument);
}

TEST_CASE("synthetic data is reproducible byte for byte") {
  SynthSpec spec{.n = 100, .d = 30, .density = 0.2, .seed = 42};
  std::stringstream a, b;
  write_libsvm(a, synth_instance(spec));
  write_libsvm(b, synth_instance(spec));
  CHECK(a.str() == b.str());
  spec.seed = 43;
  std::stringstream c;
  write_libsvm(c, synth_instance(spec));
  CHECK(a.str() != c.str());
}
