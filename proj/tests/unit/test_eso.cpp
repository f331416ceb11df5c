#include <bit>
#include <cmath>
#include <functional>
#include <map>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "quartz/errors.hpp"
#include "quartz/eso.hpp"
#include "quartz/synth.hpp"

using namespace quartz;
using doctest::Approx;

namespace {

std::vector<double> squared_norms(const DataMatrix& m) {
  std::vector<double> out(m.cols(), 0.0);
  const auto dense = m.to_dense();
  for (std::size_t i = 0; i < m.cols(); ++i) {
    for (const auto& row : dense) out[i] += row[i] * row[i];
  }
  return out;
}

DataMatrix random_small(std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> n(2, 10), d(1, 8);
  std::uniform_int_distribution<int> dens(1, 10);
  SynthSpec spec;
  spec.n = n(rng);
  spec.d = d(rng);
  spec.density = dens(rng) / 10.0;
  spec.seed = rng();
  return synth_instance(spec);
}

}  // namespace

TEST_CASE("serial v is the squared column norm") {
  const auto m = oracle::example_matrix();
  CHECK(v_serial(m) == std::vector<double>{1, 73, 45, 16, 82});
  CHECK(v_serial(m) == squared_norms(m));
  const auto unit = DataMatrix::from_dense({{0.6, 1, 0}, {0.8, 0, 0}});
  CHECK(v_serial(unit) == std::vector<double>{1.0, 1.0, 0.0});
}

TEST_CASE("tau-nice v on the example matrix") {
  const auto m = oracle::example_matrix();
  const auto v = v_tau_nice(m, 2);
  const std::vector<double> expected = {1.25, 89, 65.25, 24, 122.75};
  for (std::size_t i = 0; i < 5; ++i) CHECK(v[i] == Approx(expected[i]));
  CHECK(v_tau_nice(m, 1) == v_serial(m));
  CHECK_THROWS_AS(v_tau_nice(m, 0), std::invalid_argument);
  CHECK_THROWS_AS(v_tau_nice(m, 6), std::invalid_argument);
}

TEST_CASE("tau-nice v in the sparse and dense extremes") {
  SynthSpec sparse{.n = 16, .d = 64, .density = 2.0 / 64, .profile = OmegaProfile::fully_sparse};
  const auto ms = synth_instance(sparse);
  SynthSpec dense{.n = 8, .d = 5, .density = 1.0, .profile = OmegaProfile::fully_dense};
  const auto md = synth_instance(dense);
  for (std::size_t tau = 1; tau <= 8; ++tau) {
    CHECK(v_tau_nice(ms, tau) == v_serial(ms));
    const auto vd = v_tau_nice(md, tau);
    const auto vs = v_serial(md);
    for (std::size_t i = 0; i < 8; ++i) CHECK(vd[i] == Approx(tau * vs[i]));
  }
}

TEST_CASE("tau-nice v is nondecreasing in tau") {
  std::mt19937_64 rng(8);
  for (int k = 0; k < 100; ++k) {
    const auto m = random_small(rng);
    auto prev = v_tau_nice(m, 1);
    for (std::size_t tau = 2; tau <= m.cols(); ++tau) {
      const auto cur = v_tau_nice(m, tau);
      for (std::size_t i = 0; i < cur.size(); ++i) CHECK(cur[i] >= prev[i]);
      prev = cur;
    }
  }
}

TEST_CASE("product v equals serial v and checks separability") {
  const auto m = oracle::example_matrix();
  CHECK(v_product(m, {{0, 1}, {2, 3, 4}}) == std::vector<double>{1, 73, 45, 16, 82});
  CHECK(v_product(m, {{0, 1, 2, 3, 4}}) == v_serial(m));
  try {
    (void)v_product(m, {{0, 3}, {1, 2, 4}});
    FAIL("expected SeparabilityError");
  } catch (const SeparabilityError& e) {
    CHECK(e.row() == 0);
  }
}

TEST_CASE("distributed v at hand-computed points") {
  const auto two_rows = DataMatrix::from_dense({{1, 1, 0, 0}, {0, 0, 1, 1}});
  const Partition cells = {{0, 1}, {2, 3}};
  CHECK(v_distributed(two_rows, 2, 1, cells) == std::vector<double>{1, 1, 1, 1});
  CHECK(active_cells_per_row(two_rows, cells) == std::vector<std::size_t>{1, 1});

  const auto one_row = DataMatrix::from_dense({{1, 1, 1, 1}});
  CHECK(v_distributed(one_row, 2, 1, cells) == std::vector<double>{2, 2, 2, 2});
  CHECK(active_cells_per_row(one_row, cells) == std::vector<std::size_t>{2});

  CHECK_THROWS_AS(v_distributed(one_row, 3, 1, contiguous_partition(4, 3)), std::invalid_argument);
  CHECK_THROWS_AS(v_distributed(one_row, 2, 3, cells), std::invalid_argument);
}

TEST_CASE("distributed v with one node is tau-nice v bit for bit") {
  std::mt19937_64 rng(13);
  for (int k = 0; k < 200; ++k) {
    const auto m = random_small(rng);
    for (std::size_t tau = 1; tau <= m.cols(); ++tau) {
      CHECK(v_distributed(m, 1, tau, contiguous_partition(m.cols(), 1)) == v_tau_nice(m, tau));
    }
  }
}

TEST_CASE("theta at the documented points") {
  const std::vector<double> v = {1, 73, 45, 16, 82};
  const std::vector<double> p(5, 0.2);
  // lambda gamma n = 82 with n = 5.
  CHECK(theta(p, v, 82.0 / 5.0, 1.0, 5) == Approx(0.1));
  CHECK(theta(p, std::vector<double>(5, 0.0), 0.3, 2.0, 5) == Approx(0.2));
  CHECK(theta(std::vector<double>{1.0}, std::vector<double>{2.0}, 2.0, 1.0, 1) == 0.5);
}

TEST_CASE("importance probabilities") {
  const std::vector<double> v = {1, 73, 45, 16, 82};
  const auto p = importance_probs(v, 83.0 / 5.0, 1.0, 5);
  const std::vector<double> expected = {84, 156, 128, 99, 165};
  for (std::size_t i = 0; i < 5; ++i) CHECK(p[i] == Approx(expected[i] / 632.0));

  const auto flat = importance_probs(std::vector<double>(4, 3.0), 0.1, 1.0, 4);
  for (double x : flat) CHECK(x == Approx(0.25));

  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int k = 0; k < 100; ++k) {
    std::vector<double> vv(2 + k % 30);
    for (auto& x : vv) x = u(rng) * u(rng);
    const double lambda = 0.001 + u(rng) / 10.0;
    const std::size_t n = vv.size();
    const auto pstar = importance_probs(vv, lambda, 1.0, n);
    const double th_star = theta(pstar, vv, lambda, 1.0, n);
    const double th_unif = theta(std::vector<double>(n, 1.0 / n), vv, lambda, 1.0, n);
    CHECK(th_star >= th_unif * (1 - 1e-15));
    double total = 0.0;
    for (double x : vv) total += x + lambda * n;
    CHECK(th_star == Approx(lambda * n / total));
  }
}

TEST_CASE("exact ESO left-hand side in closed cases") {
  const auto m = oracle::example_matrix();
  const std::vector<double> h = {1, -2, 0.5, 3, -1};
  const auto norms = squared_norms(m);
  double serial = 0.0;
  for (std::size_t i = 0; i < 5; ++i) serial += norms[i] * h[i] * h[i] / 5.0;
  CHECK(exact_eso_lhs(m, SamplingScheme::serial_uniform(5), h) == Approx(serial));

  const auto ah = m.times(h);
  double full = 0.0;
  for (double x : ah) full += x * x;
  CHECK(exact_eso_lhs(m, SamplingScheme::tau_nice(5, 5), h) == Approx(full));

  const auto prod = SamplingScheme::product({{0, 1}, {2, 3, 4}});
  const std::vector<double> ones(5, 1.0);
  CHECK(std::abs(exact_eso_lhs(m, prod, ones) - enumerated_eso_lhs(m, prod, ones)) <= 1e-12);
}

TEST_CASE("Hadamard identity agrees with brute force over all subsets") {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> nd;
  for (int k = 0; k < 60; ++k) {
    SynthSpec spec{.n = 6, .d = 5, .density = 0.2 + 0.1 * (k % 8), .seed = static_cast<std::uint64_t>(k)};
    const auto m = synth_instance(spec);
    std::vector<double> h(6);
    for (auto& x : h) x = nd(rng);
    const std::size_t n = 6;

    auto check = [&](const SamplingScheme& s, const std::function<double(unsigned)>& prob) {
      INFO(s.describe());
      const double brute = oracle::brute_expectation(m, h, prob);
      CHECK(std::abs(exact_eso_lhs(m, s, h) - brute) <= 1e-12 * std::max(1.0, brute));
      CHECK(std::abs(enumerated_eso_lhs(m, s, h) - brute) <= 1e-12 * std::max(1.0, brute));
    };
    const std::vector<double> p = {0.05, 0.15, 0.3, 0.1, 0.25, 0.15};
    check(SamplingScheme::serial(p), [&](unsigned mask) {
      return std::popcount(mask) == 1 ? p[std::countr_zero(mask)] : 0.0;
    });
    for (std::size_t tau : {1, 2, 3, 6}) {
      check(SamplingScheme::tau_nice(n, tau), [&](unsigned mask) {
        return static_cast<std::size_t>(std::popcount(mask)) == tau ? 1.0 / oracle::binomial(n, tau) : 0.0;
      });
    }
    const Partition groups = {{0, 4}, {1, 2, 5}, {3}};
    check(SamplingScheme::product(groups), [&](unsigned mask) {
      double pr = 1.0;
      for (const auto& g : groups) {
        if (oracle::popcount_in(mask, g) != 1) return 0.0;
        pr /= static_cast<double>(g.size());
      }
      return pr;
    });
    for (std::size_t tau : {1, 2}) {
      const Partition cells = {{0, 1, 2}, {3, 4, 5}};
      check(SamplingScheme::distributed(cells, tau), [&](unsigned mask) {
        double pr = 1.0;
        for (const auto& c : cells) {
          if (oracle::popcount_in(mask, c) != tau) return 0.0;
          pr /= oracle::binomial(3, tau);
        }
        return pr;
      });
    }
  }
}

TEST_CASE("ESO inequality holds for every scheme on random instances") {
  std::mt19937_64 rng(41);
  std::normal_distribution<double> nd;
  double worst = 0.0;
  for (int k = 0; k < 150; ++k) {
    const auto m = random_small(rng);
    const std::size_t n = m.cols();
    std::vector<SamplingScheme> schemes = {SamplingScheme::serial_uniform(n),
                                           SamplingScheme::tau_nice(n, 2), SamplingScheme::tau_nice(n, n)};
    if (n >= 3) schemes.push_back(SamplingScheme::tau_nice(n, 3));
    if (auto g = detect_product_partition(m)) schemes.push_back(SamplingScheme::product(*g));
    if (n % 2 == 0) {
      schemes.push_back(SamplingScheme::distributed(n, 2, 1));
      if (n >= 4) schemes.push_back(SamplingScheme::distributed(n, 2, 2));
    }
    for (const auto& s : schemes) {
      const auto p = s.inclusion_probs();
      const auto v = v_for_scheme(m, s);
      for (int r = 0; r < 20; ++r) {
        std::vector<double> h(n);
        for (auto& x : h) x = nd(rng);
        const double slack = eso_rhs(p, v, h) - exact_eso_lhs(m, s, h);
        worst = std::min(worst, slack);
      }
    }
  }
  CHECK(worst >= -1e-10);
}

TEST_CASE("eso_params bundles p, v and theta") {
  const auto m = oracle::example_matrix();
  const auto params = eso_params(m, SamplingScheme::tau_nice(5, 2), 0.5, 1.0);
  CHECK(params.lambda_gamma_n == 2.5);
  CHECK(params.v == v_tau_nice(m, 2));
  CHECK(params.theta == Approx(0.4 * 2.5 / (122.75 + 2.5)));
  CHECK(params.theta <= 0.4);
  CHECK(omega_histogram(m) == std::map<std::size_t, std::size_t>{{1, 1}, {2, 2}, {3, 1}});
}
