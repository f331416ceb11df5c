#include <cmath>
#include <map>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "quartz/errors.hpp"
#include "quartz/sampling.hpp"

using namespace quartz;
using doctest::Approx;

TEST_CASE("inclusion probabilities per variant") {
  CHECK(SamplingScheme::tau_nice(5, 2).inclusion_probs() == std::vector<double>(5, 0.4));
  const auto prod = SamplingScheme::product({{0, 1}, {2, 3, 4}});
  const auto p = prod.inclusion_probs();
  CHECK(p[0] == 0.5);
  CHECK(p[1] == 0.5);
  CHECK(p[2] == Approx(1.0 / 3));
  CHECK(p[4] == Approx(1.0 / 3));
  CHECK(SamplingScheme::distributed(4, 2, 1).inclusion_probs() == std::vector<double>(4, 0.5));
  CHECK(SamplingScheme::serial_uniform(4).inclusion_probs() == std::vector<double>(4, 0.25));
}

TEST_CASE("improper or inconsistent schemes are rejected") {
  CHECK_THROWS_AS(SamplingScheme::serial({1.0, 0.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(SamplingScheme::serial({0.5, 0.4}), std::invalid_argument);
  CHECK_THROWS_AS(SamplingScheme::tau_nice(5, 0), std::invalid_argument);
  CHECK_THROWS_AS(SamplingScheme::tau_nice(5, 6), std::invalid_argument);
  CHECK_THROWS_AS(SamplingScheme::product({{0, 1}, {1, 2}}), std::invalid_argument);
  CHECK_THROWS_AS(SamplingScheme::product({{0, 1}, {}}), std::invalid_argument);
  CHECK_THROWS_AS(SamplingScheme::product({{0, 1}, {3}}), std::invalid_argument);
  CHECK_THROWS_AS(SamplingScheme::distributed(5, 2, 1), std::invalid_argument);
  CHECK_THROWS_AS(SamplingScheme::distributed(4, 2, 3), std::invalid_argument);
  CHECK_THROWS_AS(SamplingScheme::distributed({{0, 1, 2}, {3}}, 1), std::invalid_argument);
}

TEST_CASE("tau-nice with tau = n always returns everything") {
  Rng rng = make_rng(1);
  Sampler s(SamplingScheme::tau_nice(6, 6));
  for (int k = 0; k < 50; ++k) {
    auto set = s.draw(rng);
    CHECK(std::vector<std::size_t>(set.begin(), set.end()) ==
          std::vector<std::size_t>{0, 1, 2, 3, 4, 5});
  }
}

TEST_CASE("tau-nice pair frequencies are uniform") {
  Rng rng = make_rng(2024);
  Sampler s(SamplingScheme::tau_nice(5, 2));
  std::map<std::pair<std::size_t, std::size_t>, int> counts;
  const int draws = 100000;
  for (int k = 0; k < draws; ++k) {
    auto set = s.draw(rng);
    REQUIRE(set.size() == 2);
    REQUIRE(set[0] < set[1]);
    ++counts[{set[0], set[1]}];
  }
  CHECK(counts.size() == 10);
  const double sigma = std::sqrt(draws * 0.1 * 0.9);
  for (const auto& [pair, c] : counts) CHECK(std::abs(c - draws * 0.1) <= 3 * sigma);
}

TEST_CASE("serial importance draws follow the probabilities") {
  Rng rng = make_rng(9);
  const std::vector<double> p = {0.1, 0.2, 0.3, 0.4};
  Sampler s(SamplingScheme::serial(p));
  std::vector<int> counts(4, 0);
  const int draws = 100000;
  for (int k = 0; k < draws; ++k) ++counts[s.draw(rng)[0]];
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(std::abs(counts[i] - draws * p[i]) <= 4 * std::sqrt(draws * p[i] * (1 - p[i])));
  }
}

TEST_CASE("product draws take one index from each group") {
  Rng rng = make_rng(3);
  const Partition groups = {{0, 3}, {1, 4, 5}, {2}};
  Sampler s(SamplingScheme::product(groups));
  for (int k = 0; k < 1000; ++k) {
    auto set = s.draw(rng);
    REQUIRE(set.size() == 3);
    for (const auto& g : groups) {
      int hits = 0;
      for (std::size_t i : set) hits += std::count(g.begin(), g.end(), i);
      CHECK(hits == 1);
    }
  }
}

TEST_CASE("distributed draws take tau distinct indices from each cell") {
  Rng rng = make_rng(4);
  Sampler s(SamplingScheme::distributed(12, 3, 2));
  for (int k = 0; k < 1000; ++k) {
    auto set = s.draw(rng);
    REQUIRE(set.size() == 6);
    CHECK(std::set<std::size_t>(set.begin(), set.end()).size() == 6);
    for (std::size_t cell = 0; cell < 3; ++cell) {
      const auto in_cell = std::count_if(set.begin(), set.end(), [&](std::size_t i) {
        return i / 4 == cell;
      });
      CHECK(in_cell == 2);
    }
  }
}

TEST_CASE("draws are reproducible from the seed") {
  const auto scheme = SamplingScheme::distributed(20, 4, 3);
  Rng a = make_rng(77);
  Rng b = make_rng(77);
  Rng c = make_rng(78);
  Sampler sa(scheme), sb(scheme), sc(scheme);
  bool any_diff = false;
  for (int k = 0; k < 100; ++k) {
    auto x = sa.draw(a);
    std::vector<std::size_t> xs(x.begin(), x.end());
    auto y = sb.draw(b);
    CHECK(xs == std::vector<std::size_t>(y.begin(), y.end()));
    auto z = sc.draw(c);
    any_diff = any_diff || xs != std::vector<std::size_t>(z.begin(), z.end());
  }
  CHECK(any_diff);
}

TEST_CASE("enumerated distributions") {
  const auto serial = enumerate_distribution(SamplingScheme::serial({0.2, 0.3, 0.5}));
  REQUIRE(serial.size() == 3);
  CHECK(serial[2].indices == std::vector<std::size_t>{2});
  CHECK(serial[2].prob == 0.5);

  const auto nice = enumerate_distribution(SamplingScheme::tau_nice(4, 2));
  CHECK(nice.size() == 6);
  for (const auto& s : nice) CHECK(s.prob == Approx(1.0 / 6));

  const auto prod = enumerate_distribution(SamplingScheme::product({{0, 1}, {2, 3, 4}}));
  CHECK(prod.size() == 6);
  for (const auto& s : prod) CHECK(s.prob == Approx(1.0 / 6));

  CHECK_THROWS_AS(enumerate_distribution(SamplingScheme::tau_nice(40, 20)), SupportTooLargeError);
}

std::vector<SamplingScheme> small_schemes() {
  return {
      SamplingScheme::serial({0.1, 0.2, 0.3, 0.1, 0.2, 0.1}),
      SamplingScheme::serial_uniform(6),
      SamplingScheme::tau_nice(6, 1),
      SamplingScheme::tau_nice(6, 3),
      SamplingScheme::tau_nice(6, 6),
      SamplingScheme::product({{0, 4}, {1, 2, 5}, {3}}),
      SamplingScheme::distributed(6, 2, 2),
      SamplingScheme::distributed(6, 3, 1),
      SamplingScheme::distributed({{0, 5, 2}, {1, 3, 4}}, 2),
  };
}

TEST_CASE("enumerated marginals and pair probabilities agree with closed forms") {
  for (const auto& scheme : small_schemes()) {
    INFO(scheme.describe());
    const auto support = enumerate_distribution(scheme);
    CHECK(support.size() == static_cast<std::size_t>(support_size(scheme)));
    const std::size_t n = scheme.n();
    std::vector<double> marg(n, 0.0);
    std::vector<std::vector<double>> pair(n, std::vector<double>(n, 0.0));
    double mass = 0.0;
    double size = 0.0;
    for (const auto& ws : support) {
      mass += ws.prob;
      size += ws.prob * static_cast<double>(ws.indices.size());
      for (std::size_t i : ws.indices) {
        marg[i] += ws.prob;
        for (std::size_t k : ws.indices) pair[i][k] += ws.prob;
      }
    }
    CHECK(std::abs(mass - 1.0) <= 1e-12);
    CHECK(size == Approx(scheme.expected_size()));
    const auto p = scheme.inclusion_probs();
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(std::abs(marg[i] - p[i]) <= 1e-12);
      for (std::size_t k = 0; k < n; ++k) {
        CHECK(std::abs(pair[i][k] - scheme.pair_inclusion_prob(i, k)) <= 1e-12);
      }
    }
  }
}

TEST_CASE("tau-nice with tau = 1 is serial uniform") {
  const auto a = enumerate_distribution(SamplingScheme::tau_nice(7, 1));
  const auto b = enumerate_distribution(SamplingScheme::serial_uniform(7));
  REQUIRE(a.size() == b.size());
  for (std::size_t q = 0; q < a.size(); ++q) {
    CHECK(a[q].indices == b[q].indices);
    CHECK(a[q].prob == Approx(b[q].prob));
  }
}

TEST_CASE("empirical draw frequencies match the enumerated distribution") {
  for (const auto& scheme : small_schemes()) {
    INFO(scheme.describe());
    std::map<std::vector<std::size_t>, double> expected;
    for (const auto& ws : enumerate_distribution(scheme)) expected[ws.indices] = ws.prob;
    Rng rng = make_rng(5);
    Sampler sampler(scheme);
    std::map<std::vector<std::size_t>, int> counts;
    const int draws = 40000;
    for (int k = 0; k < draws; ++k) {
      auto set = sampler.draw(rng);
      ++counts[std::vector<std::size_t>(set.begin(), set.end())];
    }
    for (const auto& [set, c] : counts) REQUIRE(expected.count(set) == 1);
    for (const auto& [set, p] : expected) {
      const double sd = std::sqrt(draws * p * (1 - p));
      CHECK(std::abs(counts[set] - draws * p) <= 4.5 * sd + 1);
    }
  }
}

TEST_CASE("product partition detection") {
  const auto groups = detect_product_partition(oracle::example_matrix());
  REQUIRE(groups.has_value());
  CHECK(*groups == Partition{{0, 1}, {2, 3, 4}});

  const auto dense = DataMatrix::from_dense({{1, 2, 3}, {4, 5, 6}});
  CHECK_FALSE(detect_product_partition(dense).has_value());

  // Three diagonal blocks with interleaved column order.
  const auto blocks = DataMatrix::from_dense({
      {1, 0, 0, 2, 0, 0},
      {0, 3, 0, 0, 1, 0},
      {0, 0, 5, 0, 0, 0},
      {0, 0, 1, 0, 0, 7},
  });
  const auto found = detect_product_partition(blocks);
  REQUIRE(found.has_value());
  CHECK(*found == Partition{{0, 3}, {1, 4}, {2, 5}});
  CHECK_FALSE(find_separability_violation(blocks, *found).has_value());
}

TEST_CASE("separability violations name the row") {
  const auto m = oracle::example_matrix();
  CHECK(find_separability_violation(m, {{0, 3}, {1, 2, 4}}) == std::optional<std::size_t>(0));
  CHECK(find_separability_violation(m, {{0, 2}, {1, 3, 4}}) == std::optional<std::size_t>(0));
  CHECK_FALSE(find_separability_violation(m, {{0, 1}, {2, 3, 4}}).has_value());
  CHECK_FALSE(find_separability_violation(m, {{0, 1, 2, 3, 4}}).has_value());
}

TEST_CASE("balancing merges whole components") {
  const Partition comps = {{0}, {1, 2, 3}, {4, 5}, {6}, {7, 8}};
  const auto two = balance_partition(comps, 2);
  REQUIRE(two.size() == 2);
  std::size_t total = 0;
  for (const auto& g : two) total += g.size();
  CHECK(total == 9);
  CHECK(std::abs(static_cast<long>(two[0].size()) - static_cast<long>(two[1].size())) <= 1);
  CHECK(balance_partition(comps, 10) == comps);
  CHECK_THROWS_AS(balance_partition(comps, 0), std::invalid_argument);
  validate_partition(two, 9);
}

TEST_CASE("contiguous partitions") {
  CHECK(contiguous_partition(6, 3) == Partition{{0, 1}, {2, 3}, {4, 5}});
  CHECK_THROWS_AS(contiguous_partition(2, 3), std::invalid_argument);
}
