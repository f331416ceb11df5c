#pragma once

#include <cstddef>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "quartz/data_matrix.hpp"
#include "quartz/random.hpp"

namespace quartz {

/// Disjoint groups of example indices (0-based).
using Partition = std::vector<std::vector<std::size_t>>;

/// Random subset of [n] used to pick the dual blocks updated per iteration.
/// All four variants are proper: every index has positive inclusion
/// probability. Construction validates the variant and throws
/// std::invalid_argument otherwise.
class SamplingScheme {
 public:
  enum class Kind { serial, tau_nice, product, distributed };

  struct Serial {
    std::vector<double> probs;
    bool uniform = false;
  };
  struct TauNice {
    std::size_t tau;
  };
  struct Product {
    Partition groups;
    std::vector<std::size_t> group_of;
  };
  struct Distributed {
    std::size_t tau;
    Partition cells;
    std::vector<std::size_t> cell_of;
  };

  static SamplingScheme serial_uniform(std::size_t n);
  static SamplingScheme serial(std::vector<double> probs);
  static SamplingScheme tau_nice(std::size_t n, std::size_t tau);
  static SamplingScheme product(Partition groups);
  /// Contiguous equal cells {0..n/c-1}, {n/c..2n/c-1}, ...
  static SamplingScheme distributed(std::size_t n, std::size_t nodes,
                                    std::size_t tau);
  static SamplingScheme distributed(Partition cells, std::size_t tau);

  Kind kind() const noexcept;
  std::size_t n() const noexcept { return n_; }
  std::string describe() const;

  /// tau for tau-nice and distributed, the group count for product, 1 for serial.
  std::size_t tau() const noexcept;
  /// Node count c for distributed, 1 otherwise.
  std::size_t nodes() const noexcept;
  /// Groups (product) or cells (distributed); empty for the other kinds.
  const Partition& partition() const noexcept;

  const Serial* as_serial() const noexcept { return std::get_if<Serial>(&variant_); }
  const TauNice* as_tau_nice() const noexcept { return std::get_if<TauNice>(&variant_); }
  const Product* as_product() const noexcept { return std::get_if<Product>(&variant_); }
  const Distributed* as_distributed() const noexcept {
    return std::get_if<Distributed>(&variant_);
  }

  /// p_i = P(i in S).
  std::vector<double> inclusion_probs() const;
  /// E|S|.
  double expected_size() const;
  /// P(i in S and k in S); equals p_i when i == k.
  double pair_inclusion_prob(std::size_t i, std::size_t k) const;

 private:
  using Variant = std::variant<Serial, TauNice, Product, Distributed>;
  SamplingScheme(std::size_t n, Variant v) : n_(n), variant_(std::move(v)) {}

  std::size_t n_;
  Variant variant_;
};

/// Stateful sampler holding a copy of its scheme. Keeps index buffers so that a tau-subset
/// costs O(tau) per draw via partial Fisher-Yates. Each solver run owns its
/// own sampler and generator.
class Sampler {
 public:
  explicit Sampler(const SamplingScheme& scheme);

  /// Draws one set, sorted ascending. The span is valid until the next draw.
  std::span<const std::size_t> draw(Rng& rng);

 private:
  void draw_subset(std::size_t begin, std::size_t end, std::size_t tau, Rng& rng);

  SamplingScheme scheme_;
  std::vector<std::size_t> buffer_;
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> out_;
  std::discrete_distribution<std::size_t> serial_;
};

/// One-shot draw; allocates.
std::vector<std::size_t> draw(const SamplingScheme& scheme, Rng& rng);

struct WeightedSet {
  std::vector<std::size_t> indices;
  double prob;
};

inline constexpr double kMaxEnumeratedSupport = 1e6;

/// Full support of the sampling with exact probabilities. Throws
/// SupportTooLargeError when the support exceeds kMaxEnumeratedSupport.
std::vector<WeightedSet> enumerate_distribution(const SamplingScheme& scheme);

/// Size of the support (as a double, it can be astronomically large).
double support_size(const SamplingScheme& scheme);

/// Connected components of the example-feature incidence graph. Returns the
/// component partition (ordered by smallest member) when there are at least
/// two components, nullopt otherwise.
std::optional<Partition> detect_product_partition(const DataMatrix& matrix);

/// Merges groups into at most `target` groups, largest first into the
/// currently smallest bin. Merging keeps group separability.
Partition balance_partition(const Partition& groups, std::size_t target);

/// First feature row whose nonzeros touch two groups, if any.
std::optional<std::size_t> find_separability_violation(const DataMatrix& matrix,
                                                       const Partition& groups);

/// Checks that `groups` are disjoint, nonempty and cover [n].
void validate_partition(const Partition& groups, std::size_t n);

Partition contiguous_partition(std::size_t n, std::size_t parts);

}  // namespace quartz
