#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

#include "quartz/data_matrix.hpp"

namespace quartz {

enum class OmegaProfile { uniform, fully_sparse, fully_dense };

std::string_view to_string(OmegaProfile profile);
OmegaProfile parse_omega_profile(std::string_view name);

struct SynthSpec {
  std::size_t n = 100;
  std::size_t d = 30;
  double density = 0.2;
  OmegaProfile profile = OmegaProfile::uniform;
  std::uint64_t seed = 1;
  /// Scale every column to unit norm after generation.
  bool normalize = false;
};

/// Reproducible random example matrix with standard normal entries.
///   uniform      each entry nonzero with probability `density`, at least one
///                nonzero per column
///   fully_sparse k = max(1, round(density d)) nonzeros per column on disjoint
///                rows, so omega_j <= 1; needs n k <= d
///   fully_dense  every entry nonzero, omega_j = n
/// Throws std::invalid_argument for infeasible parameters.
DataMatrix synth_instance(const SynthSpec& spec);

}  // namespace quartz
