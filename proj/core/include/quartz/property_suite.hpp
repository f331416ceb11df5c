#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace quartz {

struct PropertyCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct PropertySuiteOptions {
  std::size_t instances = 50;
  std::size_t vectors_per_instance = 20;
  std::size_t contraction_runs = 100;
  std::uint64_t seed = 1;
};

/// Randomized self-checks on small instances: ESO certification for every
/// scheme, pairwise-probability vs enumeration agreement, v reductions, weak
/// duality, and mean gap contraction against (1 - theta)^t.
std::vector<PropertyCheck> run_property_suite(const PropertySuiteOptions& options);

}  // namespace quartz
