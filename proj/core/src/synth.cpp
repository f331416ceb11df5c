#include "quartz/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include "quartz/libsvm.hpp"
#include "quartz/random.hpp"

namespace quartz {

std::string_view to_string(OmegaProfile profile) {
  switch (profile) {
    case OmegaProfile::uniform: return "uniform";
    case OmegaProfile::fully_sparse: return "fully-sparse";
    case OmegaProfile::fully_dense: return "fully-dense";
  }
  return "unknown";
}

OmegaProfile parse_omega_profile(std::string_view name) {
  if (name == "uniform") return OmegaProfile::uniform;
  if (name == "fully-sparse" || name == "fully_sparse") return OmegaProfile::fully_sparse;
  if (name == "fully-dense" || name == "fully_dense") return OmegaProfile::fully_dense;
  throw std::invalid_argument("unknown omega profile '" + std::string(name) + "'");
}

DataMatrix synth_instance(const SynthSpec& spec) {
  if (spec.n == 0 || spec.d == 0) throw std::invalid_argument("synth: n and d must be positive");
  if (!(spec.density > 0.0) || spec.density > 1.0) {
    throw std::invalid_argument("synth: density must lie in (0, 1]");
  }
  Rng rng = make_rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto draw_value = [&] {
    double x = 0.0;
    while (x == 0.0) x = normal(rng);
    return x;
  };

  std::vector<std::vector<Entry>> cols(spec.n);
  switch (spec.profile) {
    case OmegaProfile::uniform: {
      std::bernoulli_distribution keep(spec.density);
      std::uniform_int_distribution<std::size_t> any_row(0, spec.d - 1);
      for (auto& col : cols) {
        for (std::size_t j = 0; j < spec.d; ++j) {
          if (keep(rng)) col.push_back({j, draw_value()});
        }
        if (col.empty()) col.push_back({any_row(rng), draw_value()});
      }
      break;
    }
    case OmegaProfile::fully_sparse: {
      const auto k = std::max<std::size_t>(
          1, static_cast<std::size_t>(std::llround(spec.density * static_cast<double>(spec.d))));
      if (spec.n * k > spec.d) {
        throw std::invalid_argument("synth: fully sparse profile needs n * k <= d, got n=" +
                                    std::to_string(spec.n) + ", k=" + std::to_string(k) +
                                    ", d=" + std::to_string(spec.d));
      }
      std::vector<std::size_t> rows(spec.d);
      std::iota(rows.begin(), rows.end(), std::size_t{0});
      std::shuffle(rows.begin(), rows.end(), rng);
      for (std::size_t i = 0; i < spec.n; ++i) {
        for (std::size_t q = 0; q < k; ++q) cols[i].push_back({rows[i * k + q], draw_value()});
      }
      break;
    }
    case OmegaProfile::fully_dense:
      for (auto& col : cols) {
        for (std::size_t j = 0; j < spec.d; ++j) col.push_back({j, draw_value()});
      }
      break;
  }
  DataMatrix m(spec.d, std::move(cols));
  if (spec.normalize) m = normalize_columns(m);
  return m;
}

}  // namespace quartz
