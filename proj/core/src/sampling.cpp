#include "quartz/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "quartz/errors.hpp"

namespace quartz {

namespace {

std::vector<std::size_t> membership(const Partition& groups, std::size_t n) {
  std::vector<std::size_t> owner(n, 0);
  for (std::size_t l = 0; l < groups.size(); ++l) {
    for (std::size_t i : groups[l]) owner[i] = l;
  }
  return owner;
}

double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) {
    r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return std::round(r);
}

// Calls fn(subset) for every size-k subset of [begin, end) in lexicographic order.
template <typename Fn>
void for_each_combination(std::size_t begin, std::size_t end, std::size_t k, Fn&& fn) {
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), begin);
  if (k > end - begin) return;
  while (true) {
    fn(idx);
    std::size_t pos = k;
    while (pos > 0 && idx[pos - 1] == end - k + pos - 1) --pos;
    if (pos == 0) return;
    ++idx[pos - 1];
    for (std::size_t q = pos; q < k; ++q) idx[q] = idx[q - 1] + 1;
  }
}

}  // namespace

SamplingScheme SamplingScheme::serial_uniform(std::size_t n) {
  if (n == 0) throw std::invalid_argument("sampling over an empty index set");
  return SamplingScheme(n, Serial{std::vector<double>(n, 1.0 / static_cast<double>(n)), true});
}

SamplingScheme SamplingScheme::serial(std::vector<double> probs) {
  if (probs.empty()) throw std::invalid_argument("sampling over an empty index set");
  double total = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (!(probs[i] > 0.0) || !std::isfinite(probs[i])) {
      throw std::invalid_argument("serial sampling is not proper: p_" + std::to_string(i) +
                                  " is not positive");
    }
    total += probs[i];
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("serial probabilities must sum to 1");
  }
  const std::size_t n = probs.size();
  return SamplingScheme(n, Serial{std::move(probs), false});
}

SamplingScheme SamplingScheme::tau_nice(std::size_t n, std::size_t tau) {
  if (n == 0) throw std::invalid_argument("sampling over an empty index set");
  if (tau < 1 || tau > n) throw std::invalid_argument("tau-nice sampling needs 1 <= tau <= n");
  return SamplingScheme(n, TauNice{tau});
}

SamplingScheme SamplingScheme::product(Partition groups) {
  std::size_t n = 0;
  for (const auto& g : groups) n += g.size();
  validate_partition(groups, n);
  for (auto& g : groups) std::sort(g.begin(), g.end());
  auto owner = membership(groups, n);
  return SamplingScheme(n, Product{std::move(groups), std::move(owner)});
}

SamplingScheme SamplingScheme::distributed(std::size_t n, std::size_t nodes, std::size_t tau) {
  if (nodes == 0 || n == 0 || n % nodes != 0) {
    throw std::invalid_argument("distributed sampling needs the node count to divide n");
  }
  return distributed(contiguous_partition(n, nodes), tau);
}

SamplingScheme SamplingScheme::distributed(Partition cells, std::size_t tau) {
  std::size_t n = 0;
  for (const auto& c : cells) n += c.size();
  validate_partition(cells, n);
  const std::size_t size = cells.front().size();
  for (const auto& c : cells) {
    if (c.size() != size) throw std::invalid_argument("distributed cells must have equal size");
  }
  if (tau < 1 || tau > size) {
    throw std::invalid_argument("distributed sampling needs 1 <= tau <= n/c");
  }
  for (auto& c : cells) std::sort(c.begin(), c.end());
  auto owner = membership(cells, n);
  return SamplingScheme(n, Distributed{tau, std::move(cells), std::move(owner)});
}

SamplingScheme::Kind SamplingScheme::kind() const noexcept {
  return static_cast<Kind>(variant_.index());
}

std::string SamplingScheme::describe() const {
  std::ostringstream os;
  switch (kind()) {
    case Kind::serial:
      os << (as_serial()->uniform ? "serial-uniform" : "serial-importance");
      break;
    case Kind::tau_nice:
      os << "tau-nice(tau=" << as_tau_nice()->tau << ")";
      break;
    case Kind::product:
      os << "product(groups=" << as_product()->groups.size() << ")";
      break;
    case Kind::distributed:
      os << "distributed(c=" << as_distributed()->cells.size()
         << ",tau=" << as_distributed()->tau << ")";
      break;
  }
  return os.str();
}

std::size_t SamplingScheme::tau() const noexcept {
  switch (kind()) {
    case Kind::serial: return 1;
    case Kind::tau_nice: return as_tau_nice()->tau;
    case Kind::product: return as_product()->groups.size();
    case Kind::distributed: return as_distributed()->tau;
  }
  return 1;
}

std::size_t SamplingScheme::nodes() const noexcept {
  if (const auto* d = as_distributed()) return d->cells.size();
  return 1;
}

const Partition& SamplingScheme::partition() const noexcept {
  static const Partition empty;
  if (const auto* p = as_product()) return p->groups;
  if (const auto* d = as_distributed()) return d->cells;
  return empty;
}

std::vector<double> SamplingScheme::inclusion_probs() const {
  const double nd = static_cast<double>(n_);
  switch (kind()) {
    case Kind::serial:
      return as_serial()->probs;
    case Kind::tau_nice:
      return std::vector<double>(n_, static_cast<double>(as_tau_nice()->tau) / nd);
    case Kind::product: {
      const auto& p = *as_product();
      std::vector<double> out(n_);
      for (std::size_t i = 0; i < n_; ++i) {
        out[i] = 1.0 / static_cast<double>(p.groups[p.group_of[i]].size());
      }
      return out;
    }
    case Kind::distributed: {
      const auto& d = *as_distributed();
      const double c = static_cast<double>(d.cells.size());
      return std::vector<double>(n_, c * static_cast<double>(d.tau) / nd);
    }
  }
  return {};
}

double SamplingScheme::expected_size() const {
  switch (kind()) {
    case Kind::serial: return 1.0;
    case Kind::tau_nice: return static_cast<double>(as_tau_nice()->tau);
    case Kind::product: return static_cast<double>(as_product()->groups.size());
    case Kind::distributed:
      return static_cast<double>(as_distributed()->tau * as_distributed()->cells.size());
  }
  return 1.0;
}

double SamplingScheme::pair_inclusion_prob(std::size_t i, std::size_t k) const {
  if (i >= n_ || k >= n_) throw std::out_of_range("pair_inclusion_prob: index out of range");
  if (i == k) {
    switch (kind()) {
      case Kind::serial: return as_serial()->probs[i];
      default: return inclusion_probs()[i];
    }
  }
  switch (kind()) {
    case Kind::serial:
      return 0.0;
    case Kind::tau_nice: {
      const double t = static_cast<double>(as_tau_nice()->tau);
      const double nd = static_cast<double>(n_);
      return t * (t - 1.0) / (nd * (nd - 1.0));
    }
    case Kind::product: {
      const auto& p = *as_product();
      if (p.group_of[i] == p.group_of[k]) return 0.0;
      return 1.0 / static_cast<double>(p.groups[p.group_of[i]].size()) /
             static_cast<double>(p.groups[p.group_of[k]].size());
    }
    case Kind::distributed: {
      const auto& d = *as_distributed();
      const double t = static_cast<double>(d.tau);
      const double s = static_cast<double>(d.cells.front().size());
      if (d.cell_of[i] == d.cell_of[k]) return t * (t - 1.0) / (s * (s - 1.0));
      return (t / s) * (t / s);
    }
  }
  return 0.0;
}

Sampler::Sampler(const SamplingScheme& scheme) : scheme_(scheme) {
  const std::size_t n = scheme_.n();
  switch (scheme_.kind()) {
    case SamplingScheme::Kind::serial: {
      const auto& s = *scheme_.as_serial();
      if (!s.uniform) serial_ = std::discrete_distribution<std::size_t>(s.probs.begin(), s.probs.end());
      out_.resize(1);
      break;
    }
    case SamplingScheme::Kind::tau_nice:
      buffer_.resize(n);
      std::iota(buffer_.begin(), buffer_.end(), std::size_t{0});
      offsets_ = {0, n};
      out_.resize(scheme_.as_tau_nice()->tau);
      break;
    case SamplingScheme::Kind::product:
    case SamplingScheme::Kind::distributed: {
      const Partition& parts = scheme_.partition();
      offsets_.push_back(0);
      for (const auto& g : parts) {
        buffer_.insert(buffer_.end(), g.begin(), g.end());
        offsets_.push_back(buffer_.size());
      }
      out_.resize(static_cast<std::size_t>(scheme_.expected_size()));
      break;
    }
  }
}

void Sampler::draw_subset(std::size_t begin, std::size_t end, std::size_t tau, Rng& rng) {
  // Partial Fisher-Yates: the first tau slots become a uniform tau-subset.
  for (std::size_t k = 0; k < tau; ++k) {
    std::uniform_int_distribution<std::size_t> pick(begin + k, end - 1);
    std::swap(buffer_[begin + k], buffer_[pick(rng)]);
  }
}

std::span<const std::size_t> Sampler::draw(Rng& rng) {
  switch (scheme_.kind()) {
    case SamplingScheme::Kind::serial: {
      const auto& s = *scheme_.as_serial();
      if (s.uniform) {
        std::uniform_int_distribution<std::size_t> pick(0, scheme_.n() - 1);
        out_[0] = pick(rng);
      } else {
        out_[0] = serial_(rng);
      }
      break;
    }
    case SamplingScheme::Kind::tau_nice: {
      const std::size_t tau = out_.size();
      draw_subset(0, buffer_.size(), tau, rng);
      std::copy_n(buffer_.begin(), tau, out_.begin());
      break;
    }
    case SamplingScheme::Kind::product: {
      for (std::size_t l = 0; l + 1 < offsets_.size(); ++l) {
        std::uniform_int_distribution<std::size_t> pick(offsets_[l], offsets_[l + 1] - 1);
        out_[l] = buffer_[pick(rng)];
      }
      break;
    }
    case SamplingScheme::Kind::distributed: {
      const std::size_t tau = scheme_.as_distributed()->tau;
      for (std::size_t l = 0; l + 1 < offsets_.size(); ++l) {
        draw_subset(offsets_[l], offsets_[l + 1], tau, rng);
        std::copy_n(buffer_.begin() + static_cast<std::ptrdiff_t>(offsets_[l]), tau,
                    out_.begin() + static_cast<std::ptrdiff_t>(l * tau));
      }
      break;
    }
  }
  std::sort(out_.begin(), out_.end());
  return out_;
}

std::vector<std::size_t> draw(const SamplingScheme& scheme, Rng& rng) {
  Sampler s(scheme);
  auto set = s.draw(rng);
  return {set.begin(), set.end()};
}

double support_size(const SamplingScheme& scheme) {
  switch (scheme.kind()) {
    case SamplingScheme::Kind::serial:
      return static_cast<double>(scheme.n());
    case SamplingScheme::Kind::tau_nice:
      return binomial(scheme.n(), scheme.as_tau_nice()->tau);
    case SamplingScheme::Kind::product: {
      double s = 1.0;
      for (const auto& g : scheme.partition()) s *= static_cast<double>(g.size());
      return s;
    }
    case SamplingScheme::Kind::distributed: {
      const auto& d = *scheme.as_distributed();
      return std::pow(binomial(d.cells.front().size(), d.tau), static_cast<double>(d.cells.size()));
    }
  }
  return 0.0;
}

std::vector<WeightedSet> enumerate_distribution(const SamplingScheme& scheme) {
  const double size = support_size(scheme);
  if (size > kMaxEnumeratedSupport) throw SupportTooLargeError(size, kMaxEnumeratedSupport);

  std::vector<WeightedSet> out;
  out.reserve(static_cast<std::size_t>(size));
  switch (scheme.kind()) {
    case SamplingScheme::Kind::serial: {
      const auto& p = scheme.as_serial()->probs;
      for (std::size_t i = 0; i < p.size(); ++i) out.push_back({{i}, p[i]});
      break;
    }
    case SamplingScheme::Kind::tau_nice: {
      const double prob = 1.0 / size;
      for_each_combination(0, scheme.n(), scheme.as_tau_nice()->tau,
                           [&](const std::vector<std::size_t>& c) { out.push_back({c, prob}); });
      break;
    }
    case SamplingScheme::Kind::product:
    case SamplingScheme::Kind::distributed: {
      const Partition& parts = scheme.partition();
      const std::size_t k = scheme.kind() == SamplingScheme::Kind::product
                                ? 1
                                : scheme.as_distributed()->tau;
      // Per-cell choices, then their Cartesian product.
      std::vector<std::vector<std::vector<std::size_t>>> choices(parts.size());
      for (std::size_t l = 0; l < parts.size(); ++l) {
        for_each_combination(0, parts[l].size(), k, [&](const std::vector<std::size_t>& c) {
          std::vector<std::size_t> pick;
          for (std::size_t q : c) pick.push_back(parts[l][q]);
          choices[l].push_back(std::move(pick));
        });
      }
      const double prob = 1.0 / size;
      std::vector<std::size_t> cursor(parts.size(), 0);
      while (true) {
        std::vector<std::size_t> set;
        for (std::size_t l = 0; l < parts.size(); ++l) {
          const auto& c = choices[l][cursor[l]];
          set.insert(set.end(), c.begin(), c.end());
        }
        std::sort(set.begin(), set.end());
        out.push_back({std::move(set), prob});
        std::size_t l = parts.size();
        while (l > 0) {
          --l;
          if (++cursor[l] < choices[l].size()) break;
          cursor[l] = 0;
          if (l == 0) return out;
        }
        if (parts.empty()) return out;
      }
    }
  }
  return out;
}

std::optional<Partition> detect_product_partition(const DataMatrix& matrix) {
  const std::size_t n = matrix.cols();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (std::size_t j = 0; j < matrix.rows(); ++j) {
    const auto cols = matrix.row_cols(j);
    for (std::size_t q = 1; q < cols.size(); ++q) {
      std::size_t a = find(cols[0]);
      std::size_t b = find(cols[q]);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  }
  // Roots are the smallest members, so scanning in index order yields
  // components ordered by smallest member.
  std::vector<std::size_t> slot(n, n);
  Partition groups;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = find(i);
    if (slot[r] == n) {
      slot[r] = groups.size();
      groups.emplace_back();
    }
    groups[slot[r]].push_back(i);
  }
  if (groups.size() < 2) return std::nullopt;
  return groups;
}

Partition balance_partition(const Partition& groups, std::size_t target) {
  if (target == 0) throw std::invalid_argument("balance_partition: target must be positive");
  if (groups.size() <= target) return groups;
  std::vector<std::size_t> order(groups.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return groups[a].size() > groups[b].size();
  });
  Partition bins(target);
  for (std::size_t g : order) {
    std::size_t best = 0;
    for (std::size_t b = 1; b < target; ++b) {
      if (bins[b].size() < bins[best].size()) best = b;
    }
    bins[best].insert(bins[best].end(), groups[g].begin(), groups[g].end());
  }
  for (auto& b : bins) std::sort(b.begin(), b.end());
  std::sort(bins.begin(), bins.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return bins;
}

std::optional<std::size_t> find_separability_violation(const DataMatrix& matrix,
                                                       const Partition& groups) {
  validate_partition(groups, matrix.cols());
  const auto owner = membership(groups, matrix.cols());
  for (std::size_t j = 0; j < matrix.rows(); ++j) {
    const auto cols = matrix.row_cols(j);
    for (std::size_t q = 1; q < cols.size(); ++q) {
      if (owner[cols[q]] != owner[cols[0]]) return j;
    }
  }
  return std::nullopt;
}

void validate_partition(const Partition& groups, std::size_t n) {
  if (groups.empty() || n == 0) throw std::invalid_argument("partition is empty");
  std::vector<bool> seen(n, false);
  std::size_t count = 0;
  for (const auto& g : groups) {
    if (g.empty()) throw std::invalid_argument("partition has an empty group");
    for (std::size_t i : g) {
      if (i >= n) {
        throw std::invalid_argument("partition index " + std::to_string(i) + " out of range");
      }
      if (seen[i]) {
        throw std::invalid_argument("partition index " + std::to_string(i) + " appears twice");
      }
      seen[i] = true;
      ++count;
    }
  }
  if (count != n) throw std::invalid_argument("partition does not cover all indices");
}

Partition contiguous_partition(std::size_t n, std::size_t parts) {
  if (parts == 0 || parts > n) throw std::invalid_argument("contiguous_partition: bad part count");
  Partition out(parts);
  for (std::size_t l = 0; l < parts; ++l) {
    const std::size_t lo = l * n / parts;
    const std::size_t hi = (l + 1) * n / parts;
    for (std::size_t i = lo; i < hi; ++i) out[l].push_back(i);
  }
  return out;
}

}  // namespace quartz
