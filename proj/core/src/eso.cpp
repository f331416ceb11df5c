#include "quartz/eso.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "quartz/errors.hpp"

namespace quartz {

namespace {

// v_i = sum_j factor_j A_ji^2, accumulated in column order.
std::vector<double> weighted_sq_norms(const DataMatrix& matrix, std::span<const double> factor) {
  std::vector<double> v(matrix.cols(), 0.0);
  for (std::size_t i = 0; i < matrix.cols(); ++i) {
    const auto rows = matrix.col_rows(i);
    const auto vals = matrix.col_values(i);
    double s = 0.0;
    for (std::size_t q = 0; q < rows.size(); ++q) s += factor[rows[q]] * vals[q] * vals[q];
    v[i] = s;
  }
  return v;
}

// Shared by the tau-nice and distributed formulas so that the c = 1 case
// performs the same floating point operations as tau-nice.
std::vector<double> row_factors(const DataMatrix& matrix, std::size_t nodes, std::size_t tau,
                                std::span<const std::size_t> active) {
  const std::size_t n = matrix.cols();
  const double denom = std::max(static_cast<double>(n / nodes) - 1.0, 1.0);
  const double t1 = static_cast<double>(tau) - 1.0;
  const double spread = static_cast<double>(tau * nodes) / static_cast<double>(n) - t1 / denom;
  const auto& omega = matrix.row_nnz();
  std::vector<double> f(matrix.rows(), 1.0);
  for (std::size_t j = 0; j < f.size(); ++j) {
    if (omega[j] == 0) continue;
    const double w = static_cast<double>(omega[j]);
    double third = 0.0;
    if (!active.empty() && active[j] > 1) {
      const double wp = static_cast<double>(active[j]);
      third = spread * ((wp - 1.0) / wp) * w;
    }
    f[j] = 1.0 + t1 * (w - 1.0) / denom + third;
  }
  return f;
}

}  // namespace

std::vector<double> v_serial(const DataMatrix& matrix) {
  std::vector<double> v(matrix.cols());
  for (std::size_t i = 0; i < matrix.cols(); ++i) v[i] = matrix.col_sq_norm(i);
  return v;
}

std::vector<double> v_tau_nice(const DataMatrix& matrix, std::size_t tau) {
  const std::size_t n = matrix.cols();
  if (tau < 1 || tau > n) throw std::invalid_argument("v_tau_nice: need 1 <= tau <= n");
  if (tau == 1) return v_serial(matrix);
  return weighted_sq_norms(matrix, row_factors(matrix, 1, tau, {}));
}

std::vector<double> v_product(const DataMatrix& matrix, const Partition& groups) {
  if (auto row = find_separability_violation(matrix, groups)) throw SeparabilityError(*row);
  return v_serial(matrix);
}

std::vector<std::size_t> active_cells_per_row(const DataMatrix& matrix, const Partition& cells) {
  validate_partition(cells, matrix.cols());
  std::vector<std::size_t> owner(matrix.cols());
  for (std::size_t l = 0; l < cells.size(); ++l) {
    for (std::size_t i : cells[l]) owner[i] = l;
  }
  std::vector<std::size_t> active(matrix.rows(), 0);
  std::vector<std::size_t> last(cells.size(), std::numeric_limits<std::size_t>::max());
  for (std::size_t j = 0; j < matrix.rows(); ++j) {
    for (std::size_t i : matrix.row_cols(j)) {
      if (last[owner[i]] != j) {
        last[owner[i]] = j;
        ++active[j];
      }
    }
  }
  return active;
}

std::vector<double> v_distributed(const DataMatrix& matrix, std::size_t nodes, std::size_t tau,
                                  const Partition& cells) {
  const std::size_t n = matrix.cols();
  if (nodes == 0 || n % nodes != 0) {
    throw std::invalid_argument("v_distributed: node count must divide n");
  }
  if (cells.size() != nodes) throw std::invalid_argument("v_distributed: need one cell per node");
  for (const auto& c : cells) {
    if (c.size() != n / nodes) throw std::invalid_argument("v_distributed: cells must be equal size");
  }
  if (tau < 1 || tau > n / nodes) throw std::invalid_argument("v_distributed: need 1 <= tau <= n/c");
  const auto active = active_cells_per_row(matrix, cells);
  if (nodes == 1 && tau == 1) return v_serial(matrix);
  return weighted_sq_norms(matrix, row_factors(matrix, nodes, tau, active));
}

std::vector<double> v_for_scheme(const DataMatrix& matrix, const SamplingScheme& scheme) {
  if (scheme.n() != matrix.cols()) {
    throw std::invalid_argument("sampling size does not match the number of examples");
  }
  switch (scheme.kind()) {
    case SamplingScheme::Kind::serial: return v_serial(matrix);
    case SamplingScheme::Kind::tau_nice: return v_tau_nice(matrix, scheme.tau());
    case SamplingScheme::Kind::product: return v_product(matrix, scheme.partition());
    case SamplingScheme::Kind::distributed:
      return v_distributed(matrix, scheme.nodes(), scheme.tau(), scheme.partition());
  }
  return {};
}

double theta(std::span<const double> p, std::span<const double> v, double lambda, double gamma,
             std::size_t n) {
  if (p.size() != v.size() || p.empty()) throw std::invalid_argument("theta: size mismatch");
  if (!(lambda > 0.0) || !(gamma > 0.0)) throw std::invalid_argument("theta: lambda, gamma > 0");
  const double lgn = lambda * gamma * static_cast<double>(n);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(p[i] > 0.0) || v[i] < 0.0) throw std::invalid_argument("theta: need p > 0, v >= 0");
    best = std::min(best, p[i] * lgn / (v[i] + lgn));
  }
  return best;
}

std::vector<double> importance_probs(std::span<const double> v, double lambda, double gamma,
                                     std::size_t n) {
  const double lgn = lambda * gamma * static_cast<double>(n);
  double total = 0.0;
  for (double x : v) total += x + lgn;
  std::vector<double> p(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) p[i] = (v[i] + lgn) / total;
  return p;
}

EsoParams eso_params(const DataMatrix& matrix, const SamplingScheme& scheme, double lambda,
                     double gamma) {
  EsoParams out;
  out.p = scheme.inclusion_probs();
  out.v = v_for_scheme(matrix, scheme);
  out.lambda_gamma_n = lambda * gamma * static_cast<double>(matrix.cols());
  out.theta = theta(out.p, out.v, lambda, gamma, matrix.cols());
  return out;
}

double exact_eso_lhs(const DataMatrix& matrix, const SamplingScheme& scheme,
                     std::span<const double> h) {
  const std::size_t n = matrix.cols();
  if (h.size() != n || scheme.n() != n) throw std::invalid_argument("exact_eso_lhs: size mismatch");
  std::vector<double> dense(matrix.rows(), 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (h[i] == 0.0) continue;
    matrix.col_axpy(i, 1.0, dense);
    for (std::size_t k = 0; k < n; ++k) {
      if (h[k] == 0.0) continue;
      const double pik = scheme.pair_inclusion_prob(i, k);
      if (pik == 0.0) continue;
      total += pik * h[i] * h[k] * matrix.col_dot(k, dense);
    }
    matrix.col_axpy(i, -1.0, dense);
    for (std::size_t r : matrix.col_rows(i)) dense[r] = 0.0;
  }
  return total;
}

double enumerated_eso_lhs(const DataMatrix& matrix, const SamplingScheme& scheme,
                          std::span<const double> h) {
  if (h.size() != matrix.cols()) throw std::invalid_argument("enumerated_eso_lhs: size mismatch");
  std::vector<double> acc(matrix.rows());
  double total = 0.0;
  for (const auto& ws : enumerate_distribution(scheme)) {
    std::fill(acc.begin(), acc.end(), 0.0);
    for (std::size_t i : ws.indices) matrix.col_axpy(i, h[i], acc);
    double sq = 0.0;
    for (double x : acc) sq += x * x;
    total += ws.prob * sq;
  }
  return total;
}

double eso_rhs(std::span<const double> p, std::span<const double> v, std::span<const double> h) {
  if (p.size() != v.size() || p.size() != h.size()) throw std::invalid_argument("eso_rhs: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += p[i] * v[i] * h[i] * h[i];
  return s;
}

std::map<std::size_t, std::size_t> omega_histogram(const DataMatrix& matrix) {
  std::map<std::size_t, std::size_t> hist;
  for (std::size_t w : matrix.row_nnz()) ++hist[w];
  return hist;
}

}  // namespace quartz
