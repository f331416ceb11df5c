#include "quartz/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <stdexcept>

#include "quartz/eso.hpp"

namespace quartz {

namespace {

double max_of(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, x);
  return m;
}

void require_positive(double x, const char* name) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw std::invalid_argument(std::string(name) + " must be positive and finite");
  }
}

}  // namespace

ComplexityReport complexity_bound(std::span<const double> p, std::span<const double> v,
                                  double lambda, double gamma, double gap0, double epsilon) {
  if (p.empty() || p.size() != v.size()) throw std::invalid_argument("complexity_bound: size mismatch");
  require_positive(lambda, "lambda");
  require_positive(gamma, "gamma");
  require_positive(gap0, "gap0");
  require_positive(epsilon, "epsilon");
  if (epsilon > gap0) throw std::invalid_argument("complexity_bound: epsilon exceeds the initial gap");
  const double lgn = lambda * gamma * static_cast<double>(p.size());
  ComplexityReport r;
  for (std::size_t i = 0; i < p.size(); ++i) {
    require_positive(p[i], "p_i");
    r.t_iterations = std::max(r.t_iterations, 1.0 / p[i] + v[i] / (p[i] * lgn));
  }
  r.log_factor = std::log(gap0 / epsilon);
  r.t_total = r.t_iterations * r.log_factor;
  r.kappa = max_of(v) / (lambda * gamma);
  return r;
}

ComplexityReport tau_nice_report(const DataMatrix& matrix, std::size_t tau, double lambda,
                                 double gamma, double gap0, double epsilon) {
  const std::size_t n = matrix.cols();
  const auto vs = v_serial(matrix);
  const auto vt = v_tau_nice(matrix, tau);
  const std::vector<double> p(n, static_cast<double>(tau) / static_cast<double>(n));
  ComplexityReport r = complexity_bound(p, vt, lambda, gamma, gap0, epsilon);
  r.kappa = max_of(vs) / (lambda * gamma);
  if (tau >= 2) r.omega_tilde = omega_tilde_from_v(vs, vt, n, tau);
  return r;
}

double speedup_tau_nice(std::size_t n, double lambda, double gamma, double omega_tilde,
                        std::size_t tau) {
  if (n == 0 || tau < 1 || tau > n) throw std::invalid_argument("speedup_tau_nice: need 1 <= tau <= n");
  if (!(omega_tilde >= 1.0) || omega_tilde > static_cast<double>(n)) {
    throw std::invalid_argument("speedup_tau_nice: need 1 <= omega_tilde <= n");
  }
  require_positive(lambda, "lambda");
  require_positive(gamma, "gamma");
  if (tau == 1) return 1.0;
  const double nd = static_cast<double>(n);
  const double t = static_cast<double>(tau);
  const double lgn = lambda * gamma * nd;
  return t / (1.0 + (t - 1.0) * (omega_tilde - 1.0) / ((nd - 1.0) * (1.0 + lgn)));
}

double omega_tilde_from_v(std::span<const double> v_serial, std::span<const double> v_tau,
                          std::size_t n, std::size_t tau) {
  if (tau < 2) throw std::invalid_argument("omega_tilde_from_v: tau must be at least 2");
  const double ms = max_of(v_serial);
  if (!(ms > 0.0)) throw std::invalid_argument("omega_tilde_from_v: matrix has no nonzeros");
  const double ratio = max_of(v_tau) / ms;
  return 1.0 + (static_cast<double>(n) - 1.0) * (ratio - 1.0) / (static_cast<double>(tau) - 1.0);
}

double leading_term_tau_nice(const DataMatrix& matrix, std::size_t tau, double lambda,
                             double gamma) {
  const auto v = v_tau_nice(matrix, tau);
  const double t = static_cast<double>(tau);
  return static_cast<double>(matrix.cols()) / t + max_of(v) / (lambda * gamma * t);
}

DistributedSpeedup speedup_distributed(const DataMatrix& matrix, std::size_t nodes,
                                       std::size_t tau, const Partition& cells, double lambda,
                                       double gamma) {
  require_positive(lambda, "lambda");
  require_positive(gamma, "gamma");
  const std::size_t n = matrix.cols();
  const auto v = v_distributed(matrix, nodes, tau, cells);
  const double lg = lambda * gamma;
  const double ct = static_cast<double>(nodes * tau);

  DistributedSpeedup out;
  out.t_serial = static_cast<double>(n) + max_of(v_serial(matrix)) / lg;
  out.t_distributed = static_cast<double>(n) / ct + max_of(v) / (lg * ct);
  out.speedup = out.t_serial / out.t_distributed;

  const std::size_t s = n / nodes;
  if (tau >= 2 && s >= 2) {
    const double t1 = static_cast<double>(tau) - 1.0;
    const auto& omega = matrix.row_nnz();
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto rows = matrix.col_rows(i);
      const auto vals = matrix.col_values(i);
      double acc = 0.0;
      for (std::size_t q = 0; q < rows.size(); ++q) {
        const double f = 1.0 + t1 * (static_cast<double>(omega[rows[q]]) - 1.0) /
                                   (static_cast<double>(s) - 1.0);
        acc += f * vals[q] * vals[q];
      }
      worst = std::max(worst, acc);
    }
    out.partition_bound = static_cast<double>(n) / ct + (1.0 + 1.0 / t1) * worst / (lg * ct);
  }
  return out;
}

std::vector<ContourPoint> speedup_contour(const DataMatrix& matrix,
                                          std::span<const std::size_t> nodes,
                                          std::span<const std::size_t> taus, double lambda,
                                          double gamma) {
  const std::size_t n = matrix.cols();
  std::vector<ContourPoint> out;
  for (std::size_t c : nodes) {
    if (c == 0 || n % c != 0) continue;
    const Partition cells = contiguous_partition(n, c);
    for (std::size_t tau : taus) {
      if (tau == 0 || c * tau > n) continue;
      const auto r = speedup_distributed(matrix, c, tau, cells, lambda, gamma);
      out.push_back({c, tau, r.t_distributed, r.speedup});
    }
  }
  return out;
}

std::vector<std::size_t> log_grid(std::size_t limit, std::size_t points) {
  std::vector<std::size_t> all;
  for (std::size_t x = 1; x <= limit; x *= 2) {
    all.push_back(x);
    if (x > limit / 2) break;
  }
  if (points == 0 || all.size() <= points) return all;
  if (points == 1) return {all.front()};
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < points; ++k) {
    const std::size_t idx = k * (all.size() - 1) / (points - 1);
    if (out.empty() || out.back() != all[idx]) out.push_back(all[idx]);
  }
  return out;
}

std::array<bool, 3> sandwich_check(double omega_tilde, double tau, double n) {
  // Relative slack absorbs roundoff where a link holds with equality.
  auto le = [](double a, double b) { return a <= b + 1e-12 * std::max({1.0, std::abs(a), std::abs(b)}); };
  const double spread = n > 1.0 ? (omega_tilde - 1.0) * (tau - 1.0) / (n - 1.0) : 0.0;
  const double mid = omega_tilde * tau / n;
  return {le(spread, mid), le(mid, 1.0 + spread), le(1.0 + spread, 1.0 + mid)};
}

std::uint64_t iterations_to_epsilon(std::span<const TraceRecord> trace, double epsilon) {
  for (const auto& r : trace) {
    if (r.gap <= epsilon) return r.iteration;
  }
  throw std::invalid_argument("trace never reaches the target gap");
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of an empty set");
  std::sort(values.begin(), values.end());
  const std::size_t m = values.size() / 2;
  if (values.size() % 2 == 1) return values[m];
  return 0.5 * (values[m - 1] + values[m]);
}

double practical_speedup(std::span<const std::vector<TraceRecord>> serial_traces,
                         std::span<const std::vector<TraceRecord>> scheme_traces,
                         double epsilon) {
  std::vector<double> a;
  std::vector<double> b;
  for (const auto& t : serial_traces) a.push_back(static_cast<double>(iterations_to_epsilon(t, epsilon)));
  for (const auto& t : scheme_traces) b.push_back(static_cast<double>(iterations_to_epsilon(t, epsilon)));
  const double denom = median(std::move(b));
  const double num = median(std::move(a));
  if (denom == 0.0) return num == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  return num / denom;
}

double practical_speedup(std::span<const TraceRecord> serial_trace,
                         std::span<const TraceRecord> scheme_trace, double epsilon) {
  const double num = static_cast<double>(iterations_to_epsilon(serial_trace, epsilon));
  const double denom = static_cast<double>(iterations_to_epsilon(scheme_trace, epsilon));
  if (denom == 0.0) return num == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  return num / denom;
}

}  // namespace quartz
