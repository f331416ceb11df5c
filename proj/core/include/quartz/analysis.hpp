#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "quartz/data_matrix.hpp"
#include "quartz/sampling.hpp"
#include "quartz/solver.hpp"

namespace quartz {

struct ComplexityReport {
  /// max_i (1/p_i + v_i / (p_i lambda gamma n)); equals 1/theta.
  double t_iterations = 0.0;
  /// log(gap0 / epsilon).
  double log_factor = 0.0;
  double t_total = 0.0;
  /// max_i v_i / (lambda gamma); the serial condition number when v is serial.
  double kappa = 0.0;
  /// Implied average sparsity; set only by tau_nice_report with tau >= 2.
  std::optional<double> omega_tilde;
};

/// Iteration bound of the main rate. Throws std::invalid_argument when
/// epsilon > gap0 or an input is not positive.
ComplexityReport complexity_bound(std::span<const double> p, std::span<const double> v,
                                  double lambda, double gamma, double gap0,
                                  double epsilon);

/// complexity_bound for tau-nice with kappa from v_serial and omega_tilde filled.
ComplexityReport tau_nice_report(const DataMatrix& matrix, std::size_t tau,
                                 double lambda, double gamma, double gap0,
                                 double epsilon);

/// tau / (1 + (tau - 1)(omega_tilde - 1) / ((n - 1)(1 + lambda gamma n))).
/// Assumes max_i ||A_i||^2 = 1.
double speedup_tau_nice(std::size_t n, double lambda, double gamma,
                        double omega_tilde, std::size_t tau);

/// Average sparsity implied by the computed tau-nice bound:
///   1 + (n - 1)(max v_tau / max v_serial - 1)/(tau - 1).
double omega_tilde_from_v(std::span<const double> v_serial,
                          std::span<const double> v_tau, std::size_t n,
                          std::size_t tau);

/// Leading term T(tau) = n/tau + max_i v_tau_i / (lambda gamma tau).
double leading_term_tau_nice(const DataMatrix& matrix, std::size_t tau,
                             double lambda, double gamma);

struct DistributedSpeedup {
  /// n + max_i ||A_i||^2 / (lambda gamma).
  double t_serial = 0.0;
  /// n/(c tau) + max_i v_i / (lambda gamma c tau) with distributed v.
  double t_distributed = 0.0;
  double speedup = 0.0;
  /// Partition-independent upper bound on t_distributed, available when
  /// n/c >= 2 and tau >= 2.
  std::optional<double> partition_bound;
};

DistributedSpeedup speedup_distributed(const DataMatrix& matrix, std::size_t nodes,
                                       std::size_t tau, const Partition& cells,
                                       double lambda, double gamma);

struct ContourPoint {
  std::size_t nodes;
  std::size_t tau;
  double t_ctau;
  double speedup;
};

/// T(c, tau) over the grid; keeps pairs with c | n and c tau <= n, in
/// (c, tau) lexicographic order. Cells are contiguous.
std::vector<ContourPoint> speedup_contour(const DataMatrix& matrix,
                                          std::span<const std::size_t> nodes,
                                          std::span<const std::size_t> taus,
                                          double lambda, double gamma);

/// Powers of two up to `limit`, optionally thinned to `points` values.
std::vector<std::size_t> log_grid(std::size_t limit, std::size_t points);

/// Checks the chain
///   (w-1)(t-1)/(n-1) <= w t / n <= 1 + (w-1)(t-1)/(n-1) <= 1 + w t / n.
std::array<bool, 3> sandwich_check(double omega_tilde, double tau, double n);

/// Iteration of the first checkpoint with gap <= epsilon. Throws
/// std::invalid_argument if the trace never gets there.
std::uint64_t iterations_to_epsilon(std::span<const TraceRecord> trace,
                                    double epsilon);

double median(std::vector<double> values);

/// median(serial iterations) / median(scheme iterations).
double practical_speedup(std::span<const std::vector<TraceRecord>> serial_traces,
                         std::span<const std::vector<TraceRecord>> scheme_traces,
                         double epsilon);
double practical_speedup(std::span<const TraceRecord> serial_trace,
                         std::span<const TraceRecord> scheme_trace, double epsilon);

}  // namespace quartz
