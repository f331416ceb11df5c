#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "quartz/data_matrix.hpp"
#include "quartz/sampling.hpp"

namespace quartz {

// ESO parameters: a vector v with
//   E || sum_{i in S} A_i h_i ||^2 <= sum_i p_i v_i h_i^2   for all h.
// Every closed form below streams once over the nonzeros (after the omega_j
// count, which DataMatrix keeps).

/// v_i = ||A_i||^2. Valid for any serial sampling and for product samplings.
std::vector<double> v_serial(const DataMatrix& matrix);

/// v_i = sum_j (1 + (omega_j - 1)(tau - 1)/(n - 1)) A_ji^2.
/// tau = 1 reproduces v_serial bit for bit; n = 1 requires tau = 1.
std::vector<double> v_tau_nice(const DataMatrix& matrix, std::size_t tau);

/// Same as v_serial after checking group separability; throws
/// SeparabilityError naming the first offending feature row.
std::vector<double> v_product(const DataMatrix& matrix, const Partition& groups);

/// (c, tau)-distributed sampling over equal-size `cells`:
///   v_i = sum_j (1 + (tau-1)(omega_j-1)/s + (tau c/n - (tau-1)/s)(omega'_j-1)/omega'_j omega_j) A_ji^2
/// with s = max(n/c - 1, 1) and omega'_j the number of cells active in row j.
/// c = 1 reproduces v_tau_nice bit for bit.
std::vector<double> v_distributed(const DataMatrix& matrix, std::size_t nodes,
                                  std::size_t tau, const Partition& cells);

/// omega'_j per row for the given cells.
std::vector<std::size_t> active_cells_per_row(const DataMatrix& matrix,
                                              const Partition& cells);

/// Dispatches on the scheme kind.
std::vector<double> v_for_scheme(const DataMatrix& matrix,
                                 const SamplingScheme& scheme);

/// theta = min_i p_i lgn / (v_i + lgn), lgn = lambda * gamma * n.
double theta(std::span<const double> p, std::span<const double> v, double lambda,
             double gamma, std::size_t n);

/// p*_i = (v_i + lgn) / sum_k (v_k + lgn): the serial probabilities that
/// maximize theta.
std::vector<double> importance_probs(std::span<const double> v, double lambda,
                                     double gamma, std::size_t n);

struct EsoParams {
  std::vector<double> p;
  std::vector<double> v;
  double theta = 0.0;
  double lambda_gamma_n = 0.0;
};

EsoParams eso_params(const DataMatrix& matrix, const SamplingScheme& scheme,
                     double lambda, double gamma);

/// E ||A h_[S]||^2 = h^T (P o A^T A) h with the closed-form pairwise
/// inclusion probabilities of the scheme. Works at any n.
double exact_eso_lhs(const DataMatrix& matrix, const SamplingScheme& scheme,
                     std::span<const double> h);

/// Same expectation by summing over the enumerated support. Small n only.
double enumerated_eso_lhs(const DataMatrix& matrix, const SamplingScheme& scheme,
                          std::span<const double> h);

/// sum_i p_i v_i h_i^2.
double eso_rhs(std::span<const double> p, std::span<const double> v,
               std::span<const double> h);

/// omega_j value -> number of rows with that value.
std::map<std::size_t, std::size_t> omega_histogram(const DataMatrix& matrix);

}  // namespace quartz
