#pragma once

#include <span>
#include <vector>

#include "quartz/data_matrix.hpp"
#include "quartz/loss.hpp"

namespace quartz {

/// Absolute slack used for gap nonnegativity checks.
inline constexpr double kGapTolerance = 1e-9;

/// min_w (1/n) sum_i phi(A_i^T w) + lambda g(w) and its Fenchel dual.
struct ProblemInstance {
  ProblemInstance(DataMatrix matrix, LossModel loss, double lambda,
                  Regularizer reg = {});

  DataMatrix matrix;
  LossModel loss;
  Regularizer reg;
  double lambda;

  std::size_t n() const noexcept { return matrix.cols(); }
  std::size_t d() const noexcept { return matrix.rows(); }
};

double primal_value(const ProblemInstance& prob, std::span<const double> w);

/// (1/(lambda n)) sum_i A_i alpha_i.
std::vector<double> dual_image(const ProblemInstance& prob,
                               std::span<const double> alpha);

/// Throws InfeasibleDualError when some alpha_i is outside the dual box.
void check_dual_feasible(const ProblemInstance& prob,
                         std::span<const double> alpha);

double dual_value(const ProblemInstance& prob, std::span<const double> alpha);

/// P(w) - D(alpha) together with its Fenchel-Young decomposition
///   gap = lambda * regularizer_gap + (1/n) sum_i loss_gaps[i].
struct DualityGap {
  double primal = 0.0;
  double dual = 0.0;
  double gap = 0.0;
  double regularizer_gap = 0.0;
  std::vector<double> loss_gaps;

  /// lambda * regularizer_gap + mean(loss_gaps).
  double decomposed(double lambda) const;
};

DualityGap duality_gap(const ProblemInstance& prob, std::span<const double> w,
                       std::span<const double> alpha);

}  // namespace quartz
