#include "quartz/problem.hpp"

#include <cmath>
#include <stdexcept>

#include "quartz/errors.hpp"

namespace quartz {

ProblemInstance::ProblemInstance(DataMatrix m, LossModel l, double lam, Regularizer r)
    : matrix(std::move(m)), loss(l), reg(r), lambda(lam) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("regularization weight lambda must be positive");
  }
  if (matrix.cols() == 0 || matrix.rows() == 0) {
    throw std::invalid_argument("problem matrix must be nonempty");
  }
}

double primal_value(const ProblemInstance& prob, std::span<const double> w) {
  if (w.size() != prob.d()) throw std::invalid_argument("primal_value: w must have length d");
  double loss_sum = 0.0;
  for (std::size_t i = 0; i < prob.n(); ++i) {
    loss_sum += prob.loss.value(prob.matrix.col_dot(i, w));
  }
  return loss_sum / static_cast<double>(prob.n()) + prob.lambda * prob.reg.value(w);
}

std::vector<double> dual_image(const ProblemInstance& prob, std::span<const double> alpha) {
  if (alpha.size() != prob.n()) throw std::invalid_argument("dual_image: alpha must have length n");
  std::vector<double> out = prob.matrix.times(alpha);
  const double scale = 1.0 / (prob.lambda * static_cast<double>(prob.n()));
  for (double& x : out) x *= scale;
  return out;
}

void check_dual_feasible(const ProblemInstance& prob, std::span<const double> alpha) {
  if (alpha.size() != prob.n()) throw std::invalid_argument("alpha must have length n");
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (!prob.loss.dual_feasible(alpha[i])) throw InfeasibleDualError(i, alpha[i]);
  }
}

double dual_value(const ProblemInstance& prob, std::span<const double> alpha) {
  check_dual_feasible(prob, alpha);
  const std::vector<double> abar = dual_image(prob, alpha);
  double conj_sum = 0.0;
  for (double a : alpha) conj_sum += prob.loss.conjugate(-a);
  return -prob.lambda * prob.reg.conjugate(abar) - conj_sum / static_cast<double>(prob.n());
}

double DualityGap::decomposed(double lambda) const {
  double s = 0.0;
  for (double g : loss_gaps) s += g;
  return lambda * regularizer_gap + s / static_cast<double>(loss_gaps.size());
}

DualityGap duality_gap(const ProblemInstance& prob, std::span<const double> w,
                       std::span<const double> alpha) {
  if (w.size() != prob.d()) throw std::invalid_argument("duality_gap: w must have length d");
  check_dual_feasible(prob, alpha);
  const std::size_t n = prob.n();
  const std::vector<double> abar = dual_image(prob, alpha);

  DualityGap out;
  out.loss_gaps.resize(n);
  double loss_sum = 0.0;
  double conj_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double margin = prob.matrix.col_dot(i, w);
    const double phi = prob.loss.value(margin);
    const double phi_conj = prob.loss.conjugate(-alpha[i]);
    loss_sum += phi;
    conj_sum += phi_conj;
    out.loss_gaps[i] = phi + phi_conj + margin * alpha[i];
  }
  double inner = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) inner += w[j] * abar[j];
  const double g = prob.reg.value(w);
  const double g_conj = prob.reg.conjugate(abar);
  out.regularizer_gap = g + g_conj - inner;

  out.primal = loss_sum / static_cast<double>(n) + prob.lambda * g;
  out.dual = -prob.lambda * g_conj - conj_sum / static_cast<double>(n) + 0.0;
  out.gap = out.primal - out.dual;
  return out;
}

}  // namespace quartz
