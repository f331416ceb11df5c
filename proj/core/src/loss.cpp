#include "quartz/loss.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace quartz {

std::string_view to_string(LossKind kind) {
  switch (kind) {
    case LossKind::smoothed_hinge: return "smoothed-hinge";
    case LossKind::squared_hinge: return "squared-hinge";
  }
  return "unknown";
}

LossKind parse_loss_kind(std::string_view name) {
  if (name == "smoothed-hinge" || name == "smoothed_hinge") return LossKind::smoothed_hinge;
  if (name == "squared-hinge" || name == "squared_hinge") return LossKind::squared_hinge;
  throw std::invalid_argument("unknown loss '" + std::string(name) + "'");
}

LossModel::LossModel(LossKind kind, double gamma) : kind_(kind), gamma_(gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw std::invalid_argument("loss smoothness gamma must be positive and finite");
  }
}

double LossModel::value(double a) const {
  const double r = 1.0 - a;
  if (r <= 0.0) return 0.0;
  if (kind_ == LossKind::smoothed_hinge && r >= gamma_) return r - gamma_ / 2.0;
  return r * r / (2.0 * gamma_);
}

double LossModel::derivative(double a) const {
  const double r = 1.0 - a;
  if (r <= 0.0) return 0.0;
  if (kind_ == LossKind::smoothed_hinge && r >= gamma_) return -1.0;
  return -r / gamma_;
}

double LossModel::conjugate(double b) const { return conjugate_as(b); }

double LossModel::dual_upper() const noexcept {
  return kind_ == LossKind::smoothed_hinge ? 1.0 : kInfinity;
}

bool LossModel::dual_feasible(double alpha) const noexcept {
  return alpha >= dual_lower() && alpha <= dual_upper();
}

double Regularizer::value(std::span<const double> w) const {
  double s = 0.0;
  for (double x : w) s += x * x;
  return 0.5 * s;
}

double Regularizer::conjugate(std::span<const double> s) const { return value(s); }

void Regularizer::conjugate_gradient(std::span<const double> s, std::span<double> out) const {
  if (s.size() != out.size()) throw std::invalid_argument("conjugate_gradient: size mismatch");
  for (std::size_t j = 0; j < s.size(); ++j) out[j] = s[j];
}

}  // namespace quartz
