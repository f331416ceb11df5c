#pragma once

#include <limits>
#include <span>
#include <string>
#include <string_view>

namespace quartz {

enum class LossKind { smoothed_hinge, squared_hinge };

std::string_view to_string(LossKind kind);
/// Accepts "smoothed-hinge" / "squared-hinge" (underscores also accepted).
LossKind parse_loss_kind(std::string_view name);

/// Scalar (1/gamma)-smooth loss phi applied to the margin a = A_i^T w, with
/// labels already folded into A_i.
class LossModel {
 public:
  LossModel(LossKind kind, double gamma);

  LossKind kind() const noexcept { return kind_; }
  double gamma() const noexcept { return gamma_; }

  double value(double a) const;
  double derivative(double a) const;

  /// phi*(b) = sup_a {ab - phi(a)}. Returns +infinity outside the effective
  /// domain ([-1, 0] for the smoothed hinge, (-inf, 0] for the squared hinge).
  double conjugate(double b) const;
  /// Same formula in any floating type, for extended-precision reference code.
  template <typename T>
  T conjugate_as(T b) const {
    const T inf(std::numeric_limits<double>::infinity());
    if (b > T(0)) return inf;
    if (kind_ == LossKind::smoothed_hinge && b < T(-1)) return inf;
    return b + T(gamma_) * b * b / T(2);
  }

  /// Box of dual values alpha with phi*(-alpha) finite.
  double dual_lower() const noexcept { return 0.0; }
  double dual_upper() const noexcept;
  bool dual_feasible(double alpha) const noexcept;

 private:
  LossKind kind_;
  double gamma_;
};

/// g(w) = 1/2 ||w||^2. Strong convexity modulus 1.
class Regularizer {
 public:
  enum class Kind { l2 };

  Kind kind() const noexcept { return Kind::l2; }
  double value(std::span<const double> w) const;
  double conjugate(std::span<const double> s) const;
  /// grad g*(s); the identity for the L2 kind.
  void conjugate_gradient(std::span<const double> s, std::span<double> out) const;
};

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

}  // namespace quartz
