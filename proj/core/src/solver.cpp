#include "quartz/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "quartz/eso.hpp"
#include "quartz/errors.hpp"

namespace quartz {

namespace {

// Below this the implicit scale is folded back into y to keep y bounded.
constexpr double kMinScale = 1e-9;
constexpr double kAlphaBarRelTol = 1e-8;

double sq_norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

}  // namespace

std::string_view to_string(DualOption option) {
  return option == DualOption::I ? "I" : "II";
}

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::budget_exhausted: return "budget_exhausted";
    case SolveStatus::aborted: return "aborted";
  }
  return "unknown";
}

QuartzSolver::QuartzSolver(const ProblemInstance& problem, SolverConfig config)
    : QuartzSolver(problem, std::move(config), std::vector<double>(problem.d(), 0.0),
                   std::vector<double>(problem.n(), 0.0)) {}

QuartzSolver::QuartzSolver(const ProblemInstance& problem, SolverConfig config,
                           std::vector<double> w0, std::vector<double> alpha0)
    : problem_(&problem),
      config_(std::move(config)),
      sampler_(config_.scheme),
      rng_(make_rng(config_.seed)) {
  init(std::move(w0), std::move(alpha0));
}

void QuartzSolver::init(std::vector<double> w0, std::vector<double> alpha0) {
  const ProblemInstance& prob = *problem_;
  const std::size_t n = prob.n();
  if (config_.scheme.n() != n) {
    throw std::invalid_argument("sampling size does not match the number of examples");
  }
  if (w0.size() != prob.d()) throw std::invalid_argument("w0 must have length d");
  if (!(config_.epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (!(config_.beta >= 1.0) || !std::isfinite(config_.beta)) {
    throw std::invalid_argument("beta must be a finite value >= 1");
  }
  if (config_.max_epochs == 0) throw std::invalid_argument("max_epochs must be positive");
  check_dual_feasible(prob, alpha0);

  p_ = config_.scheme.inclusion_probs();
  if (config_.v.empty()) {
    v_ = v_for_scheme(prob.matrix, config_.scheme);
  } else {
    if (config_.v.size() != n) throw std::invalid_argument("v override must have length n");
    v_ = config_.v;
  }
  theta_ = quartz::theta(p_, v_, prob.lambda, prob.loss.gamma(), n);
  primal_weight_ = config_.beta * theta_;
  if (primal_weight_ > 1.0) {
    std::ostringstream os;
    os << "beta*theta = " << primal_weight_ << " exceeds 1; primal weight clamped to 1";
    warnings_.push_back(os.str());
    primal_weight_ = 1.0;
  }
  gap_every_ = config_.gap_check_every;
  if (gap_every_ == 0) {
    gap_every_ = static_cast<std::uint64_t>(
        std::ceil(static_cast<double>(n) / config_.scheme.expected_size()));
  }

  alpha_ = std::move(alpha0);
  alpha_bar_ = quartz::dual_image(prob, alpha_);
  y_.resize(prob.d());
  for (std::size_t j = 0; j < y_.size(); ++j) y_[j] = w0[j] - alpha_bar_[j];
  scale_ = 1.0;
  t_ = 0;
  deltas_.reserve(static_cast<std::size_t>(config_.scheme.expected_size()));
  start_ = std::chrono::steady_clock::now();
}

double QuartzSolver::dual_delta(std::size_t i, double a_bar_dot, double a_w_dot) const {
  const ProblemInstance& prob = *problem_;
  if (config_.option == DualOption::I) {
    return option1_closed_form(prob.loss, alpha_[i], a_bar_dot, v_[i], prob.lambda, prob.n());
  }
  return option2_delta(prob.loss, alpha_[i], a_w_dot, theta_, p_[i]);
}

void QuartzSolver::fold_scale() {
  for (double& x : y_) x *= scale_;
  scale_ = 1.0;
}

void QuartzSolver::step() { step(sampler_.draw(rng_)); }

void QuartzSolver::step(std::span<const std::size_t> sampled) {
  // A fixed application order makes the result independent of the order the
  // caller lists the set in.
  std::vector<std::size_t> sorted;
  if (!std::is_sorted(sampled.begin(), sampled.end())) {
    sorted.assign(sampled.begin(), sampled.end());
    std::sort(sorted.begin(), sorted.end());
    sampled = sorted;
  }
  const ProblemInstance& prob = *problem_;
  const DataMatrix& A = prob.matrix;

  // Primal: w <- (1 - rho') w + rho' alpha_bar, i.e. scale the y part.
  const double keep = 1.0 - primal_weight_;
  if (keep == 0.0) {
    std::fill(y_.begin(), y_.end(), 0.0);
    scale_ = 1.0;
  } else {
    scale_ *= keep;
    if (scale_ < kMinScale) fold_scale();
  }

  // Dual: every delta from the same snapshot.
  deltas_.resize(sampled.size());
  for (std::size_t q = 0; q < sampled.size(); ++q) {
    const std::size_t i = sampled[q];
    if (i >= prob.n()) throw std::out_of_range("sampled index out of range");
    const double a_bar = A.col_dot(i, alpha_bar_);
    double a_w = 0.0;
    if (config_.option == DualOption::II) a_w = a_bar + scale_ * A.col_dot(i, y_);
    const double delta = dual_delta(i, a_bar, a_w);
    if (!std::isfinite(delta)) {
      std::ostringstream os;
      os << "non-finite dual step at iteration " << t_ + 1 << ", index " << i;
      throw NumericalError(os.str());
    }
    deltas_[q] = delta;
  }

  const double inv_ln = 1.0 / (prob.lambda * static_cast<double>(prob.n()));
  for (std::size_t q = 0; q < sampled.size(); ++q) {
    const std::size_t i = sampled[q];
    const double old = alpha_[i];
    const double next = std::clamp(old + deltas_[q], prob.loss.dual_lower(), prob.loss.dual_upper());
    alpha_[i] = next;
    const double step = (next - old) * inv_ln;
    if (step == 0.0) continue;
    A.col_axpy(i, step, alpha_bar_);
    A.col_axpy(i, -step / scale_, y_);
  }
  ++t_;
}

std::vector<double> QuartzSolver::primal() const {
  std::vector<double> w(alpha_bar_.size());
  for (std::size_t j = 0; j < w.size(); ++j) w[j] = alpha_bar_[j] + scale_ * y_[j];
  return w;
}

SolverState QuartzSolver::state() const {
  return SolverState{primal(), alpha_, alpha_bar_, t_, trace_};
}

const TraceRecord& QuartzSolver::checkpoint() {
  const ProblemInstance& prob = *problem_;
  std::vector<double> w = primal();
  for (std::size_t j = 0; j < w.size(); ++j) {
    if (!std::isfinite(w[j])) {
      std::ostringstream os;
      os << "non-finite primal iterate at iteration " << t_ << ", feature " << j;
      throw NumericalError(os.str());
    }
  }

  std::vector<double> fresh = quartz::dual_image(prob, alpha_);
  double err = 0.0;
  for (std::size_t j = 0; j < fresh.size(); ++j) {
    const double e = alpha_bar_[j] - fresh[j];
    err += e * e;
  }
  err = std::sqrt(err);
  const double ref = std::sqrt(sq_norm(fresh));
  if (!(err <= kAlphaBarRelTol * ref + 1e-15)) {
    std::ostringstream os;
    os << "maintained alpha_bar drifted from its recomputed value (error " << err
       << ", norm " << ref << ") at iteration " << t_;
    throw NumericalError(os.str());
  }
  // Resynchronize so roundoff does not accumulate between checks.
  alpha_bar_ = std::move(fresh);
  for (std::size_t j = 0; j < w.size(); ++j) y_[j] = w[j] - alpha_bar_[j];
  scale_ = 1.0;

  const DualityGap g = duality_gap(prob, w, alpha_);
  if (!std::isfinite(g.gap)) {
    throw NumericalError("non-finite duality gap at iteration " + std::to_string(t_));
  }
  TraceRecord rec;
  rec.iteration = t_;
  rec.epoch = static_cast<double>(t_) * config_.scheme.expected_size() /
              static_cast<double>(prob.n());
  rec.primal = g.primal;
  rec.dual = g.dual;
  rec.gap = g.gap;
  rec.wall_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(
                    std::chrono::steady_clock::now() - start_)
                    .count();
  trace_.push_back(rec);
  return trace_.back();
}

QuartzSolver::Result QuartzSolver::run() {
  const auto begin = std::chrono::steady_clock::now();
  Result res;
  const std::uint64_t epoch_len = static_cast<std::uint64_t>(
      std::ceil(static_cast<double>(problem_->n()) / config_.scheme.expected_size()));
  const std::uint64_t budget = config_.max_epochs * epoch_len;
  try {
    if (trace_.empty() || trace_.back().iteration != t_) checkpoint();
    res.status = SolveStatus::budget_exhausted;
    while (true) {
      if (trace_.back().gap <= config_.epsilon) {
        res.status = SolveStatus::converged;
        break;
      }
      if (t_ >= budget) break;
      const std::uint64_t stop = std::min(budget, t_ + gap_every_);
      while (t_ < stop) step();
      checkpoint();
    }
  } catch (const NumericalError& e) {
    res.status = SolveStatus::aborted;
    res.diagnostic = e.what();
  }
  res.w = primal();
  res.alpha = alpha_;
  res.trace = trace_;
  res.iterations = t_;
  res.wall = std::chrono::duration_cast<std::chrono::nanoseconds>(
      std::chrono::steady_clock::now() - begin);
  return res;
}

QuartzSolver::Result solve(const ProblemInstance& problem, const SolverConfig& config) {
  QuartzSolver solver(problem, config);
  return solver.run();
}

double option1_closed_form(const LossModel& loss, double alpha, double a_bar_dot, double v,
                           double lambda, std::size_t n) {
  const double gamma = loss.gamma();
  const double step = (1.0 - a_bar_dot - gamma * alpha) /
                      (v / (lambda * static_cast<double>(n)) + gamma);
  if (loss.kind() == LossKind::smoothed_hinge) {
    return std::max(-alpha, std::min(1.0 - alpha, step));
  }
  return std::max(step, -alpha);
}

namespace {

#if defined(__SIZEOF_FLOAT128__)
__extension__ typedef __float128 Wide;
#else
typedef long double Wide;
#endif

template <typename T>
T model_at(const LossModel& loss, T next, T a_bar_dot, T curvature, T delta) {
  return -loss.conjugate_as(-next) - a_bar_dot * delta - curvature * delta * delta / T(2);
}

}  // namespace

double option1_model(const LossModel& loss, double alpha, double a_bar_dot, double v,
                     double lambda, std::size_t n, double delta) {
  const long double curvature =
      static_cast<long double>(v) / (static_cast<long double>(lambda) * static_cast<long double>(n));
  // The solver forms the new block in double, so the domain test does too.
  return static_cast<double>(model_at<long double>(loss, alpha + delta, a_bar_dot, curvature, delta));
}

double option1_numeric(const LossModel& loss, double alpha, double a_bar_dot, double v,
                       double lambda, std::size_t n) {
  // Ternary search on function values resolves the argmax only to about
  // sqrt(epsilon), so the search runs in quad precision where available.
  const Wide a = alpha;
  const Wide ab = a_bar_dot;
  const Wide curvature = Wide(v) / (Wide(lambda) * Wide(n));
  auto f = [&](Wide d) { return model_at<Wide>(loss, a + d, ab, curvature, d); };

  Wide lo = -a;
  Wide hi;
  if (std::isfinite(loss.dual_upper())) {
    hi = Wide(loss.dual_upper()) - a;
  } else {
    // Concave: once f stops increasing the maximizer is bracketed.
    hi = lo + Wide(1);
    while (f(Wide(2) * hi - lo) >= f(hi) && hi - lo < Wide(1e300)) hi = Wide(2) * hi - lo;
    hi = Wide(2) * hi - lo;
  }
  while (hi - lo > Wide(1e-14)) {
    const Wide m1 = lo + (hi - lo) / Wide(3);
    const Wide m2 = hi - (hi - lo) / Wide(3);
    if (f(m1) < f(m2)) {
      lo = m1;
    } else {
      hi = m2;
    }
  }
  return static_cast<double>((lo + hi) / Wide(2));
}

double option2_delta(const LossModel& loss, double alpha, double a_w_dot, double theta,
                     double p) {
  return -theta / p * (alpha + loss.derivative(a_w_dot));
}

}  // namespace quartz
