#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "quartz/problem.hpp"
#include "quartz/random.hpp"
#include "quartz/sampling.hpp"

namespace quartz {

/// Option I maximizes the per-block dual model exactly; Option II moves
/// alpha_i toward -phi'(A_i^T w) by the convex weight theta / p_i.
enum class DualOption { I, II };

std::string_view to_string(DualOption option);

struct SolverConfig {
  explicit SolverConfig(SamplingScheme s) : scheme(std::move(s)) {}

  SamplingScheme scheme;
  DualOption option = DualOption::I;
  /// Primal step multiplier; the primal weight is min(beta * theta, 1).
  double beta = 1.0;
  double epsilon = 1e-6;
  std::uint64_t max_epochs = 1000;
  /// Iterations between gap evaluations; 0 means one epoch, ceil(n / E|S|).
  std::uint64_t gap_check_every = 0;
  std::uint64_t seed = 0;
  /// ESO vector override; empty means derive it from the scheme.
  std::vector<double> v;
};

struct TraceRecord {
  std::uint64_t iteration = 0;
  double epoch = 0.0;
  double primal = 0.0;
  double dual = 0.0;
  double gap = 0.0;
  std::int64_t wall_ns = 0;
};

enum class SolveStatus { converged, budget_exhausted, aborted };

std::string_view to_string(SolveStatus status);

struct SolverState {
  std::vector<double> w;
  std::vector<double> alpha;
  std::vector<double> alpha_bar;
  std::uint64_t t = 0;
  std::vector<TraceRecord> trace;
};

/// Quartz: a stochastic primal-dual method for the ERM pair held by a
/// ProblemInstance. The problem must outlive the solver.
///
/// Per iteration:
///   w     <- (1 - beta theta) w + beta theta grad g*(alpha_bar)
///   S     ~ scheme
///   alpha_i += delta_i for i in S, every delta_i computed from the
///              pre-iteration snapshot
///   alpha_bar += (1/(lambda n)) sum_{i in S} A_i delta_i
///
/// w is kept implicitly as alpha_bar + scale * y, so an iteration touches only
/// the nonzeros of the sampled columns and never costs O(d).
class QuartzSolver {
 public:
  /// Starts from w = 0, alpha = 0.
  QuartzSolver(const ProblemInstance& problem, SolverConfig config);
  /// Throws InfeasibleDualError when alpha0 is outside the dual box.
  QuartzSolver(const ProblemInstance& problem, SolverConfig config,
               std::vector<double> w0, std::vector<double> alpha0);

  /// One iteration with a set drawn from the scheme. Throws NumericalError on
  /// a non-finite update.
  void step();
  /// One iteration on a caller-chosen set of distinct indices.
  void step(std::span<const std::size_t> sampled);

  /// Evaluates the gap, checks alpha_bar against a from-scratch recompute,
  /// appends a trace record and returns it.
  const TraceRecord& checkpoint();

  /// Runs until gap <= epsilon (checked every gap_check_every iterations) or
  /// max_epochs are used up.
  struct Result {
    std::vector<double> w;
    std::vector<double> alpha;
    std::vector<TraceRecord> trace;
    SolveStatus status = SolveStatus::budget_exhausted;
    std::string diagnostic;
    std::uint64_t iterations = 0;
    std::chrono::nanoseconds wall{0};
  };
  Result run();

  /// Current iterate; materializes w.
  SolverState state() const;
  std::vector<double> primal() const;
  const std::vector<double>& dual() const noexcept { return alpha_; }
  const std::vector<double>& dual_image() const noexcept { return alpha_bar_; }
  std::uint64_t iteration() const noexcept { return t_; }
  const std::vector<TraceRecord>& trace() const noexcept { return trace_; }

  double theta() const noexcept { return theta_; }
  /// Primal convex weight actually used, min(beta theta, 1).
  double primal_weight() const noexcept { return primal_weight_; }
  const std::vector<double>& probs() const noexcept { return p_; }
  const std::vector<double>& v() const noexcept { return v_; }
  std::uint64_t gap_check_every() const noexcept { return gap_every_; }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }
  const SolverConfig& config() const noexcept { return config_; }

 private:
  void init(std::vector<double> w0, std::vector<double> alpha0);
  double dual_delta(std::size_t i, double a_bar_dot, double a_w_dot) const;
  void fold_scale();

  const ProblemInstance* problem_;
  SolverConfig config_;
  Sampler sampler_;
  Rng rng_;

  std::vector<double> p_;
  std::vector<double> v_;
  double theta_ = 0.0;
  double primal_weight_ = 0.0;
  std::uint64_t gap_every_ = 1;

  std::vector<double> alpha_;
  std::vector<double> alpha_bar_;
  // w = alpha_bar_ + scale_ * y_
  std::vector<double> y_;
  double scale_ = 1.0;
  std::uint64_t t_ = 0;

  std::vector<double> deltas_;
  std::vector<TraceRecord> trace_;
  std::vector<std::string> warnings_;
  std::chrono::steady_clock::time_point start_;
};

QuartzSolver::Result solve(const ProblemInstance& problem, const SolverConfig& config);

/// Exact maximizer of the Option I model
///   -phi*(-(alpha + delta)) - a_bar_dot delta - v delta^2 / (2 lambda n)
/// for the two supported losses.
double option1_closed_form(const LossModel& loss, double alpha, double a_bar_dot,
                           double v, double lambda, std::size_t n);

/// Same maximizer by ternary search on the concave model over the feasible
/// delta interval, to 1e-14 interval width. Independent of the closed form.
double option1_numeric(const LossModel& loss, double alpha, double a_bar_dot,
                       double v, double lambda, std::size_t n);

/// Value of the Option I model at `delta` (-inf outside the dual box).
double option1_model(const LossModel& loss, double alpha, double a_bar_dot,
                     double v, double lambda, std::size_t n, double delta);

/// Option II update -theta/p (alpha + phi'(a_w_dot)).
double option2_delta(const LossModel& loss, double alpha, double a_w_dot,
                     double theta, double p);

}  // namespace quartz
