#include "quartz/property_suite.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "quartz/eso.hpp"
#include "quartz/problem.hpp"
#include "quartz/random.hpp"
#include "quartz/sampling.hpp"
#include "quartz/solver.hpp"
#include "quartz/synth.hpp"

namespace quartz {

namespace {

DataMatrix random_matrix(Rng& rng, std::size_t max_n, std::size_t max_d) {
  std::uniform_int_distribution<std::size_t> pick_n(2, max_n);
  std::uniform_int_distribution<std::size_t> pick_d(1, max_d);
  std::uniform_int_distribution<int> pick_density(1, 10);
  SynthSpec spec;
  spec.n = pick_n(rng);
  spec.d = pick_d(rng);
  spec.density = pick_density(rng) / 10.0;
  spec.seed = rng();
  return synth_instance(spec);
}

std::vector<SamplingScheme> schemes_for(const DataMatrix& m) {
  const std::size_t n = m.cols();
  std::vector<SamplingScheme> out;
  out.push_back(SamplingScheme::serial_uniform(n));
  out.push_back(SamplingScheme::serial(importance_probs(v_serial(m), 1.0, 1.0, n)));
  for (std::size_t tau : {std::size_t{2}, std::size_t{3}, n}) {
    if (tau <= n) out.push_back(SamplingScheme::tau_nice(n, tau));
  }
  if (auto groups = detect_product_partition(m)) out.push_back(SamplingScheme::product(*groups));
  if (n % 2 == 0) {
    for (std::size_t tau : {std::size_t{1}, std::size_t{2}}) {
      if (tau <= n / 2) out.push_back(SamplingScheme::distributed(n, 2, tau));
    }
  }
  return out;
}

std::vector<double> gaussian_vector(Rng& rng, std::size_t len) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> h(len);
  for (double& x : h) x = normal(rng);
  return h;
}

PropertyCheck eso_certification(const PropertySuiteOptions& opt, Rng& rng) {
  PropertyCheck c{"eso-certification", true, ""};
  double worst = 0.0;
  std::size_t checks = 0;
  for (std::size_t k = 0; k < opt.instances; ++k) {
    const DataMatrix m = random_matrix(rng, 10, 8);
    for (const auto& s : schemes_for(m)) {
      const auto p = s.inclusion_probs();
      const auto v = v_for_scheme(m, s);
      for (std::size_t r = 0; r < opt.vectors_per_instance; ++r) {
        const auto h = gaussian_vector(rng, m.cols());
        const double slack = eso_rhs(p, v, h) - exact_eso_lhs(m, s, h);
        worst = std::min(worst, slack);
        ++checks;
        if (slack < -1e-10 && c.passed) {
          c.passed = false;
          c.detail = "violated for " + s.describe() + " ";
        }
      }
    }
  }
  std::ostringstream os;
  os << c.detail << checks << " checks, worst slack " << worst;
  c.detail = os.str();
  return c;
}

PropertyCheck hadamard_vs_enumeration(const PropertySuiteOptions& opt, Rng& rng) {
  PropertyCheck c{"hadamard-vs-enumeration", true, ""};
  double worst = 0.0;
  for (std::size_t k = 0; k < opt.instances; ++k) {
    const DataMatrix m = random_matrix(rng, 8, 6);
    for (const auto& s : schemes_for(m)) {
      const auto h = gaussian_vector(rng, m.cols());
      const double a = exact_eso_lhs(m, s, h);
      const double b = enumerated_eso_lhs(m, s, h);
      const double rel = std::abs(a - b) / std::max(1.0, std::abs(b));
      worst = std::max(worst, rel);
      if (rel > 1e-12) c.passed = false;
    }
  }
  std::ostringstream os;
  os << "max relative difference " << worst;
  c.detail = os.str();
  return c;
}

PropertyCheck reductions(const PropertySuiteOptions& opt, Rng& rng) {
  PropertyCheck c{"v-reductions", true, ""};
  for (std::size_t k = 0; k < opt.instances && c.passed; ++k) {
    const DataMatrix m = random_matrix(rng, 10, 8);
    const std::size_t n = m.cols();
    if (v_tau_nice(m, 1) != v_serial(m)) {
      c.passed = false;
      c.detail = "tau-nice with tau = 1 differs from serial";
    }
    for (std::size_t tau = 1; tau <= n && c.passed; ++tau) {
      if (v_distributed(m, 1, tau, contiguous_partition(n, 1)) != v_tau_nice(m, tau)) {
        c.passed = false;
        c.detail = "distributed with c = 1 differs from tau-nice at tau = " + std::to_string(tau);
      }
    }
  }
  if (c.passed) c.detail = "exact equality on " + std::to_string(opt.instances) + " instances";
  return c;
}

PropertyCheck weak_duality(const PropertySuiteOptions& opt, Rng& rng) {
  PropertyCheck c{"weak-duality", true, ""};
  double worst = kInfinity;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t k = 0; k < opt.instances * opt.vectors_per_instance; ++k) {
    const DataMatrix m = random_matrix(rng, 10, 8);
    const LossKind kind = k % 2 == 0 ? LossKind::smoothed_hinge : LossKind::squared_hinge;
    const ProblemInstance prob(m, LossModel(kind, 0.1 + 2.0 * unit(rng)), 0.01 + unit(rng));
    const auto w = gaussian_vector(rng, m.rows());
    std::vector<double> alpha(m.cols());
    for (double& a : alpha) a = kind == LossKind::smoothed_hinge ? unit(rng) : 3.0 * unit(rng);
    const double gap = primal_value(prob, w) - dual_value(prob, alpha);
    worst = std::min(worst, gap);
    if (gap < -kGapTolerance) c.passed = false;
  }
  std::ostringstream os;
  os << "smallest gap " << worst;
  c.detail = os.str();
  return c;
}

PropertyCheck contraction(const PropertySuiteOptions& opt) {
  PropertyCheck c{"gap-contraction", true, ""};
  SynthSpec spec;
  spec.n = 20;
  spec.d = 10;
  spec.density = 0.3;
  spec.seed = opt.seed;
  spec.normalize = true;
  const ProblemInstance prob(synth_instance(spec), LossModel(LossKind::smoothed_hinge, 1.0),
                             1.0 / std::sqrt(static_cast<double>(spec.n)));
  const std::size_t n = spec.n;
  const std::vector<std::uint64_t> marks = {n, 2 * n, 4 * n};
  std::vector<double> sums(marks.size(), 0.0);
  double th = 0.0;
  double gap0 = 0.0;
  for (std::size_t r = 0; r < opt.contraction_runs; ++r) {
    SolverConfig cfg{SamplingScheme::serial_uniform(n)};
    cfg.seed = opt.seed * 1000003u + r;
    QuartzSolver solver(prob, cfg);
    th = solver.theta();
    gap0 = solver.checkpoint().gap;
    for (std::size_t q = 0; q < marks.size(); ++q) {
      while (solver.iteration() < marks[q]) solver.step();
      sums[q] += solver.checkpoint().gap;
    }
  }
  std::ostringstream os;
  for (std::size_t q = 0; q < marks.size(); ++q) {
    const double mean = sums[q] / static_cast<double>(opt.contraction_runs);
    const double bound = 1.1 * std::pow(1.0 - th, static_cast<double>(marks[q])) * gap0;
    if (mean > bound) c.passed = false;
    os << (q ? ", " : "") << "t=" << marks[q] << ": " << mean << " <= " << bound;
  }
  c.detail = os.str();
  return c;
}

}  // namespace

std::vector<PropertyCheck> run_property_suite(const PropertySuiteOptions& options) {
  Rng rng = make_rng(options.seed);
  std::vector<PropertyCheck> out;
  out.push_back(eso_certification(options, rng));
  out.push_back(hadamard_vs_enumeration(options, rng));
  out.push_back(reductions(options, rng));
  out.push_back(weak_duality(options, rng));
  out.push_back(contraction(options));
  return out;
}

}  // namespace quartz
